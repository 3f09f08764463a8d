#pragma once

// Small random problem instances for oracle comparisons.

#include "mwsched/resources.hpp"
#include "mwsched/workflow.hpp"

#include <random>
#include <string>
#include <vector>

namespace oracle {

struct Instance {
    mwsched::WorkflowSet ws;
    mwsched::ResourceCatalog catalog;
};

// 1-3 workflows with at most `max_tasks` tasks in total, 1-`max_resources`
// resources with varied speed, bandwidth, price and billing interval.
inline Instance random_instance(std::mt19937_64& rng, std::size_t max_tasks = 8, std::size_t max_resources = 3) {
    auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };

    const std::size_t total = pick(1, max_tasks);
    const std::size_t n_wf = pick(1, std::min<std::size_t>(3, total));
    std::vector<std::size_t> sizes(n_wf, 1);
    for (std::size_t extra = total - n_wf; extra > 0; --extra) ++sizes[pick(0, n_wf - 1)];

    std::vector<mwsched::Workflow> wfs;
    for (std::size_t g = 0; g < n_wf; ++g) {
        const std::string wid = "w" + std::to_string(g);
        std::vector<mwsched::Task> tasks;
        std::vector<mwsched::Edge> edges;
        for (std::size_t i = 0; i < sizes[g]; ++i) {
            const double wl = pick(0, 9) == 0 ? 0.0 : uniform(1.0, 50.0);
            tasks.push_back({wid + ".t" + std::to_string(i), wl});
        }
        for (std::size_t i = 0; i < sizes[g]; ++i)
            for (std::size_t j = i + 1; j < sizes[g]; ++j)
                if (pick(0, 2) == 0) {
                    const double ds = pick(0, 5) == 0 ? 0.0 : uniform(0.0, 80.0);
                    edges.push_back({tasks[i].id, tasks[j].id, ds});
                }
        wfs.emplace_back(wid, std::move(tasks), std::move(edges));
    }

    std::vector<mwsched::Resource> rs;
    const std::size_t n_res = pick(1, max_resources);
    for (std::size_t r = 0; r < n_res; ++r) {
        rs.push_back({"r" + std::to_string(r), uniform(0.5, 8.0), uniform(1.0, 30.0), uniform(0.5, 10.0),
                      pick(0, 1) ? 1.0 : uniform(0.5, 4.0)});
    }
    return {mwsched::WorkflowSet(std::move(wfs)), mwsched::ResourceCatalog(std::move(rs))};
}

// Single workflow of exactly `n` tasks with random edges and positive weights.
inline mwsched::Workflow random_workflow(std::mt19937_64& rng, std::size_t n, const std::string& id = "w") {
    auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    std::vector<mwsched::Task> tasks;
    std::vector<mwsched::Edge> edges;
    for (std::size_t i = 0; i < n; ++i) tasks.push_back({id + ".t" + std::to_string(i), uniform(1.0, 40.0)});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng() % 2 == 0) edges.push_back({tasks[i].id, tasks[j].id, uniform(0.0, 60.0)});
    return mwsched::Workflow(id, std::move(tasks), std::move(edges));
}

} // namespace oracle
