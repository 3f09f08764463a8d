#include "mwsched/generator.hpp"

#include "mwsched/error.hpp"
#include "mwsched/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace mwsched {

void check(const GeneratorSpec& spec) {
    auto bad = [](const std::string& m) { throw Error(ErrorKind::InvalidArgument, "generator spec: " + m); };
    if (spec.n_workflows == 0) bad("n_workflows must be >= 1");
    if (spec.task_min == 0) bad("task_min must be >= 1 (zero-task workflows are degenerate)");
    if (spec.task_max < spec.task_min) bad("task_max must be >= task_min");
    if (!(spec.ccr >= 0.0) || !std::isfinite(spec.ccr)) bad("ccr must be a finite number >= 0");
    if (!(spec.parallelism > 0.0) || spec.parallelism > 1.0) bad("parallelism must lie in (0, 1]");
}

namespace {

std::string task_name(std::size_t g, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "w%02zu.t%03zu", g, i);
    return buf;
}

std::string workflow_name(std::size_t g) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "w%02zu", g);
    return buf;
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

} // namespace

WorkflowSet generate(const GeneratorSpec& spec) {
    check(spec);
    std::mt19937_64 rng(splitmix64(spec.seed));
    std::uniform_real_distribution<double> workload_dist(10.0, 100.0);
    std::uniform_real_distribution<double> jitter(0.8, 1.2);

    std::vector<Workflow> out;
    out.reserve(spec.n_workflows);
    for (std::size_t g = 0; g < spec.n_workflows; ++g) {
        const std::size_t n = uniform_index(rng, spec.task_min, spec.task_max);
        const auto max_width = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(spec.parallelism * static_cast<double>(n) - 1e-9)));

        std::vector<Task> tasks(n);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            tasks[i] = {task_name(g, i), workload_dist(rng)};
            total += tasks[i].workload;
        }
        const double mean_workload = total / static_cast<double>(n);

        // Consecutive layers [begin, end) over the task indices.
        std::vector<std::pair<std::size_t, std::size_t>> layers;
        for (std::size_t begin = 0; begin < n;) {
            const std::size_t width = uniform_index(rng, 1, std::min(max_width, n - begin));
            layers.emplace_back(begin, begin + width);
            begin += width;
        }

        std::vector<Edge> edges;
        for (std::size_t l = 1; l < layers.size(); ++l) {
            const auto [pb, pe] = layers[l - 1];
            std::vector<std::size_t> prev(pe - pb);
            for (std::size_t k = 0; k < prev.size(); ++k) prev[k] = pb + k;
            for (std::size_t t = layers[l].first; t < layers[l].second; ++t) {
                const std::size_t k = uniform_index(rng, 1, std::min<std::size_t>(3, prev.size()));
                // Partial Fisher-Yates: first k entries become a uniform k-subset.
                for (std::size_t j = 0; j < k; ++j) std::swap(prev[j], prev[uniform_index(rng, j, prev.size() - 1)]);
                std::vector<std::size_t> parents(prev.begin(), prev.begin() + static_cast<std::ptrdiff_t>(k));
                std::sort(parents.begin(), parents.end());
                for (auto p : parents) edges.push_back({tasks[p].id, tasks[t].id, spec.ccr * mean_workload * jitter(rng)});
            }
        }
        out.emplace_back(workflow_name(g), std::move(tasks), std::move(edges));
    }
    return WorkflowSet(std::move(out));
}

double empirical_ccr(const WorkflowSet& ws) {
    double wl = 0.0;
    double ds = 0.0;
    std::size_t n_tasks = 0;
    std::size_t n_edges = 0;
    for (const auto& w : ws.workflows()) {
        for (const auto& t : w.tasks()) wl += t.workload;
        for (const auto& e : w.edges()) ds += e.data_size;
        n_tasks += w.size();
        n_edges += w.edges().size();
    }
    if (n_tasks == 0 || n_edges == 0 || wl == 0.0) return 0.0;
    return (ds / static_cast<double>(n_edges)) / (wl / static_cast<double>(n_tasks));
}

std::vector<NamedSpec> factorial_design(std::uint64_t master_seed) {
    std::vector<NamedSpec> out;
    const std::pair<std::size_t, std::size_t> ranges[] = {{10, 20}, {40, 60}};
    const std::size_t counts[] = {5, 30};
    const double ccrs[] = {0.1, 1000.0};
    const double pars[] = {0.05, 0.30};
    std::size_t index = 1;
    for (auto [lo, hi] : ranges) {
        for (auto n : counts) {
            for (auto ccr : ccrs) {
                for (auto par : pars) {
                    char name[16];
                    std::snprintf(name, sizeof name, "ds%02zu", index);
                    out.push_back({name, {n, lo, hi, ccr, par, mix_seed(master_seed, index)}});
                    ++index;
                }
            }
        }
    }
    return out;
}

} // namespace mwsched
