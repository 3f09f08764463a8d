#include <doctest.h>

#include "mwsched/error.hpp"
#include "mwsched/generator.hpp"
#include "mwsched/io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

using namespace mwsched;

namespace {

// Longest-path depth of every task, from edges alone.
std::vector<std::size_t> depths(const Workflow& w) {
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < w.size(); ++i) idx[w.task(i).id] = i;
    std::vector<std::size_t> d(w.size(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& e : w.edges()) {
            auto& dd = d[idx.at(e.dst)];
            if (dd < d[idx.at(e.src)] + 1) {
                dd = d[idx.at(e.src)] + 1;
                changed = true;
            }
        }
    }
    return d;
}

void check_shape(const WorkflowSet& ws, const GeneratorSpec& spec) {
    CHECK(ws.size() == spec.n_workflows);
    CHECK(validate(ws).empty());
    for (const auto& w : ws.workflows()) {
        const std::size_t n = w.size();
        CHECK(n >= spec.task_min);
        CHECK(n <= spec.task_max);
        const auto cap = static_cast<std::size_t>(std::ceil(spec.parallelism * static_cast<double>(n) - 1e-9));
        const auto d = depths(w);
        std::map<std::size_t, std::size_t> width;
        for (auto x : d) ++width[x];
        for (auto [lvl, cnt] : width) CHECK(cnt <= std::max<std::size_t>(cap, 1));
        std::map<std::string, std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i) idx[w.task(i).id] = i;
        std::vector<std::size_t> parents(n, 0);
        double mean_wl = 0.0;
        for (const auto& t : w.tasks()) {
            CHECK(t.workload >= 10.0);
            CHECK(t.workload <= 100.0);
            mean_wl += t.workload;
        }
        mean_wl /= static_cast<double>(n);
        for (const auto& e : w.edges()) {
            CHECK(d[idx.at(e.dst)] == d[idx.at(e.src)] + 1);
            ++parents[idx.at(e.dst)];
            const double ratio = e.data_size / mean_wl;
            CHECK(ratio >= 0.8 * spec.ccr - 1e-9);
            CHECK(ratio <= 1.2 * spec.ccr + 1e-9);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (d[i] == 0) continue;
            CHECK(parents[i] >= 1);
            CHECK(parents[i] <= 3);
        }
    }
}

} // namespace

TEST_CASE("first factorial row shape") {
    const GeneratorSpec spec{5, 10, 20, 0.1, 0.05, 42};
    const auto ws = generate(spec);
    check_shape(ws, spec);
    // ceil(0.05 * n) = 1 for n <= 20: every workflow is a chain.
    for (const auto& w : ws.workflows()) CHECK(w.edges().size() == w.size() - 1);
}

TEST_CASE("every factorial dataset satisfies its spec") {
    const auto design = factorial_design(7);
    REQUIRE(design.size() == 16);
    std::set<std::uint64_t> seeds;
    for (const auto& d : design) {
        CAPTURE(d.name);
        seeds.insert(d.spec.seed);
        const auto ws = generate(d.spec);
        check_shape(ws, d.spec);
        const double ccr = empirical_ccr(ws);
        CHECK(ccr >= 0.8 * d.spec.ccr);
        CHECK(ccr <= 1.2 * d.spec.ccr);
    }
    CHECK(seeds.size() == 16);
    CHECK(design[0].name == "ds01");
    CHECK(design[0].spec.task_min == 10);
    CHECK(design[0].spec.n_workflows == 5);
    CHECK(design[0].spec.ccr == 0.1);
    CHECK(design[0].spec.parallelism == 0.05);
    CHECK(design[15].name == "ds16");
    CHECK(design[15].spec.task_max == 60);
    CHECK(design[15].spec.n_workflows == 30);
    CHECK(design[15].spec.ccr == 1000.0);
    CHECK(design[15].spec.parallelism == 0.30);
}

TEST_CASE("full parallelism allows a single layer") {
    bool saw_wide = false;
    for (std::uint64_t seed = 0; seed < 200 && !saw_wide; ++seed) {
        const GeneratorSpec spec{1, 6, 6, 1.0, 1.0, seed};
        const auto ws = generate(spec);
        check_shape(ws, spec);
        saw_wide = ws[0].edges().empty();
    }
    CHECK(saw_wide);
}

TEST_CASE("generation is deterministic") {
    const GeneratorSpec spec{4, 10, 30, 5.0, 0.3, 99};
    CHECK(to_json(generate(spec)).dump() == to_json(generate(spec)).dump());
    auto other = spec;
    other.seed = 100;
    CHECK(to_json(generate(spec)).dump() != to_json(generate(other)).dump());
}

TEST_CASE("degenerate specs") {
    CHECK_THROWS_AS(generate({0, 10, 20, 0.1, 0.05, 1}), Error);
    CHECK_THROWS_AS(generate({1, 0, 0, 0.1, 0.05, 1}), Error);
    CHECK_THROWS_AS(generate({1, 20, 10, 0.1, 0.05, 1}), Error);
    CHECK_THROWS_AS(generate({1, 10, 20, -1.0, 0.05, 1}), Error);
    CHECK_THROWS_AS(generate({1, 10, 20, 0.1, 0.0, 1}), Error);
    CHECK_THROWS_AS(generate({1, 10, 20, 0.1, 1.5, 1}), Error);
}
