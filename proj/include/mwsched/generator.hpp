#pragma once

#include "mwsched/workflow.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mwsched {

// Four-factor synthetic dataset description.
struct GeneratorSpec {
    std::size_t n_workflows = 5;
    std::size_t task_min = 10; // task count per workflow ~ U{task_min..task_max}
    std::size_t task_max = 20;
    double ccr = 0.1;          // mean data size / mean workload
    double parallelism = 0.05; // max layer width as a fraction of the workflow's task count
    std::uint64_t seed = 0;
};

// Throws Error(InvalidArgument) for a degenerate spec.
void check(const GeneratorSpec& spec);

// Layered random DAGs. Each layer's width is drawn from
// [1, ceil(parallelism * n)]; every task outside the first layer gets 1-3
// distinct parents from the previous layer. Workloads ~ U[10, 100]; each edge
// carries ccr * (workflow mean workload) * U[0.8, 1.2]. Pure function of spec.
WorkflowSet generate(const GeneratorSpec& spec);

// Mean data size over all edges divided by mean workload over all tasks.
double empirical_ccr(const WorkflowSet& ws);

struct NamedSpec {
    std::string name;
    GeneratorSpec spec;
};

// The sixteen-dataset full-factorial design (task range x set size x CCR x
// parallelism), in the canonical dataset order 1..16. Per-dataset seeds are
// derived from `master_seed`.
std::vector<NamedSpec> factorial_design(std::uint64_t master_seed);

} // namespace mwsched
