#pragma once

#include "mwsched/clustering.hpp"
#include "mwsched/resources.hpp"
#include "mwsched/workflow.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace mwsched {

// Time and cost model.
double exec_time(const Task& t, const Resource& r);
double comm_time(const Edge& e, std::size_t r, std::size_t s, const ResourceCatalog& catalog);
double exec_cost(const Task& t, const Resource& r);

// One resource index per cluster.
struct Assignment {
    std::vector<int> genes;

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct Placement {
    std::size_t resource = 0;
    double start = 0.0;
    double finish = 0.0;
    double cost = 0.0;
};

struct Objectives {
    double makespan = 0.0; // T_total
    double cost = 0.0;     // C_total
    double unfairness = 0.0;

    std::array<double, 3> as_array() const { return {makespan, cost, unfairness}; }
    friend bool operator==(const Objectives&, const Objectives&) = default;
};

struct Schedule {
    std::vector<std::vector<Placement>> placements; // [workflow][task]
    Objectives objectives;
};

// Per-workflow single-tenant references: HEFT makespan and cheapest cost.
// Computed once per (WorkflowSet, catalog).
struct Baselines {
    std::vector<double> heft_makespan;
    std::vector<double> cheapest_cost;
};

struct WorkflowLoss {
    double slowdown = 0.0;
    double overspending = 0.0;
    double loss = 0.0;
};

struct LossReport {
    std::vector<WorkflowLoss> per_workflow;
    double mean_loss = 0.0;
    double uf = 0.0; // population standard deviation of the losses
};

// HEFT list scheduling of `w` alone on the whole catalog (insertion-based).
struct HeftResult {
    double makespan = 0.0;
    std::vector<Placement> placements;
};
HeftResult heft_schedule(const Workflow& w, const ResourceCatalog& catalog);
double heft_alone(const Workflow& w, const ResourceCatalog& catalog);
double cheapest_alone(const Workflow& w, const ResourceCatalog& catalog);

Baselines compute_baselines(const WorkflowSet& ws, const ResourceCatalog& catalog);

// Throws Error(Domain) when a baseline is zero.
LossReport loss_report(const Schedule& sched, const WorkflowSet& ws, const Baselines& baselines);

// Everything the decoder needs, bundled once per (dataset, clusterer) and
// shared read-only across evaluations.
struct Problem {
    const WorkflowSet* ws = nullptr;
    const ResourceCatalog* catalog = nullptr;
    const ClusterPlan* plan = nullptr;
    const OrderedPlan* order = nullptr;
    const Baselines* baselines = nullptr;
};

// Non-insertion list decoding: tasks are taken in global order, each runs on
// its cluster's resource and starts at max(resource ready, latest predecessor
// arrival). Throws Error(InvalidArgument) on a shape mismatch.
Schedule decode(const Problem& p, const Assignment& asg);

// Decode without the fairness term (unfairness left at 0). Useful when no
// baselines exist yet.
Schedule decode_times(const WorkflowSet& ws, const ResourceCatalog& catalog, const ClusterPlan& plan,
                      const OrderedPlan& order, const Assignment& asg);

// Re-derives feasibility from raw inputs: finish = start + ET, precedence
// with communication delay, and no overlap on a resource. Returns the first
// problem found or an empty string.
std::string check_schedule(const Schedule& sched, const WorkflowSet& ws, const ResourceCatalog& catalog,
                           double tol = 1e-9);

nlohmann::json to_json(const Schedule& sched, const WorkflowSet& ws, const ResourceCatalog& catalog);
// task,workflow,resource,start,finish rows for Gantt plotting.
std::string gantt_csv(const Schedule& sched, const WorkflowSet& ws, const ResourceCatalog& catalog);

} // namespace mwsched
