#pragma once

#include "mwsched/resources.hpp"
#include "mwsched/workflow.hpp"

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mwsched {

// An ordered group of dependent tasks of one workflow that will share a
// resource. Members are local task indices in insertion order; each member
// after the first is a direct successor of the one before it.
struct Cluster {
    std::size_t workflow = 0;
    std::vector<std::size_t> members;
};

// Partition of every task of a WorkflowSet. Cluster id = position in
// `clusters`; ids are grouped by workflow in workflow-list order.
struct ClusterPlan {
    std::vector<Cluster> clusters;
    std::vector<std::vector<std::size_t>> cluster_of; // [workflow][task] -> cluster id

    std::size_t size() const noexcept { return clusters.size(); }
};

// Global execution order across workflows.
struct OrderedPlan {
    std::vector<TaskRef> order;
};

enum class Clusterer { DfsCst, P2P, Mdnc, None };

std::string_view to_string(Clusterer c);
// Accepts "dfs-cst", "p2p", "mdnc", "none". Throws Error(InvalidArgument).
Clusterer parse_clusterer(std::string_view name);

// Mean execution time of a task over all resources.
double avg_exec_time(const Task& t, const ResourceCatalog& catalog);
// Data size over the mean bandwidth of the catalog.
double avg_comm_time(const Edge& e, const ResourceCatalog& catalog);

// Upward rank over averaged costs: rank(t) = avgET(t) + max_succ(avgCT + rank(succ)).
std::vector<double> upward_ranks(const Workflow& w, const ResourceCatalog& catalog);

// Depth-first clustering along the critical successor: a cluster opens at the
// unclustered task with the highest upward rank and grows by appending the
// unclustered successor with the largest avgCT + avgET until none is left.
ClusterPlan cluster_dfs_cst(const WorkflowSet& ws, const ResourceCatalog& catalog);

// Pipeline merging: u->v joins u and v iff u has one child and v one parent.
ClusterPlan cluster_p2p(const WorkflowSet& ws);

// Level-by-level greedy merge of each task with one dependent in the next
// longest-path level (smallest id first), producing chains across levels.
ClusterPlan cluster_mdnc(const WorkflowSet& ws);

// Every task its own cluster.
ClusterPlan cluster_none(const WorkflowSet& ws);

ClusterPlan make_plan(Clusterer c, const WorkflowSet& ws, const ResourceCatalog& catalog);

// Round-robin over workflows; each turn emits one ready task, taken from the
// lowest-id cluster of that workflow whose next member has all predecessors emitted.
OrderedPlan order_interleave(const ClusterPlan& plan, const WorkflowSet& ws);

// Empty string when `plan` partitions `ws` and every cluster is a successor chain.
std::string check_plan(const ClusterPlan& plan, const WorkflowSet& ws);

// {"clusters":[{"id":k,"workflow":"..","members":["t1",..]}]}
nlohmann::json to_json(const ClusterPlan& plan, const WorkflowSet& ws);
ClusterPlan cluster_plan_from_json(const nlohmann::json& doc, const WorkflowSet& ws);

} // namespace mwsched
