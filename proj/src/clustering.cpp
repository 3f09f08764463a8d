#include "mwsched/clustering.hpp"

#include "mwsched/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace mwsched {

std::string_view to_string(Clusterer c) {
    switch (c) {
    case Clusterer::DfsCst: return "dfs-cst";
    case Clusterer::P2P: return "p2p";
    case Clusterer::Mdnc: return "mdnc";
    case Clusterer::None: return "none";
    }
    return "?";
}

Clusterer parse_clusterer(std::string_view name) {
    if (name == "dfs-cst") return Clusterer::DfsCst;
    if (name == "p2p") return Clusterer::P2P;
    if (name == "mdnc") return Clusterer::Mdnc;
    if (name == "none") return Clusterer::None;
    throw Error(ErrorKind::InvalidArgument,
                "unknown clusterer '" + std::string(name) + "' (expected dfs-cst, p2p, mdnc or none)");
}

double avg_exec_time(const Task& t, const ResourceCatalog& catalog) {
    double sum = 0.0;
    for (const auto& r : catalog.resources()) sum += t.workload / r.cpu;
    return sum / static_cast<double>(catalog.size());
}

double avg_comm_time(const Edge& e, const ResourceCatalog& catalog) {
    return e.data_size / catalog.mean_bandwidth();
}

std::vector<double> upward_ranks(const Workflow& w, const ResourceCatalog& catalog) {
    std::vector<double> rank(w.size(), 0.0);
    auto order = w.topological_indices();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        double tail = 0.0;
        for (const auto& a : w.successors_of(*it)) {
            tail = std::max(tail, avg_comm_time(w.edges()[a.edge], catalog) + rank[a.task]);
        }
        rank[*it] = avg_exec_time(w.task(*it), catalog) + tail;
    }
    return rank;
}

namespace {

ClusterPlan empty_plan(const WorkflowSet& ws) {
    ClusterPlan plan;
    plan.cluster_of.resize(ws.size());
    for (std::size_t g = 0; g < ws.size(); ++g) plan.cluster_of[g].assign(ws[g].size(), 0);
    return plan;
}

void add_cluster(ClusterPlan& plan, std::size_t g, std::vector<std::size_t> members) {
    const std::size_t id = plan.clusters.size();
    for (auto t : members) plan.cluster_of[g][t] = id;
    plan.clusters.push_back({g, std::move(members)});
}

// Turns a merge relation (next[u] = v, at most one incoming merge per task)
// into chain clusters ordered by the topological position of their heads.
void add_chains(ClusterPlan& plan, const Workflow& w, std::size_t g, const std::vector<std::size_t>& next) {
    constexpr auto none = std::numeric_limits<std::size_t>::max();
    std::vector<bool> has_in(w.size(), false);
    for (auto v : next) {
        if (v != none) has_in[v] = true;
    }
    for (auto t : w.topological_indices()) {
        if (has_in[t]) continue;
        std::vector<std::size_t> chain;
        for (auto cur = t; cur != none; cur = next[cur]) chain.push_back(cur);
        add_cluster(plan, g, std::move(chain));
    }
}

} // namespace

ClusterPlan cluster_dfs_cst(const WorkflowSet& ws, const ResourceCatalog& catalog) {
    ClusterPlan plan = empty_plan(ws);
    for (std::size_t g = 0; g < ws.size(); ++g) {
        const auto& w = ws[g];
        const auto rank = upward_ranks(w, catalog);
        std::vector<bool> clustered(w.size(), false);
        std::vector<double> avg_et(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) avg_et[i] = avg_exec_time(w.task(i), catalog);

        for (std::size_t remaining = w.size(); remaining > 0;) {
            std::size_t start = std::numeric_limits<std::size_t>::max();
            for (std::size_t i = 0; i < w.size(); ++i) {
                if (clustered[i]) continue;
                if (start == std::numeric_limits<std::size_t>::max() || rank[i] > rank[start] ||
                    (rank[i] == rank[start] && w.id_less(i, start))) {
                    start = i;
                }
            }
            std::vector<std::size_t> members{start};
            clustered[start] = true;
            --remaining;
            for (std::size_t cur = start;;) {
                // Successor arcs are in id order, so strict '>' keeps the smallest id on ties.
                std::size_t best = std::numeric_limits<std::size_t>::max();
                double best_score = 0.0;
                for (const auto& a : w.successors_of(cur)) {
                    if (clustered[a.task]) continue;
                    const double score = avg_comm_time(w.edges()[a.edge], catalog) + avg_et[a.task];
                    if (best == std::numeric_limits<std::size_t>::max() || score > best_score) {
                        best = a.task;
                        best_score = score;
                    }
                }
                if (best == std::numeric_limits<std::size_t>::max()) break;
                members.push_back(best);
                clustered[best] = true;
                --remaining;
                cur = best;
            }
            add_cluster(plan, g, std::move(members));
        }
    }
    return plan;
}

ClusterPlan cluster_p2p(const WorkflowSet& ws) {
    constexpr auto none = std::numeric_limits<std::size_t>::max();
    ClusterPlan plan = empty_plan(ws);
    for (std::size_t g = 0; g < ws.size(); ++g) {
        const auto& w = ws[g];
        std::vector<std::size_t> next(w.size(), none);
        for (std::size_t u = 0; u < w.size(); ++u) {
            const auto succ = w.successors_of(u);
            if (succ.size() == 1 && w.predecessors_of(succ[0].task).size() == 1) next[u] = succ[0].task;
        }
        add_chains(plan, w, g, next);
    }
    return plan;
}

ClusterPlan cluster_mdnc(const WorkflowSet& ws) {
    constexpr auto none = std::numeric_limits<std::size_t>::max();
    ClusterPlan plan = empty_plan(ws);
    for (std::size_t g = 0; g < ws.size(); ++g) {
        const auto& w = ws[g];
        const auto topo = w.topological_indices();
        std::vector<std::size_t> level(w.size(), 0);
        for (auto t : topo) {
            for (const auto& a : w.successors_of(t)) level[a.task] = std::max(level[a.task], level[t] + 1);
        }

        std::vector<std::size_t> by_level(w.size());
        std::iota(by_level.begin(), by_level.end(), std::size_t{0});
        std::sort(by_level.begin(), by_level.end(), [&](std::size_t a, std::size_t b) {
            return level[a] != level[b] ? level[a] < level[b] : w.id_less(a, b);
        });

        std::vector<std::size_t> next(w.size(), none);
        std::vector<bool> has_in(w.size(), false);
        for (auto u : by_level) {
            for (const auto& a : w.successors_of(u)) { // id order
                if (level[a.task] == level[u] + 1 && !has_in[a.task]) {
                    next[u] = a.task;
                    has_in[a.task] = true;
                    break;
                }
            }
        }
        add_chains(plan, w, g, next);
    }
    return plan;
}

ClusterPlan cluster_none(const WorkflowSet& ws) {
    ClusterPlan plan = empty_plan(ws);
    for (std::size_t g = 0; g < ws.size(); ++g) {
        for (auto t : ws[g].topological_indices()) add_cluster(plan, g, {t});
    }
    return plan;
}

ClusterPlan make_plan(Clusterer c, const WorkflowSet& ws, const ResourceCatalog& catalog) {
    switch (c) {
    case Clusterer::DfsCst: return cluster_dfs_cst(ws, catalog);
    case Clusterer::P2P: return cluster_p2p(ws);
    case Clusterer::Mdnc: return cluster_mdnc(ws);
    case Clusterer::None: return cluster_none(ws);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown clusterer");
}

OrderedPlan order_interleave(const ClusterPlan& plan, const WorkflowSet& ws) {
    if (auto problem = check_plan(plan, ws); !problem.empty()) {
        throw Error(ErrorKind::InvalidArgument, "order_interleave: " + problem);
    }
    std::vector<std::vector<std::size_t>> clusters_of(ws.size());
    for (std::size_t k = 0; k < plan.size(); ++k) clusters_of[plan.clusters[k].workflow].push_back(k);

    std::vector<std::size_t> cursor(plan.size(), 0);      // next member position per cluster
    std::vector<std::size_t> first_live(ws.size(), 0);    // first cluster (in clusters_of) not exhausted
    std::vector<std::size_t> remaining(ws.size());
    std::vector<std::vector<bool>> emitted(ws.size());
    std::size_t total = 0;
    for (std::size_t g = 0; g < ws.size(); ++g) {
        remaining[g] = ws[g].size();
        emitted[g].assign(ws[g].size(), false);
        total += ws[g].size();
    }

    OrderedPlan out;
    out.order.reserve(total);
    while (out.order.size() < total) {
        bool progressed = false;
        for (std::size_t g = 0; g < ws.size(); ++g) {
            if (remaining[g] == 0) continue;
            const auto& w = ws[g];
            auto& live = first_live[g];
            while (live < clusters_of[g].size() &&
                   cursor[clusters_of[g][live]] == plan.clusters[clusters_of[g][live]].members.size()) {
                ++live;
            }
            for (std::size_t idx = live; idx < clusters_of[g].size(); ++idx) {
                const std::size_t k = clusters_of[g][idx];
                const auto& members = plan.clusters[k].members;
                if (cursor[k] == members.size()) continue;
                const std::size_t t = members[cursor[k]];
                const auto preds = w.predecessors_of(t);
                const bool ready =
                    std::all_of(preds.begin(), preds.end(), [&](const Arc& a) { return emitted[g][a.task]; });
                if (!ready) continue;
                emitted[g][t] = true;
                ++cursor[k];
                --remaining[g];
                out.order.push_back({g, t});
                progressed = true;
                break;
            }
        }
        if (!progressed) throw Error(ErrorKind::Domain, "order_interleave: no ready task (cluster chains deadlock)");
    }
    return out;
}

std::string check_plan(const ClusterPlan& plan, const WorkflowSet& ws) {
    if (plan.cluster_of.size() != ws.size()) return "cluster_of has wrong workflow count";
    std::vector<std::vector<int>> seen(ws.size());
    for (std::size_t g = 0; g < ws.size(); ++g) {
        if (plan.cluster_of[g].size() != ws[g].size()) return "cluster_of has wrong task count";
        seen[g].assign(ws[g].size(), 0);
    }
    for (std::size_t k = 0; k < plan.size(); ++k) {
        const auto& c = plan.clusters[k];
        if (c.workflow >= ws.size()) return "cluster " + std::to_string(k) + " names an unknown workflow";
        if (c.members.empty()) return "cluster " + std::to_string(k) + " is empty";
        const auto& w = ws[c.workflow];
        for (std::size_t m = 0; m < c.members.size(); ++m) {
            const auto t = c.members[m];
            if (t >= w.size()) return "cluster " + std::to_string(k) + " has an out-of-range member";
            if (++seen[c.workflow][t] > 1) return "task '" + w.task(t).id + "' is in more than one cluster";
            if (plan.cluster_of[c.workflow][t] != k) return "cluster_of disagrees for task '" + w.task(t).id + "'";
            if (m > 0) {
                const auto succ = w.successors_of(c.members[m - 1]);
                const bool linked = std::any_of(succ.begin(), succ.end(), [&](const Arc& a) { return a.task == t; });
                if (!linked) return "cluster " + std::to_string(k) + " is not a successor chain at '" + w.task(t).id + "'";
            }
        }
    }
    for (std::size_t g = 0; g < ws.size(); ++g) {
        for (std::size_t t = 0; t < ws[g].size(); ++t) {
            if (seen[g][t] == 0) return "task '" + ws[g].task(t).id + "' is not in any cluster";
        }
    }
    return {};
}

nlohmann::json to_json(const ClusterPlan& plan, const WorkflowSet& ws) {
    nlohmann::json clusters = nlohmann::json::array();
    for (std::size_t k = 0; k < plan.size(); ++k) {
        const auto& c = plan.clusters[k];
        nlohmann::json members = nlohmann::json::array();
        for (auto t : c.members) members.push_back(ws[c.workflow].task(t).id);
        clusters.push_back({{"id", k}, {"workflow", ws[c.workflow].id()}, {"members", std::move(members)}});
    }
    return nlohmann::json{{"clusters", std::move(clusters)}};
}

ClusterPlan cluster_plan_from_json(const nlohmann::json& doc, const WorkflowSet& ws) {
    ClusterPlan plan = empty_plan(ws);
    try {
        for (const auto& jc : doc.at("clusters")) {
            const auto wid = jc.at("workflow").get<std::string>();
            std::size_t g = ws.size();
            for (std::size_t i = 0; i < ws.size(); ++i) {
                if (ws[i].id() == wid) g = i;
            }
            if (g == ws.size()) throw Error(ErrorKind::Schema, "clusters: unknown workflow '" + wid + "'");
            std::vector<std::size_t> members;
            for (const auto& m : jc.at("members")) members.push_back(ws[g].index_of(m.get<std::string>()));
            add_cluster(plan, g, std::move(members));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Schema, std::string("cluster plan: ") + e.what());
    }
    if (auto problem = check_plan(plan, ws); !problem.empty()) throw Error(ErrorKind::Schema, "cluster plan: " + problem);
    return plan;
}

} // namespace mwsched
