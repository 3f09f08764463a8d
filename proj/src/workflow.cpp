#include "mwsched/workflow.hpp"

#include "mwsched/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <unordered_set>

namespace mwsched {

Workflow::Workflow(std::string id, std::vector<Task> tasks, std::vector<Edge> edges)
    : id_(std::move(id)), tasks_(std::move(tasks)), edges_(std::move(edges)) {
    index_.reserve(tasks_.size());
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
        index_.emplace(tasks_[i].id, i); // first occurrence wins
    }
    succ_.resize(tasks_.size());
    pred_.resize(tasks_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        auto s = index_.find(edges_[e].src);
        auto d = index_.find(edges_[e].dst);
        if (s == index_.end() || d == index_.end() || s->second == d->second) continue;
        succ_[s->second].push_back({d->second, e});
        pred_[d->second].push_back({s->second, e});
    }

    std::vector<std::size_t> by_id(tasks_.size());
    std::iota(by_id.begin(), by_id.end(), std::size_t{0});
    std::stable_sort(by_id.begin(), by_id.end(),
                     [&](std::size_t a, std::size_t b) { return tasks_[a].id < tasks_[b].id; });
    id_rank_.resize(tasks_.size());
    for (std::size_t r = 0; r < by_id.size(); ++r) id_rank_[by_id[r]] = r;

    // Adjacency in id order so every scan that takes "the first" candidate
    // breaks ties by smallest id.
    auto by_rank = [&](const Arc& a, const Arc& b) { return id_rank_[a.task] < id_rank_[b.task]; };
    for (auto& v : succ_) std::stable_sort(v.begin(), v.end(), by_rank);
    for (auto& v : pred_) std::stable_sort(v.begin(), v.end(), by_rank);
}

std::optional<std::size_t> Workflow::find(std::string_view task_id) const {
    auto it = index_.find(std::string(task_id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t Workflow::index_of(std::string_view task_id) const {
    if (auto i = find(task_id)) return *i;
    throw Error(ErrorKind::Lookup, "unknown task id '" + std::string(task_id) + "' in workflow '" + id_ + "'");
}

namespace {

std::vector<std::string> ids_of(const Workflow& w, std::span<const Arc> arcs) {
    std::vector<std::string> out;
    out.reserve(arcs.size());
    for (const auto& a : arcs) out.push_back(w.task(a.task).id);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace

std::vector<std::string> Workflow::predecessors(std::string_view task_id) const {
    return ids_of(*this, pred_[index_of(task_id)]);
}

std::vector<std::string> Workflow::successors(std::string_view task_id) const {
    return ids_of(*this, succ_[index_of(task_id)]);
}

std::vector<std::string> Workflow::entry_set() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
        if (pred_[i].empty()) out.push_back(tasks_[i].id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> Workflow::topological_indices() const {
    std::vector<std::size_t> indeg(tasks_.size(), 0);
    for (std::size_t i = 0; i < tasks_.size(); ++i) indeg[i] = pred_[i].size();

    auto later = [&](std::size_t a, std::size_t b) { return id_rank_[a] > id_rank_[b]; };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(later)> ready(later);
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
        if (indeg[i] == 0) ready.push(i);
    }
    std::vector<std::size_t> order;
    order.reserve(tasks_.size());
    while (!ready.empty()) {
        const std::size_t t = ready.top();
        ready.pop();
        order.push_back(t);
        for (const auto& a : succ_[t]) {
            if (--indeg[a.task] == 0) ready.push(a.task);
        }
    }
    if (order.size() != tasks_.size()) {
        throw Error(ErrorKind::Cycle, "workflow '" + id_ + "' contains a cycle");
    }
    return order;
}

std::vector<std::string> Workflow::topological_order() const {
    std::vector<std::string> out;
    for (auto i : topological_indices()) out.push_back(tasks_[i].id);
    return out;
}

WorkflowSet::WorkflowSet(std::vector<Workflow> workflows) : workflows_(std::move(workflows)) {
    offsets_.reserve(workflows_.size());
    for (const auto& w : workflows_) {
        offsets_.push_back(total_);
        total_ += w.size();
    }
}

TaskRef WorkflowSet::ref_of(std::size_t global) const {
    if (global >= total_) throw Error(ErrorKind::Lookup, "global task index out of range");
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), global);
    // Empty workflows share an offset with their successor; upper_bound skips them.
    const auto g = static_cast<std::size_t>(std::distance(offsets_.begin(), it)) - 1;
    return {g, global - offsets_[g]};
}

std::vector<Violation> validate(const Workflow& w) {
    std::vector<Violation> out;
    const std::string where = "workflow '" + w.id() + "': ";

    std::unordered_set<std::string> seen;
    for (const auto& t : w.tasks()) {
        if (!seen.insert(t.id).second) {
            out.push_back({"duplicate-task-id", where + "task id '" + t.id + "' appears more than once"});
        }
        if (!(t.workload >= 0.0) || !std::isfinite(t.workload)) {
            out.push_back({"negative-workload", where + "task '" + t.id + "' has invalid workload"});
        }
    }

    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& e : w.edges()) {
        const std::string label = "'" + e.src + "'->'" + e.dst + "'";
        if (e.src == e.dst) {
            out.push_back({"self-loop", where + "edge " + label + " is a self-loop"});
        }
        if (!w.find(e.src) || !w.find(e.dst)) {
            out.push_back({"dangling-edge", where + "edge " + label + " references an unknown task"});
        }
        if (!(e.data_size >= 0.0) || !std::isfinite(e.data_size)) {
            out.push_back({"negative-data-size", where + "edge " + label + " has invalid data size"});
        }
        if (!pairs.emplace(e.src, e.dst).second) {
            out.push_back({"duplicate-edge", where + "edge " + label + " appears more than once"});
        }
    }

    try {
        (void)w.topological_indices();
    } catch (const Error&) {
        out.push_back({"cycle", where + "edge relation contains a cycle"});
    }
    return out;
}

std::vector<Violation> validate(const WorkflowSet& ws) {
    std::vector<Violation> out;
    std::unordered_set<std::string> workflow_ids;
    std::unordered_map<std::string, std::string> owner; // task id -> workflow id
    for (const auto& w : ws.workflows()) {
        if (!workflow_ids.insert(w.id()).second) {
            out.push_back({"duplicate-workflow-id", "workflow id '" + w.id() + "' appears more than once"});
        }
        auto local = validate(w);
        out.insert(out.end(), local.begin(), local.end());
        for (const auto& t : w.tasks()) {
            auto [it, fresh] = owner.emplace(t.id, w.id());
            if (!fresh && it->second != w.id()) {
                out.push_back({"duplicate-task-id",
                               "task id '" + t.id + "' used by workflows '" + it->second + "' and '" + w.id() + "'"});
            }
        }
    }
    return out;
}

void require_schedulable(const WorkflowSet& ws) {
    auto violations = validate(ws);
    for (const auto& w : ws.workflows()) {
        if (w.empty()) violations.push_back({"empty-workflow", "workflow '" + w.id() + "' has no tasks"});
    }
    if (ws.size() == 0) violations.push_back({"empty-set", "workflow set has no workflows"});
    if (violations.empty()) return;
    std::string msg = "workflow set is not schedulable:";
    for (const auto& v : violations) msg += "\n  [" + v.kind + "] " + v.message;
    throw Error(ErrorKind::Validation, msg);
}

} // namespace mwsched
