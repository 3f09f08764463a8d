#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mwsched {

struct Task {
    std::string id;
    double workload = 0.0; // abstract compute units
};

struct Edge {
    std::string src;
    std::string dst;
    double data_size = 0.0; // abstract data units
};

// One resolved adjacency entry: the neighbouring task and the edge that links it.
struct Arc {
    std::size_t task;
    std::size_t edge;
};

// A single DAG. Immutable after construction; edges whose endpoints do not
// resolve (or self-loops) are kept in edges() for validation but are left out
// of the adjacency lists.
class Workflow {
public:
    Workflow() = default;
    Workflow(std::string id, std::vector<Task> tasks, std::vector<Edge> edges);

    const std::string& id() const noexcept { return id_; }
    std::span<const Task> tasks() const noexcept { return tasks_; }
    std::span<const Edge> edges() const noexcept { return edges_; }
    std::size_t size() const noexcept { return tasks_.size(); }
    bool empty() const noexcept { return tasks_.empty(); }

    const Task& task(std::size_t i) const { return tasks_.at(i); }
    std::optional<std::size_t> find(std::string_view task_id) const;
    // Throws Error(Lookup) for an unknown id.
    std::size_t index_of(std::string_view task_id) const;

    std::span<const Arc> successors_of(std::size_t i) const { return succ_.at(i); }
    std::span<const Arc> predecessors_of(std::size_t i) const { return pred_.at(i); }

    // Position of task i when all ids are sorted lexicographically; the
    // deterministic tie-breaker used throughout the library.
    std::size_t id_rank(std::size_t i) const { return id_rank_.at(i); }
    bool id_less(std::size_t a, std::size_t b) const { return id_rank_[a] < id_rank_[b]; }

    // Id-based queries; results are sorted by id.
    std::vector<std::string> predecessors(std::string_view task_id) const;
    std::vector<std::string> successors(std::string_view task_id) const;
    std::vector<std::string> entry_set() const;

    // Kahn's algorithm, smallest id first among ready tasks. Throws Error(Cycle).
    std::vector<std::size_t> topological_indices() const;
    std::vector<std::string> topological_order() const;

private:
    std::string id_;
    std::vector<Task> tasks_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<Arc>> succ_;
    std::vector<std::vector<Arc>> pred_;
    std::vector<std::size_t> id_rank_;
};

// Address of a task inside a WorkflowSet.
struct TaskRef {
    std::size_t workflow = 0;
    std::size_t task = 0;

    friend bool operator==(const TaskRef&, const TaskRef&) = default;
};

class WorkflowSet {
public:
    WorkflowSet() = default;
    explicit WorkflowSet(std::vector<Workflow> workflows);

    std::span<const Workflow> workflows() const noexcept { return workflows_; }
    const Workflow& operator[](std::size_t g) const { return workflows_.at(g); }
    std::size_t size() const noexcept { return workflows_.size(); }
    std::size_t total_tasks() const noexcept { return total_; }

    // Global (flat) numbering: workflow g occupies [offset(g), offset(g) + size).
    std::size_t offset(std::size_t g) const { return offsets_.at(g); }
    std::size_t global_index(TaskRef ref) const { return offsets_.at(ref.workflow) + ref.task; }
    TaskRef ref_of(std::size_t global) const;

private:
    std::vector<Workflow> workflows_;
    std::vector<std::size_t> offsets_;
    std::size_t total_ = 0;
};

struct Violation {
    std::string kind; // "self-loop", "cycle", "dangling-edge", ...
    std::string message;
};

// All model invariant violations of a workflow set; empty means valid.
std::vector<Violation> validate(const WorkflowSet& ws);
std::vector<Violation> validate(const Workflow& w);

// validate() plus the scheduling precondition that no workflow is empty.
// Throws Error(Validation) listing every violation.
void require_schedulable(const WorkflowSet& ws);

} // namespace mwsched
