#include "mwsched/schedule.hpp"

#include "mwsched/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mwsched {

double exec_time(const Task& t, const Resource& r) { return t.workload / r.cpu; }

double comm_time(const Edge& e, std::size_t r, std::size_t s, const ResourceCatalog& catalog) {
    if (r == s) return 0.0;
    return e.data_size / std::min(catalog[r].bandwidth, catalog[s].bandwidth);
}

double exec_cost(const Task& t, const Resource& r) { return exec_time(t, r) * r.cost_per_interval / r.billing_interval; }

HeftResult heft_schedule(const Workflow& w, const ResourceCatalog& catalog) {
    const auto rank = upward_ranks(w, catalog);
    const std::size_t n = w.size();
    const std::size_t m = catalog.size();

    HeftResult out;
    out.placements.resize(n);
    std::vector<std::vector<std::pair<double, double>>> busy(m); // sorted (start, finish)
    std::vector<std::size_t> waiting(n);
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i) {
        waiting[i] = w.predecessors_of(i).size();
        if (waiting[i] == 0) ready.push_back(i);
    }

    for (std::size_t step = 0; step < n; ++step) {
        // Highest upward rank among ready tasks, smallest id on ties.
        auto pick = std::min_element(ready.begin(), ready.end(), [&](std::size_t a, std::size_t b) {
            return rank[a] != rank[b] ? rank[a] > rank[b] : w.id_less(a, b);
        });
        const std::size_t t = *pick;
        ready.erase(pick);

        Placement best{0, 0.0, std::numeric_limits<double>::infinity(), 0.0};
        for (std::size_t r = 0; r < m; ++r) {
            double arrival = 0.0;
            for (const auto& a : w.predecessors_of(t)) {
                const auto& p = out.placements[a.task];
                arrival = std::max(arrival, p.finish + comm_time(w.edges()[a.edge], p.resource, r, catalog));
            }
            const double et = exec_time(w.task(t), catalog[r]);
            // Earliest gap on r that opens at or after `arrival` and fits et.
            double start = arrival;
            for (const auto& [s, f] : busy[r]) {
                if (s - start >= et && s >= start) break;
                start = std::max(start, f);
            }
            if (start + et < best.finish) best = {r, start, start + et, exec_cost(w.task(t), catalog[r])};
        }
        out.placements[t] = best;
        auto& slots = busy[best.resource];
        slots.insert(std::upper_bound(slots.begin(), slots.end(), std::make_pair(best.start, best.finish)),
                     {best.start, best.finish});
        out.makespan = std::max(out.makespan, best.finish);
        for (const auto& a : w.successors_of(t)) {
            if (--waiting[a.task] == 0) ready.push_back(a.task);
        }
    }
    return out;
}

double heft_alone(const Workflow& w, const ResourceCatalog& catalog) { return heft_schedule(w, catalog).makespan; }

double cheapest_alone(const Workflow& w, const ResourceCatalog& catalog) {
    double total = 0.0;
    for (const auto& t : w.tasks()) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& r : catalog.resources()) best = std::min(best, exec_cost(t, r));
        total += best;
    }
    return total;
}

Baselines compute_baselines(const WorkflowSet& ws, const ResourceCatalog& catalog) {
    Baselines b;
    for (const auto& w : ws.workflows()) {
        b.heft_makespan.push_back(heft_alone(w, catalog));
        b.cheapest_cost.push_back(cheapest_alone(w, catalog));
    }
    return b;
}

LossReport loss_report(const Schedule& sched, const WorkflowSet& ws, const Baselines& baselines) {
    if (baselines.heft_makespan.size() != ws.size() || baselines.cheapest_cost.size() != ws.size() ||
        sched.placements.size() != ws.size()) {
        throw Error(ErrorKind::InvalidArgument, "loss_report: baselines/schedule do not match the workflow set");
    }
    LossReport rep;
    rep.per_workflow.reserve(ws.size());
    double sum = 0.0;
    for (std::size_t g = 0; g < ws.size(); ++g) {
        if (!(baselines.heft_makespan[g] > 0.0) || !(baselines.cheapest_cost[g] > 0.0)) {
            throw Error(ErrorKind::Domain, "loss_report: zero baseline for workflow '" + ws[g].id() +
                                               "' (empty workflow or zero total workload)");
        }
        double finish = 0.0;
        double cost = 0.0;
        for (const auto& p : sched.placements[g]) {
            finish = std::max(finish, p.finish);
            cost += p.cost;
        }
        WorkflowLoss l;
        l.slowdown = finish / baselines.heft_makespan[g];
        l.overspending = cost / baselines.cheapest_cost[g];
        l.loss = l.slowdown + l.overspending;
        sum += l.loss;
        rep.per_workflow.push_back(l);
    }
    const double n = static_cast<double>(ws.size());
    rep.mean_loss = ws.size() == 0 ? 0.0 : sum / n;
    double sq = 0.0;
    for (const auto& l : rep.per_workflow) sq += (l.loss - rep.mean_loss) * (l.loss - rep.mean_loss);
    rep.uf = ws.size() == 0 ? 0.0 : std::sqrt(sq / n);
    return rep;
}

Schedule decode_times(const WorkflowSet& ws, const ResourceCatalog& catalog, const ClusterPlan& plan,
                      const OrderedPlan& order, const Assignment& asg) {
    if (asg.genes.size() != plan.size()) {
        throw Error(ErrorKind::InvalidArgument, "decode: assignment has " + std::to_string(asg.genes.size()) +
                                                    " genes but the plan has " + std::to_string(plan.size()) +
                                                    " clusters");
    }
    if (order.order.size() != ws.total_tasks() || plan.cluster_of.size() != ws.size()) {
        throw Error(ErrorKind::InvalidArgument, "decode: order/plan do not cover the workflow set");
    }
    for (auto gene : asg.genes) {
        if (gene < 0 || static_cast<std::size_t>(gene) >= catalog.size()) {
            throw Error(ErrorKind::InvalidArgument, "decode: gene " + std::to_string(gene) + " is not a resource index");
        }
    }

    Schedule s;
    s.placements.resize(ws.size());
    std::vector<std::vector<bool>> placed(ws.size());
    for (std::size_t g = 0; g < ws.size(); ++g) {
        s.placements[g].resize(ws[g].size());
        placed[g].assign(ws[g].size(), false);
    }
    std::vector<double> ready(catalog.size(), 0.0);

    for (const auto& ref : order.order) {
        const auto& w = ws[ref.workflow];
        const auto r = static_cast<std::size_t>(asg.genes[plan.cluster_of[ref.workflow][ref.task]]);
        double start = ready[r];
        for (const auto& a : w.predecessors_of(ref.task)) {
            if (!placed[ref.workflow][a.task]) {
                throw Error(ErrorKind::InvalidArgument, "decode: order is not topological at task '" +
                                                            w.task(ref.task).id + "'");
            }
            const auto& p = s.placements[ref.workflow][a.task];
            start = std::max(start, p.finish + comm_time(w.edges()[a.edge], p.resource, r, catalog));
        }
        const auto& task = w.task(ref.task);
        Placement& out = s.placements[ref.workflow][ref.task];
        out = {r, start, start + exec_time(task, catalog[r]), exec_cost(task, catalog[r])};
        placed[ref.workflow][ref.task] = true;
        ready[r] = out.finish;
        s.objectives.makespan = std::max(s.objectives.makespan, out.finish);
        s.objectives.cost += out.cost;
    }
    return s;
}

Schedule decode(const Problem& p, const Assignment& asg) {
    Schedule s = decode_times(*p.ws, *p.catalog, *p.plan, *p.order, asg);
    if (p.baselines != nullptr) s.objectives.unfairness = loss_report(s, *p.ws, *p.baselines).uf;
    return s;
}

std::string check_schedule(const Schedule& sched, const WorkflowSet& ws, const ResourceCatalog& catalog, double tol) {
    if (sched.placements.size() != ws.size()) return "placement table does not match the workflow set";
    struct Slot {
        double start, finish;
        std::string task;
    };
    std::vector<std::vector<Slot>> by_resource(catalog.size());
    for (std::size_t g = 0; g < ws.size(); ++g) {
        const auto& w = ws[g];
        if (sched.placements[g].size() != w.size()) return "placement table does not match workflow '" + w.id() + "'";
        for (std::size_t t = 0; t < w.size(); ++t) {
            const auto& p = sched.placements[g][t];
            if (p.resource >= catalog.size()) return "task '" + w.task(t).id + "' on unknown resource";
            const double et = w.task(t).workload / catalog[p.resource].cpu;
            if (std::abs(p.finish - (p.start + et)) > tol) return "task '" + w.task(t).id + "' finish != start + ET";
            if (p.start < -tol) return "task '" + w.task(t).id + "' starts before 0";
            by_resource[p.resource].push_back({p.start, p.finish, w.task(t).id});
        }
        for (const auto& e : w.edges()) {
            const auto i = w.index_of(e.src);
            const auto j = w.index_of(e.dst);
            const auto& pi = sched.placements[g][i];
            const auto& pj = sched.placements[g][j];
            const double delay = pi.resource == pj.resource
                                     ? 0.0
                                     : e.data_size / std::min(catalog[pi.resource].bandwidth, catalog[pj.resource].bandwidth);
            if (pj.start + tol < pi.finish + delay) {
                return "edge '" + e.src + "'->'" + e.dst + "' violates precedence";
            }
        }
    }
    for (auto& slots : by_resource) {
        std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
            return a.start != b.start ? a.start < b.start : a.finish < b.finish;
        });
        for (std::size_t k = 1; k < slots.size(); ++k) {
            if (slots[k].start + tol < slots[k - 1].finish) {
                return "tasks '" + slots[k - 1].task + "' and '" + slots[k].task + "' overlap on one resource";
            }
        }
    }
    return {};
}

nlohmann::json to_json(const Schedule& sched, const WorkflowSet& ws, const ResourceCatalog& catalog) {
    nlohmann::json placements = nlohmann::json::array();
    for (std::size_t g = 0; g < ws.size(); ++g) {
        for (std::size_t t = 0; t < ws[g].size(); ++t) {
            const auto& p = sched.placements[g][t];
            placements.push_back({{"task", ws[g].task(t).id},
                                  {"workflow", ws[g].id()},
                                  {"resource", catalog[p.resource].id},
                                  {"start", p.start},
                                  {"finish", p.finish},
                                  {"cost", p.cost}});
        }
    }
    return {{"placements", std::move(placements)},
            {"objectives",
             {{"makespan", sched.objectives.makespan},
              {"cost", sched.objectives.cost},
              {"unfairness", sched.objectives.unfairness}}}};
}

std::string gantt_csv(const Schedule& sched, const WorkflowSet& ws, const ResourceCatalog& catalog) {
    std::ostringstream out;
    out.precision(17);
    out << "task,workflow,resource,start,finish\n";
    for (std::size_t g = 0; g < ws.size(); ++g) {
        for (std::size_t t = 0; t < ws[g].size(); ++t) {
            const auto& p = sched.placements[g][t];
            out << ws[g].task(t).id << ',' << ws[g].id() << ',' << catalog[p.resource].id << ',' << p.start << ','
                << p.finish << '\n';
        }
    }
    return out.str();
}

} // namespace mwsched
