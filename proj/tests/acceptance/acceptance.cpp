// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include "mwsched/clustering.hpp"
#include "mwsched/experiment.hpp"
#include "mwsched/generator.hpp"
#include "mwsched/io.hpp"
#include "mwsched/metrics.hpp"
#include "mwsched/nsga3.hpp"
#include "mwsched/schedule.hpp"
#include "support/instances.hpp"
#include "support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

using namespace mwsched;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

bool positive_workflows(const WorkflowSet& ws) {
    for (const auto& w : ws.workflows()) {
        double s = 0.0;
        for (const auto& t : w.tasks()) s += t.workload;
        if (!(s > 0.0)) return false;
    }
    return true;
}

Assignment random_assignment(std::mt19937_64& rng, std::size_t genes, std::size_t nres) {
    Assignment a;
    for (std::size_t k = 0; k < genes; ++k) a.genes.push_back(static_cast<int>(rng() % nres));
    return a;
}

bool close(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

Outcome criterion1() {
    std::mt19937_64 rng(101);
    std::size_t instances = 0, tasks_checked = 0, mismatches = 0, orders = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto inst = oracle::random_instance(rng, 8, 3);
        const auto& ws = inst.ws;
        const auto& cat = inst.catalog;
        // Equation primitives against the oracle formulas.
        for (const auto& w : ws.workflows()) {
            for (const auto& t : w.tasks())
                for (const auto& r : cat.resources()) {
                    mismatches += exec_time(t, r) != oracle::et(t.workload, r);
                    mismatches += !close(exec_cost(t, r), oracle::ec(t.workload, r));
                }
            for (const auto& e : w.edges())
                for (std::size_t r = 0; r < cat.size(); ++r)
                    for (std::size_t s = 0; s < cat.size(); ++s)
                        mismatches += comm_time(e, r, s, cat) != oracle::ct(e.data_size, cat[r], cat[s], r == s);
        }
        // Start/finish recursion against the exhaustive event simulator.
        const auto plan = make_plan(static_cast<Clusterer>(trial % 4), ws, cat);
        const auto order = order_interleave(plan, ws);
        for (int k = 0; k < 3; ++k) {
            const auto a = random_assignment(rng, plan.size(), cat.size());
            const auto sched = decode_times(ws, cat, plan, order, a);
            std::vector<std::vector<std::size_t>> on(ws.size());
            for (std::size_t g = 0; g < ws.size(); ++g)
                for (std::size_t i = 0; i < ws[g].size(); ++i)
                    on[g].push_back(static_cast<std::size_t>(a.genes[plan.cluster_of[g][i]]));
            const auto sim = oracle::simulate_all_orders(ws, cat, order.order, on);
            orders += sim.orders_explored;
            mismatches += !sim.consistent;
            for (std::size_t g = 0; g < ws.size(); ++g)
                for (std::size_t i = 0; i < ws[g].size(); ++i) {
                    ++tasks_checked;
                    mismatches += !close(sched.placements[g][i].start, sim.tasks[g][i].start);
                    mismatches += !close(sched.placements[g][i].finish, sim.tasks[g][i].finish);
                    mismatches += !close(sched.placements[g][i].cost, sim.tasks[g][i].cost);
                }
            mismatches += !close(sched.objectives.makespan, sim.makespan);
            mismatches += !close(sched.objectives.cost, sim.cost);
            mismatches += !check_schedule(sched, ws, cat).empty();
        }
        ++instances;
    }
    std::ostringstream d;
    d << instances << " instances, " << tasks_checked << " task placements, " << orders
      << " event orders simulated, " << mismatches << " mismatches";
    return {instances >= 50 && mismatches == 0, d.str()};
}

Outcome criterion2() {
    std::size_t symmetric_bad = 0, symmetric_total = 0;
    // Symmetric fixtures: k copies of one workflow, each mapped to its own copy of one resource type.
    std::mt19937_64 rng(202);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t copies = 2 + trial % 3;
        const auto base = oracle::random_workflow(rng, 2 + trial % 5, "base");
        std::vector<Workflow> wfs;
        for (std::size_t c = 0; c < copies; ++c) {
            const std::string p = "c" + std::to_string(c) + ".";
            std::vector<Task> ts;
            std::vector<Edge> es;
            for (const auto& t : base.tasks()) ts.push_back({p + t.id, t.workload});
            for (const auto& e : base.edges()) es.push_back({p + e.src, p + e.dst, e.data_size});
            wfs.emplace_back("w" + std::to_string(c), ts, es);
        }
        const WorkflowSet ws(wfs);
        std::vector<Resource> rs;
        for (std::size_t c = 0; c < copies; ++c) rs.push_back({"r" + std::to_string(c), 3.0, 10.0, 2.0, 1.0});
        const ResourceCatalog cat(rs);
        const auto plan = cluster_dfs_cst(ws, cat);
        const auto order = order_interleave(plan, ws);
        const auto baselines = compute_baselines(ws, cat);
        Assignment a;
        for (const auto& c : plan.clusters) a.genes.push_back(static_cast<int>(c.workflow));
        const auto s = decode({&ws, &cat, &plan, &order, &baselines}, a);
        ++symmetric_total;
        symmetric_bad += s.objectives.unfairness != 0.0;
    }

    // Direct recomputation over a sample of evaluated schedules.
    std::size_t sampled = 0, bad = 0;
    while (sampled < 1000) {
        auto inst = oracle::random_instance(rng, 8, 3);
        if (!positive_workflows(inst.ws)) continue;
        const auto& ws = inst.ws;
        const auto& cat = inst.catalog;
        const auto plan = make_plan(static_cast<Clusterer>(sampled % 4), ws, cat);
        const auto order = order_interleave(plan, ws);
        const auto baselines = compute_baselines(ws, cat);
        std::vector<double> heft, cheap;
        for (const auto& w : ws.workflows()) {
            heft.push_back(oracle::heft(w, cat));
            cheap.push_back(oracle::cheapest_brute_force(w, cat));
        }
        for (int k = 0; k < 10 && sampled < 1000; ++k, ++sampled) {
            const auto s = decode({&ws, &cat, &plan, &order, &baselines}, random_assignment(rng, plan.size(), cat.size()));
            const auto rep = loss_report(s, ws, baselines);
            const auto f = oracle::fairness(s, ws, cat, heft, cheap);
            bool ok = close(s.objectives.unfairness, f.uf) && close(rep.uf, f.uf) && close(rep.mean_loss, f.mean);
            for (std::size_t g = 0; g < ws.size(); ++g) {
                const auto& l = rep.per_workflow[g];
                ok = ok && close(l.slowdown, f.slowdown[g]) && close(l.overspending, f.overspending[g]) &&
                     l.loss == l.slowdown + l.overspending && close(l.loss, f.loss[g]) && l.slowdown >= 0.0 &&
                     l.overspending >= 0.0;
            }
            bad += !ok;
        }
    }
    std::ostringstream d;
    d << symmetric_total << " symmetric fixtures (" << symmetric_bad << " with UF != 0), " << sampled
      << " sampled schedules (" << bad << " mismatches)";
    return {symmetric_bad == 0 && bad == 0, d.str()};
}

Outcome criterion3() {
    std::mt19937_64 rng(303);
    std::size_t runs = 0, dominated = 0, max_space = 0, front_points = 0;
    while (runs < 20) {
        auto inst = oracle::random_instance(rng, 10, 4);
        if (!positive_workflows(inst.ws)) continue;
        const auto& ws = inst.ws;
        const auto& cat = inst.catalog;
        const auto clusterer = static_cast<Clusterer>(runs % 4);
        const auto plan = make_plan(clusterer, ws, cat);
        std::size_t space = 1;
        for (std::size_t k = 0; k < plan.size() && space <= 1024; ++k) space *= cat.size();
        if (space > 1024 || space < 8) continue;
        const auto order = order_interleave(plan, ws);
        const auto baselines = compute_baselines(ws, cat);
        const Problem p{&ws, &cat, &plan, &order, &baselines};
        std::vector<ObjVec> all;
        for (std::size_t code = 0; code < space; ++code) {
            Assignment a;
            std::size_t c = code;
            for (std::size_t k = 0; k < plan.size(); ++k) {
                a.genes.push_back(static_cast<int>(c % cat.size()));
                c /= cat.size();
            }
            all.push_back(decode(p, a).objectives.as_array());
        }
        const auto pareto = oracle::pareto_filter(all);
        OptimizerConfig cfg; // 50 / 200 / 0.8 / 0.01
        cfg.seed = 1000 + runs;
        const auto front = run(p, cfg);
        for (const auto& s : front.solutions) {
            ++front_points;
            for (const auto& x : pareto)
                if (oracle::dominates(x, s.objectives)) {
                    ++dominated;
                    break;
                }
        }
        max_space = std::max(max_space, space);
        ++runs;
    }
    std::ostringstream d;
    d << runs << " seeded runs (largest space " << max_space << "), " << front_points << " front points, "
      << dominated << " dominated by the exhaustive Pareto set";
    return {runs == 20 && dominated == 0, d.str()};
}

Outcome criterion4() {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t igd_bad = 0, hv_bad = 0;
    double worst_z = 0.0, worst_ie = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        PointSet a(5 + trial % 10), b(5 + (trial * 7) % 10);
        for (auto& p : a) p = {u(rng), u(rng), u(rng)};
        for (auto& p : b) p = {u(rng), u(rng), u(rng)};
        igd_bad += igd(a, b) != oracle::igd(a, b);

        PointSet f(3 + trial % 8);
        for (auto& p : f) p = {u(rng), u(rng), u(rng)};
        const double exact = hypervolume(f, kHvReference);
        worst_ie = std::max(worst_ie, std::abs(exact - oracle::hv_inclusion_exclusion(f, kHvReference)));
        const auto mc = oracle::hv_monte_carlo(f, {0, 0, 0}, kHvReference, 1000000, 7000 + trial);
        const double z = std::abs(exact - mc.estimate) / mc.sigma;
        worst_z = std::max(worst_z, z);
        hv_bad += z > 3.0;
    }
    const double single = hypervolume(PointSet{{0, 0, 0}}, kHvReference);
    const bool single_ok = std::abs(single - 1.331) <= 1e-12;
    std::ostringstream d;
    d.precision(17);
    d << "IGD mismatches " << igd_bad << "/20, HV outside 3 sigma " << hv_bad << "/20 (worst " << std::setprecision(3)
      << worst_z << " sigma), max |HV - inclusion-exclusion| " << worst_ie << ", HV{(0,0,0)} = "
      << std::setprecision(17) << single;
    return {igd_bad == 0 && hv_bad == 0 && worst_ie <= 1e-12 && single_ok, d.str()};
}

Outcome criterion5() {
    ExperimentConfig cfg;
    for (const auto& d : factorial_design(1)) cfg.datasets.push_back({d.name, d.spec, {}, {}});
    cfg.clusterers = {Clusterer::DfsCst, Clusterer::P2P, Clusterer::Mdnc};
    cfg.optimizer.population = 30;
    cfg.optimizer.generations = 60;
    cfg.repetitions = 5;
    cfg.seed = 1;
    cfg.output_dir = fs::temp_directory_path() / "mwsched_acceptance" / "factorial";
    fs::remove_all(cfg.output_dir);
    const auto res = run_experiment(cfg);
    std::map<std::string, std::pair<std::string, double>> best_igd, best_hv;
    for (const auto& r : res.aggregate) {
        auto& bi = best_igd[r.dataset];
        if (bi.first.empty() || r.igd_mean < bi.second) bi = {r.algorithm, r.igd_mean};
        auto& bh = best_hv[r.dataset];
        if (bh.first.empty() || r.hv_mean > bh.second) bh = {r.algorithm, r.hv_mean};
    }
    int igd_wins = 0, hv_wins = 0;
    for (auto& [ds, v] : best_igd) igd_wins += v.first == "dfs-cst";
    for (auto& [ds, v] : best_hv) hv_wins += v.first == "dfs-cst";
    std::ostringstream d;
    d << "DFS-CST best mean IGD in " << igd_wins << "/16, best mean HV in " << hv_wins << "/16 ("
      << res.runs.size() << " runs; tables in " << cfg.output_dir.string() << ")";
    return {best_igd.size() == 16 && igd_wins >= 8 && hv_wins >= 8, d.str()};
}

Outcome criterion6() {
    const auto cat = default_catalog();
    std::size_t workflows = 0, invalid = 0, argmax_bad = 0, chains = 0, chain_bad = 0;
    std::string first_problem;
    for (std::uint64_t seed = 0; workflows < 200; ++seed) {
        const GeneratorSpec spec{1, 5, 40, seed % 2 ? 1000.0 : 0.1, seed % 3 == 0 ? 0.05 : (seed % 3 == 1 ? 0.3 : 1.0),
                                 seed};
        const auto ws = generate(spec);
        ++workflows;
        for (auto c : {Clusterer::DfsCst, Clusterer::P2P, Clusterer::Mdnc, Clusterer::None}) {
            const auto plan = make_plan(c, ws, cat);
            const auto problem = check_plan(plan, ws);
            if (!problem.empty()) {
                ++invalid;
                if (first_problem.empty()) first_problem = problem;
            }
            if (c == Clusterer::DfsCst) {
                const auto replay = oracle::check_dfs_cst(plan, ws, cat);
                if (!replay.empty()) {
                    ++argmax_bad;
                    if (first_problem.empty()) first_problem = replay;
                }
            }
        }
        // Pure chains, both from the generator (width 1) and with shuffled ids.
        bool is_chain = ws[0].edges().size() + 1 == ws[0].size();
        for (std::size_t i = 0; is_chain && i < ws[0].size(); ++i)
            is_chain = ws[0].successors_of(i).size() <= 1 && ws[0].predecessors_of(i).size() <= 1;
        if (is_chain) {
            ++chains;
            for (auto c : {Clusterer::DfsCst, Clusterer::P2P, Clusterer::Mdnc}) chain_bad += make_plan(c, ws, cat).size() != 1;
        }
    }
    std::mt19937_64 rng(606);
    for (int k = 0; k < 50; ++k) {
        const std::size_t n = 2 + rng() % 20;
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<Task> ts;
        std::vector<Edge> es;
        for (std::size_t i = 0; i < n; ++i) ts.push_back({"t" + std::to_string(perm[i]), 1.0 + double(rng() % 50)});
        for (std::size_t i = 0; i + 1 < n; ++i) es.push_back({ts[i].id, ts[i + 1].id, double(rng() % 50)});
        const WorkflowSet ws({Workflow("chain", ts, es)});
        ++chains;
        for (auto c : {Clusterer::DfsCst, Clusterer::P2P, Clusterer::Mdnc}) chain_bad += make_plan(c, ws, cat).size() != 1;
    }
    std::ostringstream d;
    d << workflows << " generated workflows x 4 clusterers: " << invalid << " invalid partitions, " << argmax_bad
      << " DFS-CST argmax violations; " << chains << " pure chains, " << chain_bad << " not collapsed to one cluster";
    if (!first_problem.empty()) d << "; first problem: " << first_problem;
    return {invalid == 0 && argmax_bad == 0 && chain_bad == 0 && chains > 50, d.str()};
}

std::string slurp(const fs::path& p) { return read_text_file(p); }

Outcome criterion7() {
    const auto root = fs::temp_directory_path() / "mwsched_acceptance" / "determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const auto cfg = root / "config.json";
    write_text_file(cfg, R"({
  "datasets": [
    {"name": "mixed", "generator": {"n_workflows": 4, "task_min": 10, "task_max": 20, "ccr": 1.0, "parallelism": 0.3, "seed": 5}},
    {"name": "comm", "generator": {"n_workflows": 3, "task_min": 15, "task_max": 25, "ccr": 1000.0, "parallelism": 0.05, "seed": 6}}
  ],
  "clusterers": ["dfs-cst", "p2p", "mdnc", "none"],
  "optimizer": {"population": 20, "generations": 30},
  "repetitions": 2,
  "seed": 77
}
)");
    for (const char* run : {"a", "b"}) {
        const std::string cmd = std::string("\"") + MWS_CLI_PATH + "\" run --quiet --config \"" + cfg.string() +
                                "\" --out \"" + (root / run).string() + "\"";
        if (std::system(cmd.c_str()) != 0) return {false, "CLI invocation failed: " + cmd};
    }
    std::size_t files = 0, differing = 0;
    std::string first_diff;
    for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
        if (!e.is_regular_file()) continue;
        ++files;
        const auto rel = fs::relative(e.path(), root / "a");
        if (!fs::exists(root / "b" / rel) || slurp(e.path()) != slurp(root / "b" / rel)) {
            ++differing;
            if (first_diff.empty()) first_diff = rel.string();
        }
    }
    std::size_t files_b = 0;
    for (const auto& e : fs::recursive_directory_iterator(root / "b")) files_b += e.is_regular_file();
    std::ostringstream d;
    d << files << " files compared across two processes, " << differing << " differ";
    if (files_b != files) d << ", file counts " << files << " vs " << files_b;
    if (!first_diff.empty()) d << " (first: " << first_diff << ")";
    return {files > 0 && differing == 0 && files_b == files, d.str()};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 [PRIMARY] model equations vs event simulator", criterion1},
        {"2 [PRIMARY] fairness identities", criterion2},
        {"3 [PRIMARY] NSGA-III vs exhaustive Pareto set", criterion3},
        {"4 [PRIMARY] metric oracles", criterion4},
        {"5 [PRIMARY] directional comparison on the factorial datasets", criterion5},
        {"6 [PRIMARY] clustering invariants", criterion6},
        {"7 [PRIMARY] determinism across processes", criterion7},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += !o.pass;
        std::printf("criterion %s: %s - %s [%.1f s]\n", name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
