// Command-line front end; talks to the library only through the C API.

#include "mwsched/mwsched.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(mws_status st, const std::string& what) {
    if (st != MWS_OK) throw Failure(what + ": " + mws_status_name(st) + ": " + mws_last_error());
}

struct SetDeleter {
    void operator()(mws_workflow_set* p) const { mws_workflow_set_free(p); }
};
struct CatalogDeleter {
    void operator()(mws_catalog* p) const { mws_catalog_free(p); }
};
struct FrontDeleter {
    void operator()(mws_front* p) const { mws_front_free(p); }
};
using SetPtr = std::unique_ptr<mws_workflow_set, SetDeleter>;
using CatalogPtr = std::unique_ptr<mws_catalog, CatalogDeleter>;
using FrontPtr = std::unique_ptr<mws_front, FrontDeleter>;

std::vector<const char*> c_strs(const std::vector<std::string>& v) {
    std::vector<const char*> out;
    for (const auto& s : v) out.push_back(s.c_str());
    return out;
}

SetPtr load_set(const std::string& dataset, const std::vector<std::string>& dax) {
    mws_workflow_set* ws = nullptr;
    if (!dax.empty()) {
        const auto ps = c_strs(dax);
        check(mws_workflow_set_load_dax(ps.data(), ps.size(), &ws), "loading DAX files");
    } else {
        check(mws_workflow_set_load(dataset.c_str(), &ws), "loading " + dataset);
    }
    return SetPtr(ws);
}

CatalogPtr load_catalog(const std::string& path) {
    mws_catalog* c = nullptr;
    if (path.empty()) {
        check(mws_catalog_default(&c), "building default catalog");
    } else {
        check(mws_catalog_load(path.c_str(), &c), "loading " + path);
    }
    return CatalogPtr(c);
}

void print_front(const mws_front* front, std::ostream& os) {
    os << "makespan,cost,unfairness\n";
    for (size_t i = 0; i < mws_front_size(front); ++i) {
        double o[3];
        check(mws_front_objectives(front, i, o), "reading front");
        os << o[0] << ',' << o[1] << ',' << o[2] << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-workflow scheduling with task clustering and NSGA-III"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(mws_version()));

    // run
    auto* run = app.add_subcommand("run", "Run an experiment described by a config file");
    std::string run_config, run_out, run_clusterers;
    std::optional<std::uint64_t> run_seed;
    std::size_t run_reps = 0;
    bool run_quiet = false;
    run->add_option("--config", run_config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", run_out, "Output directory (overrides config)");
    run->add_option("--seed", run_seed, "Master seed (overrides config)");
    run->add_option("--reps", run_reps, "Repetitions (overrides config)")->check(CLI::PositiveNumber);
    run->add_option("--clusterers", run_clusterers, "Comma-separated subset of dfs-cst,p2p,mdnc,none");
    run->add_flag("--quiet", run_quiet, "Suppress progress output");

    // gen
    auto* gen = app.add_subcommand("gen", "Emit synthetic dataset files");
    std::string gen_out;
    std::uint64_t gen_seed = 1;
    bool gen_factorial = false;
    mws_generator_spec spec{4, 20, 50, 1.0, 0.3, 1};
    gen->add_option("--out", gen_out, "Output file (single dataset) or directory (--factorial)")->required();
    gen->add_option("--seed", gen_seed, "Seed");
    gen->add_flag("--factorial", gen_factorial, "Write the sixteen-dataset factorial design");
    gen->add_option("--workflows", spec.n_workflows, "Number of workflows")->capture_default_str();
    gen->add_option("--tasks-min", spec.task_min, "Minimum tasks per workflow")->capture_default_str();
    gen->add_option("--tasks-max", spec.task_max, "Maximum tasks per workflow")->capture_default_str();
    gen->add_option("--ccr", spec.ccr, "Communication-to-computation ratio")->capture_default_str();
    gen->add_option("--parallelism", spec.parallelism, "Layer-width fraction in (0,1]")->capture_default_str();

    // eval
    auto* eval = app.add_subcommand("eval", "IGD/HV over stored fronts against their union reference");
    std::vector<std::string> eval_fronts, eval_labels;
    std::string eval_out, eval_space = "normalized";
    eval->add_option("fronts", eval_fronts, "Front CSV files")->required()->check(CLI::ExistingFile);
    eval->add_option("--labels", eval_labels, "Algorithm label per front");
    eval->add_option("--igd-space", eval_space, "normalized or raw")
        ->check(CLI::IsMember({"normalized", "raw"}))
        ->capture_default_str();
    eval->add_option("--out", eval_out, "Metrics CSV (default: stdout)");

    // replay
    auto* rep = app.add_subcommand("replay", "Re-run one stored cell of a result tree");
    std::string rep_dir, rep_dataset, rep_clusterer, rep_out;
    std::size_t rep_index = 0;
    std::optional<std::uint64_t> rep_seed;
    rep->add_option("--dir", rep_dir, "Result directory")->required()->check(CLI::ExistingDirectory);
    rep->add_option("--dataset", rep_dataset, "Dataset name")->required();
    rep->add_option("--clusterer", rep_clusterer, "Clusterer")->required();
    rep->add_option("--rep", rep_index, "Repetition index")->capture_default_str();
    rep->add_option("--seed", rep_seed, "Use this seed instead of the recorded one");
    rep->add_option("--out", rep_out, "Write the replayed front CSV here");

    // schedule
    auto* sch = app.add_subcommand("schedule", "Optimise one workflow set, or decode one assignment");
    std::string sch_dataset, sch_resources, sch_clusterer = "dfs-cst", sch_out, sch_json, sch_gantt, sch_plan;
    std::vector<std::string> sch_dax;
    std::vector<int> sch_genes;
    mws_optimizer_config opt;
    mws_optimizer_config_default(&opt);
    auto* ds_opt = sch->add_option("--dataset", sch_dataset, "Native workflow-set JSON")->check(CLI::ExistingFile);
    sch->add_option("--dax", sch_dax, "DAX files (one workflow each)")->check(CLI::ExistingFile)->excludes(ds_opt);
    sch->add_option("--resources", sch_resources, "Resource catalog JSON (default: built-in)");
    sch->add_option("--clusterer", sch_clusterer, "dfs-cst, p2p, mdnc or none")->capture_default_str();
    sch->add_option("--seed", opt.seed, "Optimizer seed")->capture_default_str();
    sch->add_option("--population", opt.population, "Population size")->capture_default_str();
    sch->add_option("--generations", opt.generations, "Generations")->capture_default_str();
    sch->add_option("--out", sch_out, "Front CSV (default: objectives to stdout)");
    sch->add_option("--genes", sch_genes, "Decode this assignment instead of optimising");
    sch->add_option("--json", sch_json, "Schedule JSON (with --genes)");
    sch->add_option("--gantt", sch_gantt, "Gantt CSV (with --genes)");
    sch->add_option("--plan", sch_plan, "Write the cluster plan JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) {
            mws_run_overrides ov{};
            ov.output_dir = run_out.empty() ? nullptr : run_out.c_str();
            ov.has_seed = run_seed.has_value();
            ov.seed = run_seed.value_or(0);
            ov.repetitions = run_reps;
            ov.clusterers = run_clusterers.empty() ? nullptr : run_clusterers.c_str();
            ov.quiet = run_quiet;
            check(mws_experiment_run(run_config.c_str(), &ov), "run");
        } else if (*gen) {
            if (gen_factorial) {
                check(mws_generate_factorial(gen_seed, gen_out.c_str()), "gen");
            } else {
                spec.seed = gen_seed;
                mws_workflow_set* ws = nullptr;
                check(mws_workflow_set_generate(&spec, &ws), "gen");
                SetPtr guard(ws);
                check(mws_workflow_set_save(ws, gen_out.c_str()), "gen");
            }
        } else if (*eval) {
            if (!eval_labels.empty() && eval_labels.size() != eval_fronts.size()) {
                throw Failure("eval: --labels needs one label per front");
            }
            const auto ps = c_strs(eval_fronts);
            const auto ls = c_strs(eval_labels);
            check(mws_eval_fronts(ps.data(), eval_labels.empty() ? nullptr : ls.data(), ps.size(),
                                  eval_space == "normalized", eval_out.empty() ? nullptr : eval_out.c_str()),
                  "eval");
        } else if (*rep) {
            mws_front* f = nullptr;
            check(mws_replay(rep_dir.c_str(), rep_dataset.c_str(), rep_clusterer.c_str(), rep_index,
                             rep_seed.has_value(), rep_seed.value_or(0), &f),
                  "replay");
            FrontPtr replayed(f);
            const auto stored_path = (std::filesystem::path(rep_dir) / "fronts" / rep_dataset /
                                      (rep_clusterer + "-r" + std::to_string(rep_index) + ".csv"))
                                         .string();
            mws_front* s = nullptr;
            check(mws_front_load(stored_path.c_str(), &s), "replay");
            FrontPtr stored(s);
            const bool same = mws_front_equal(replayed.get(), stored.get()) != 0;
            if (!rep_out.empty()) check(mws_front_save(replayed.get(), rep_out.c_str()), "replay");
            std::cout << (same ? "match" : "differs") << ": " << mws_front_size(replayed.get())
                      << " solutions (stored " << mws_front_size(stored.get()) << ")\n";
            if (!same && !rep_seed) return 3;
        } else if (*sch) {
            if (sch_dataset.empty() && sch_dax.empty()) throw Failure("schedule: --dataset or --dax is required");
            auto ws = load_set(sch_dataset, sch_dax);
            auto cat = load_catalog(sch_resources);
            if (!sch_plan.empty()) {
                check(mws_cluster_plan_write(ws.get(), cat.get(), sch_clusterer.c_str(), sch_plan.c_str(), nullptr),
                      "schedule");
            }
            if (!sch_genes.empty()) {
                double o[3];
                check(mws_schedule_write(ws.get(), cat.get(), sch_clusterer.c_str(), sch_genes.data(),
                                         sch_genes.size(), sch_json.empty() ? nullptr : sch_json.c_str(),
                                         sch_gantt.empty() ? nullptr : sch_gantt.c_str(), o),
                      "schedule");
                std::cout << "makespan,cost,unfairness\n" << o[0] << ',' << o[1] << ',' << o[2] << '\n';
            } else {
                mws_front* f = nullptr;
                check(mws_optimize(ws.get(), cat.get(), sch_clusterer.c_str(), &opt, &f), "schedule");
                FrontPtr front(f);
                if (sch_out.empty()) {
                    print_front(front.get(), std::cout);
                } else {
                    check(mws_front_save(front.get(), sch_out.c_str()), "schedule");
                }
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "mwsched: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
