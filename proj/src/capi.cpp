// extern "C" surface over the C++ core.

#include "mwsched/mwsched.h"

#include "mwsched/clustering.hpp"
#include "mwsched/error.hpp"
#include "mwsched/experiment.hpp"
#include "mwsched/generator.hpp"
#include "mwsched/io.hpp"
#include "mwsched/metrics.hpp"
#include "mwsched/nsga3.hpp"
#include "mwsched/schedule.hpp"
#include "mwsched/text.hpp"

#include <filesystem>
#include <iostream>
#include <new>
#include <string>

struct mws_workflow_set {
    mwsched::WorkflowSet value;
};

struct mws_catalog {
    mwsched::ResourceCatalog value;
};

struct mws_front {
    mwsched::Front value;
};

namespace {

thread_local std::string g_last_error;

mws_status status_of(mwsched::ErrorKind k) {
    using mwsched::ErrorKind;
    switch (k) {
    case ErrorKind::InvalidArgument: return MWS_ERR_INVALID_ARGUMENT;
    case ErrorKind::Lookup: return MWS_ERR_LOOKUP;
    case ErrorKind::Cycle: return MWS_ERR_CYCLE;
    case ErrorKind::Parse: return MWS_ERR_PARSE;
    case ErrorKind::Schema: return MWS_ERR_SCHEMA;
    case ErrorKind::Io: return MWS_ERR_IO;
    case ErrorKind::Validation: return MWS_ERR_VALIDATION;
    case ErrorKind::Domain: return MWS_ERR_DOMAIN;
    }
    return MWS_ERR_INTERNAL;
}

template <typename F>
mws_status guarded(F&& f) {
    g_last_error.clear();
    try {
        f();
        return MWS_OK;
    } catch (const mwsched::Error& e) {
        g_last_error = e.what();
        return status_of(e.kind());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
    } catch (const std::exception& e) {
        g_last_error = e.what();
    } catch (...) {
        g_last_error = "unknown error";
    }
    return MWS_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
    if (!ok) throw mwsched::Error(mwsched::ErrorKind::InvalidArgument, what);
}

mwsched::OptimizerConfig to_cpp(const mws_optimizer_config& c) {
    return {c.population, c.generations, c.crossover_rate, c.mutation_rate, c.seed, c.divisions};
}

} // namespace

extern "C" {

const char* mws_version(void) { return "0.1.0"; }

const char* mws_last_error(void) { return g_last_error.c_str(); }

const char* mws_status_name(mws_status status) {
    switch (status) {
    case MWS_OK: return "ok";
    case MWS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MWS_ERR_LOOKUP: return "lookup error";
    case MWS_ERR_CYCLE: return "cycle";
    case MWS_ERR_PARSE: return "parse error";
    case MWS_ERR_SCHEMA: return "schema error";
    case MWS_ERR_IO: return "i/o error";
    case MWS_ERR_VALIDATION: return "validation error";
    case MWS_ERR_DOMAIN: return "domain error";
    case MWS_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void mws_optimizer_config_default(mws_optimizer_config* cfg) {
    if (cfg == nullptr) return;
    const mwsched::OptimizerConfig d;
    *cfg = {d.population, d.generations, d.crossover_rate, d.mutation_rate, d.seed, d.divisions};
}

mws_status mws_workflow_set_load(const char* path, mws_workflow_set** out) {
    return guarded([&] {
        require(path && out, "mws_workflow_set_load: null argument");
        *out = new mws_workflow_set{mwsched::load_native(path)};
    });
}

mws_status mws_workflow_set_load_dax(const char* const* paths, size_t count, mws_workflow_set** out) {
    return guarded([&] {
        require(paths && out, "mws_workflow_set_load_dax: null argument");
        std::vector<std::filesystem::path> ps;
        for (size_t i = 0; i < count; ++i) {
            require(paths[i] != nullptr, "mws_workflow_set_load_dax: null path");
            ps.emplace_back(paths[i]);
        }
        *out = new mws_workflow_set{mwsched::load_dax_set(ps)};
    });
}

mws_status mws_workflow_set_generate(const mws_generator_spec* spec, mws_workflow_set** out) {
    return guarded([&] {
        require(spec && out, "mws_workflow_set_generate: null argument");
        const mwsched::GeneratorSpec s{spec->n_workflows, spec->task_min,    spec->task_max,
                                       spec->ccr,         spec->parallelism, spec->seed};
        *out = new mws_workflow_set{mwsched::generate(s)};
    });
}

mws_status mws_workflow_set_save(const mws_workflow_set* ws, const char* path) {
    return guarded([&] {
        require(ws && path, "mws_workflow_set_save: null argument");
        mwsched::save_native(ws->value, path);
    });
}

mws_status mws_workflow_set_validate(const mws_workflow_set* ws) {
    return guarded([&] {
        require(ws != nullptr, "mws_workflow_set_validate: null argument");
        const auto v = mwsched::validate(ws->value);
        if (v.empty()) return;
        std::string msg;
        for (const auto& x : v) msg += (msg.empty() ? "" : "\n") + ("[" + x.kind + "] " + x.message);
        throw mwsched::Error(mwsched::ErrorKind::Validation, msg);
    });
}

size_t mws_workflow_set_count(const mws_workflow_set* ws) { return ws ? ws->value.size() : 0; }

size_t mws_workflow_set_task_count(const mws_workflow_set* ws) { return ws ? ws->value.total_tasks() : 0; }

void mws_workflow_set_free(mws_workflow_set* ws) { delete ws; }

mws_status mws_generate_factorial(uint64_t master_seed, const char* dir) {
    return guarded([&] {
        require(dir != nullptr, "mws_generate_factorial: null argument");
        for (const auto& named : mwsched::factorial_design(master_seed)) {
            mwsched::save_native(mwsched::generate(named.spec), std::filesystem::path(dir) / (named.name + ".json"));
        }
    });
}

mws_status mws_catalog_default(mws_catalog** out) {
    return guarded([&] {
        require(out != nullptr, "mws_catalog_default: null argument");
        *out = new mws_catalog{mwsched::default_catalog()};
    });
}

mws_status mws_catalog_load(const char* path, mws_catalog** out) {
    return guarded([&] {
        require(path && out, "mws_catalog_load: null argument");
        *out = new mws_catalog{mwsched::load_resources(path)};
    });
}

mws_status mws_catalog_save(const mws_catalog* catalog, const char* path) {
    return guarded([&] {
        require(catalog && path, "mws_catalog_save: null argument");
        mwsched::save_resources(catalog->value, path);
    });
}

size_t mws_catalog_size(const mws_catalog* catalog) { return catalog ? catalog->value.size() : 0; }

void mws_catalog_free(mws_catalog* catalog) { delete catalog; }

mws_status mws_cluster_plan_write(const mws_workflow_set* ws, const mws_catalog* catalog, const char* clusterer,
                                  const char* json_path, size_t* cluster_count) {
    return guarded([&] {
        require(ws && catalog && clusterer, "mws_cluster_plan_write: null argument");
        mwsched::require_schedulable(ws->value);
        const auto plan = mwsched::make_plan(mwsched::parse_clusterer(clusterer), ws->value, catalog->value);
        if (json_path) mwsched::write_text_file(json_path, mwsched::to_json(plan, ws->value).dump(1) + "\n");
        if (cluster_count) *cluster_count = plan.size();
    });
}

mws_status mws_optimize(const mws_workflow_set* ws, const mws_catalog* catalog, const char* clusterer,
                        const mws_optimizer_config* cfg, mws_front** out) {
    return guarded([&] {
        require(ws && catalog && clusterer && cfg && out, "mws_optimize: null argument");
        const auto& set = ws->value;
        mwsched::require_schedulable(set);
        const auto plan = mwsched::make_plan(mwsched::parse_clusterer(clusterer), set, catalog->value);
        const auto order = mwsched::order_interleave(plan, set);
        const auto baselines = mwsched::compute_baselines(set, catalog->value);
        const mwsched::Problem problem{&set, &catalog->value, &plan, &order, &baselines};
        *out = new mws_front{mwsched::run(problem, to_cpp(*cfg))};
    });
}

mws_status mws_schedule_write(const mws_workflow_set* ws, const mws_catalog* catalog, const char* clusterer,
                              const int* genes, size_t gene_count, const char* json_path, const char* csv_path,
                              double objectives[3]) {
    return guarded([&] {
        require(ws && catalog && clusterer && (genes || gene_count == 0), "mws_schedule_write: null argument");
        const auto& set = ws->value;
        mwsched::require_schedulable(set);
        const auto plan = mwsched::make_plan(mwsched::parse_clusterer(clusterer), set, catalog->value);
        const auto order = mwsched::order_interleave(plan, set);
        const auto baselines = mwsched::compute_baselines(set, catalog->value);
        const mwsched::Assignment asg{std::vector<int>(genes, genes + gene_count)};
        const auto sched = mwsched::decode({&set, &catalog->value, &plan, &order, &baselines}, asg);
        if (json_path) {
            mwsched::write_text_file(json_path, mwsched::to_json(sched, set, catalog->value).dump(1) + "\n");
        }
        if (csv_path) mwsched::write_text_file(csv_path, mwsched::gantt_csv(sched, set, catalog->value));
        if (objectives) {
            objectives[0] = sched.objectives.makespan;
            objectives[1] = sched.objectives.cost;
            objectives[2] = sched.objectives.unfairness;
        }
    });
}

mws_status mws_front_load(const char* path, mws_front** out) {
    return guarded([&] {
        require(path && out, "mws_front_load: null argument");
        *out = new mws_front{mwsched::load_front(path)};
    });
}

mws_status mws_front_save(const mws_front* front, const char* path) {
    return guarded([&] {
        require(front && path, "mws_front_save: null argument");
        mwsched::write_text_file(path, mwsched::front_to_csv(front->value));
    });
}

size_t mws_front_size(const mws_front* front) { return front ? front->value.size() : 0; }

mws_status mws_front_objectives(const mws_front* front, size_t index, double out[3]) {
    return guarded([&] {
        require(front && out, "mws_front_objectives: null argument");
        if (index >= front->value.size()) throw mwsched::Error(mwsched::ErrorKind::Lookup, "front index out of range");
        const auto& o = front->value.solutions[index].objectives;
        for (int i = 0; i < 3; ++i) out[i] = o[i];
    });
}

mws_status mws_front_genes(const mws_front* front, size_t index, int* genes, size_t capacity, size_t* gene_count) {
    return guarded([&] {
        require(front != nullptr, "mws_front_genes: null argument");
        if (index >= front->value.size()) throw mwsched::Error(mwsched::ErrorKind::Lookup, "front index out of range");
        const auto& g = front->value.solutions[index].assignment.genes;
        if (gene_count) *gene_count = g.size();
        for (size_t i = 0; genes && i < g.size() && i < capacity; ++i) genes[i] = g[i];
    });
}

int mws_front_equal(const mws_front* a, const mws_front* b) {
    if (!a || !b || a->value.size() != b->value.size()) return 0;
    for (size_t i = 0; i < a->value.size(); ++i) {
        const auto& x = a->value.solutions[i];
        const auto& y = b->value.solutions[i];
        if (x.objectives != y.objectives || x.assignment != y.assignment) return 0;
    }
    return 1;
}

void mws_front_free(mws_front* front) { delete front; }

mws_status mws_experiment_run(const char* config_path, const mws_run_overrides* overrides) {
    return guarded([&] {
        require(config_path != nullptr, "mws_experiment_run: null config path");
        auto cfg = mwsched::load_experiment_config(config_path);
        bool quiet = false;
        if (overrides) {
            if (overrides->output_dir && *overrides->output_dir) cfg.output_dir = overrides->output_dir;
            if (overrides->has_seed) cfg.seed = overrides->seed;
            if (overrides->repetitions > 0) cfg.repetitions = overrides->repetitions;
            if (overrides->clusterers && *overrides->clusterers) {
                cfg.clusterers.clear();
                for (auto tok : mwsched::split(overrides->clusterers, ',')) {
                    tok = mwsched::trim(tok);
                    if (!tok.empty()) cfg.clusterers.push_back(mwsched::parse_clusterer(tok));
                }
            }
            quiet = overrides->quiet != 0;
        }
        mwsched::run_experiment(cfg, quiet ? nullptr : &std::cerr);
    });
}

mws_status mws_replay(const char* result_dir, const char* dataset, const char* clusterer, size_t repetition,
                      int has_seed, uint64_t seed, mws_front** out) {
    return guarded([&] {
        require(result_dir && dataset && clusterer && out, "mws_replay: null argument");
        std::optional<std::uint64_t> s;
        if (has_seed) s = seed;
        *out = new mws_front{mwsched::replay(result_dir, dataset, mwsched::parse_clusterer(clusterer), repetition, s)};
    });
}

mws_status mws_eval_fronts(const char* const* paths, const char* const* labels, size_t count, int normalised_igd,
                           const char* out_csv) {
    return guarded([&] {
        require(paths && count > 0, "mws_eval_fronts: at least one front is required");
        std::vector<std::string> algs;
        std::vector<std::size_t> runs;
        std::vector<mwsched::PointSet> fronts;
        for (size_t i = 0; i < count; ++i) {
            require(paths[i] != nullptr, "mws_eval_fronts: null path");
            const auto f = mwsched::load_front(paths[i]);
            require(f.size() > 0, "mws_eval_fronts: empty front");
            mwsched::PointSet pts;
            for (const auto& s : f.solutions) pts.push_back(s.objectives);
            fronts.push_back(std::move(pts));
            algs.push_back(labels && labels[i] ? labels[i] : std::filesystem::path(paths[i]).stem().string());
            runs.push_back(i);
        }
        const auto rows = mwsched::evaluate_fronts("eval", algs, runs, fronts, normalised_igd != 0);
        const auto csv = mwsched::metrics_csv(rows);
        if (out_csv && *out_csv) {
            mwsched::write_text_file(out_csv, csv);
        } else {
            std::cout << csv;
        }
    });
}

} // extern "C"
