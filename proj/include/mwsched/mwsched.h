/*
 * mwsched C API.
 *
 * Every function returns an mws_status; on failure a thread-local message is
 * available from mws_last_error() until the next call on the same thread.
 * Objects are opaque handles released with the matching *_free function
 * (passing NULL is allowed).
 */
#ifndef MWSCHED_H
#define MWSCHED_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MWSCHED_BUILDING)
#    define MWS_API __declspec(dllexport)
#  else
#    define MWS_API __declspec(dllimport)
#  endif
#else
#  define MWS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mws_status {
    MWS_OK = 0,
    MWS_ERR_INVALID_ARGUMENT = 1,
    MWS_ERR_LOOKUP = 2,
    MWS_ERR_CYCLE = 3,
    MWS_ERR_PARSE = 4,
    MWS_ERR_SCHEMA = 5,
    MWS_ERR_IO = 6,
    MWS_ERR_VALIDATION = 7,
    MWS_ERR_DOMAIN = 8,
    MWS_ERR_INTERNAL = 99
} mws_status;

typedef struct mws_workflow_set mws_workflow_set;
typedef struct mws_catalog mws_catalog;
typedef struct mws_front mws_front;

typedef struct mws_generator_spec {
    size_t n_workflows;
    size_t task_min;
    size_t task_max;
    double ccr;
    double parallelism;
    uint64_t seed;
} mws_generator_spec;

typedef struct mws_optimizer_config {
    size_t population;
    size_t generations;
    double crossover_rate;
    double mutation_rate;
    uint64_t seed;
    size_t divisions;
} mws_optimizer_config;

/* Overrides applied on top of an experiment config file; zero/NULL fields are ignored. */
typedef struct mws_run_overrides {
    const char* output_dir;
    int has_seed;
    uint64_t seed;
    size_t repetitions;
    const char* clusterers; /* comma-separated, e.g. "dfs-cst,p2p" */
    int quiet;
} mws_run_overrides;

MWS_API const char* mws_version(void);
MWS_API const char* mws_last_error(void);
MWS_API const char* mws_status_name(mws_status status);

/* Defaults: population 50, 200 generations, cr 0.8, mr 0.01, 12 divisions. */
MWS_API void mws_optimizer_config_default(mws_optimizer_config* cfg);

/* Workflow sets */
MWS_API mws_status mws_workflow_set_load(const char* path, mws_workflow_set** out);
MWS_API mws_status mws_workflow_set_load_dax(const char* const* paths, size_t count, mws_workflow_set** out);
MWS_API mws_status mws_workflow_set_generate(const mws_generator_spec* spec, mws_workflow_set** out);
MWS_API mws_status mws_workflow_set_save(const mws_workflow_set* ws, const char* path);
/* MWS_ERR_VALIDATION with every violation in mws_last_error() when invalid. */
MWS_API mws_status mws_workflow_set_validate(const mws_workflow_set* ws);
MWS_API size_t mws_workflow_set_count(const mws_workflow_set* ws);
MWS_API size_t mws_workflow_set_task_count(const mws_workflow_set* ws);
MWS_API void mws_workflow_set_free(mws_workflow_set* ws);

/* Writes the sixteen-dataset factorial design as <dir>/dsNN.json. */
MWS_API mws_status mws_generate_factorial(uint64_t master_seed, const char* dir);

/* Resource catalogs */
MWS_API mws_status mws_catalog_default(mws_catalog** out);
MWS_API mws_status mws_catalog_load(const char* path, mws_catalog** out);
MWS_API mws_status mws_catalog_save(const mws_catalog* catalog, const char* path);
MWS_API size_t mws_catalog_size(const mws_catalog* catalog);
MWS_API void mws_catalog_free(mws_catalog* catalog);

/* Writes the cluster plan of `clusterer` ("dfs-cst", "p2p", "mdnc", "none") as JSON. */
MWS_API mws_status mws_cluster_plan_write(const mws_workflow_set* ws, const mws_catalog* catalog,
                                          const char* clusterer, const char* json_path, size_t* cluster_count);

/* Cluster, order and optimise one workflow set. */
MWS_API mws_status mws_optimize(const mws_workflow_set* ws, const mws_catalog* catalog, const char* clusterer,
                                const mws_optimizer_config* cfg, mws_front** out);

/* Decodes one assignment (one gene per cluster) and writes the schedule as
 * JSON and/or Gantt CSV; either path may be NULL. objectives receives
 * (makespan, cost, unfairness) when non-NULL. */
MWS_API mws_status mws_schedule_write(const mws_workflow_set* ws, const mws_catalog* catalog, const char* clusterer,
                                      const int* genes, size_t gene_count, const char* json_path,
                                      const char* csv_path, double objectives[3]);

/* Fronts */
MWS_API mws_status mws_front_load(const char* path, mws_front** out);
MWS_API mws_status mws_front_save(const mws_front* front, const char* path);
MWS_API size_t mws_front_size(const mws_front* front);
MWS_API mws_status mws_front_objectives(const mws_front* front, size_t index, double out[3]);
/* Copies up to `capacity` genes; *gene_count receives the full length. */
MWS_API mws_status mws_front_genes(const mws_front* front, size_t index, int* genes, size_t capacity,
                                   size_t* gene_count);
/* 1 when both fronts hold identical objective vectors and genes. */
MWS_API int mws_front_equal(const mws_front* a, const mws_front* b);
MWS_API void mws_front_free(mws_front* front);

/* Experiments */
MWS_API mws_status mws_experiment_run(const char* config_path, const mws_run_overrides* overrides);
MWS_API mws_status mws_replay(const char* result_dir, const char* dataset, const char* clusterer, size_t repetition,
                              int has_seed, uint64_t seed, mws_front** out);
/* IGD/HV of each front against the union reference of all of them, as metrics CSV. */
MWS_API mws_status mws_eval_fronts(const char* const* paths, const char* const* labels, size_t count,
                                   int normalised_igd, const char* out_csv);

#ifdef __cplusplus
}
#endif

#endif /* MWSCHED_H */
