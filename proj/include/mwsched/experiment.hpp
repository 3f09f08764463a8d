#pragma once

#include "mwsched/clustering.hpp"
#include "mwsched/generator.hpp"
#include "mwsched/metrics.hpp"
#include "mwsched/nsga3.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace mwsched {

// Exactly one of generator / native_path / dax_paths is set.
struct DatasetSource {
    std::string name;
    std::optional<GeneratorSpec> generator;
    std::filesystem::path native_path;
    std::vector<std::filesystem::path> dax_paths;
};

struct ExperimentConfig {
    std::vector<DatasetSource> datasets;
    std::vector<Clusterer> clusterers;
    OptimizerConfig optimizer;
    std::size_t repetitions = 1;
    std::filesystem::path output_dir = "results";
    std::uint64_t seed = 1; // master seed
    std::filesystem::path resources; // empty: built-in catalog
    bool igd_normalised = true;
};

// Throws Error(InvalidArgument) naming the bad field.
void check(const ExperimentConfig& cfg);

// Relative paths inside `doc` resolve against `base_dir`.
ExperimentConfig experiment_config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

struct RunRecord {
    std::string dataset;
    Clusterer clusterer = Clusterer::DfsCst;
    std::size_t repetition = 0;
    std::uint64_t seed = 0;
    Front front;
    double wall_seconds = 0.0;
};

struct MetricRow {
    std::string dataset;
    std::string algorithm;
    std::size_t run = 0;
    double igd = 0.0;
    double hv = 0.0;
};

struct AggregateRow {
    std::string dataset;
    std::string algorithm;
    double igd_mean = 0.0, igd_std = 0.0;
    double hv_mean = 0.0, hv_std = 0.0;
    double igd_rdi = 0.0, hv_rdi = 0.0; // NaN when undefined
};

struct ExperimentResult {
    std::vector<RunRecord> runs;
    std::vector<MetricRow> metrics;
    std::vector<AggregateRow> aggregate;
};

// Per dataset: IGD/HV of every front against the union reference of all of
// them, with shared normalisation bounds.
std::vector<MetricRow> evaluate_fronts(const std::string& dataset, const std::vector<std::string>& algorithms,
                                       const std::vector<std::size_t>& runs, const std::vector<PointSet>& fronts,
                                       bool igd_normalised = true);
std::vector<AggregateRow> aggregate(const std::vector<MetricRow>& rows);

// Runs every dataset x clusterer x repetition and writes the result tree.
// Progress goes to `log` when non-null.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

// Re-runs one stored cell from a result directory. With `seed` unset the
// recorded seed is used.
Front replay(const std::filesystem::path& result_dir, const std::string& dataset, Clusterer clusterer,
             std::size_t repetition, std::optional<std::uint64_t> seed = std::nullopt);

// Loads a stored front written by run_experiment.
Front load_front(const std::filesystem::path& path);
std::filesystem::path front_path(const std::filesystem::path& result_dir, const std::string& dataset,
                                 Clusterer clusterer, std::size_t repetition);

std::string metrics_csv(const std::vector<MetricRow>& rows);
std::string aggregate_csv(const std::vector<AggregateRow>& rows);
// dataset, igd_rdi_<alg>..., hv_rdi_<alg>...
std::string rdi_table_csv(const std::vector<AggregateRow>& rows);
std::vector<MetricRow> parse_metrics_csv(std::string_view text);

} // namespace mwsched
