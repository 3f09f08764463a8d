#include "mwsched/experiment.hpp"

#include "mwsched/error.hpp"
#include "mwsched/io.hpp"
#include "mwsched/seeding.hpp"
#include "mwsched/text.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

namespace mwsched {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
    throw Error(ErrorKind::InvalidArgument, "experiment config: " + field + ": " + what);
}

template <typename T>
T get_field(const json& obj, const char* key, const std::string& path, T fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        config_error(path + "." + key, "has the wrong type");
    }
}

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : (base / path).lexically_normal();
}

GeneratorSpec generator_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) config_error(path, "expected an object");
    GeneratorSpec g;
    g.n_workflows = get_field<std::size_t>(j, "n_workflows", path, g.n_workflows);
    g.task_min = get_field<std::size_t>(j, "task_min", path, g.task_min);
    g.task_max = get_field<std::size_t>(j, "task_max", path, g.task_max);
    g.ccr = get_field<double>(j, "ccr", path, g.ccr);
    g.parallelism = get_field<double>(j, "parallelism", path, g.parallelism);
    g.seed = get_field<std::uint64_t>(j, "seed", path, g.seed);
    return g;
}

json generator_to_json(const GeneratorSpec& g) {
    return {{"n_workflows", g.n_workflows}, {"task_min", g.task_min}, {"task_max", g.task_max},
            {"ccr", g.ccr},                 {"parallelism", g.parallelism}, {"seed", g.seed}};
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (auto x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Sample standard deviation (n - 1); 0 for a single value.
double std_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (auto x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

WorkflowSet load_dataset(const DatasetSource& src) {
    if (src.generator) return generate(*src.generator);
    if (!src.native_path.empty()) return load_native(src.native_path);
    return load_dax_set(src.dax_paths);
}

PointSet points_of(const Front& f) {
    PointSet out;
    out.reserve(f.size());
    for (const auto& s : f.solutions) out.push_back(s.objectives);
    return out;
}

std::string cell_name(const std::string& dataset, Clusterer c, std::size_t rep) {
    return dataset + "/" + std::string(to_string(c)) + "-r" + std::to_string(rep) + ".csv";
}

} // namespace

void check(const ExperimentConfig& cfg) {
    if (cfg.datasets.empty()) config_error("datasets", "at least one dataset is required");
    if (cfg.clusterers.empty()) config_error("clusterers", "at least one clusterer is required");
    if (cfg.repetitions < 1) config_error("repetitions", "must be >= 1");
    if (cfg.output_dir.empty()) config_error("output_dir", "must not be empty");
    std::set<std::string> names;
    for (std::size_t i = 0; i < cfg.datasets.size(); ++i) {
        const auto& d = cfg.datasets[i];
        const std::string p = "datasets[" + std::to_string(i) + "]";
        if (d.name.empty()) config_error(p + ".name", "must not be empty");
        if (d.name.find_first_of("/\\,") != std::string::npos) config_error(p + ".name", "must not contain / \\ or ,");
        if (!names.insert(d.name).second) config_error(p + ".name", "duplicate dataset name '" + d.name + "'");
        const int sources = (d.generator ? 1 : 0) + (d.native_path.empty() ? 0 : 1) + (d.dax_paths.empty() ? 0 : 1);
        if (sources != 1) config_error(p, "exactly one of generator, path or dax is required");
        if (d.generator) check(*d.generator);
    }
    std::set<Clusterer> seen;
    for (auto c : cfg.clusterers) {
        if (!seen.insert(c).second) config_error("clusterers", "duplicate clusterer '" + std::string(to_string(c)) + "'");
    }
    check(cfg.optimizer);
}

ExperimentConfig experiment_config_from_json(const json& doc, const fs::path& base_dir) {
    if (!doc.is_object()) config_error("$", "expected an object");
    ExperimentConfig cfg;

    if (auto it = doc.find("optimizer"); it != doc.end()) {
        const auto& o = *it;
        if (!o.is_object()) config_error("optimizer", "expected an object");
        auto& oc = cfg.optimizer;
        oc.population = get_field<std::size_t>(o, "population", "optimizer", oc.population);
        oc.generations = get_field<std::size_t>(o, "generations", "optimizer", oc.generations);
        oc.crossover_rate = get_field<double>(o, "crossover_rate", "optimizer", oc.crossover_rate);
        oc.mutation_rate = get_field<double>(o, "mutation_rate", "optimizer", oc.mutation_rate);
        oc.divisions = get_field<std::size_t>(o, "divisions", "optimizer", oc.divisions);
        cfg.seed = get_field<std::uint64_t>(o, "seed", "optimizer", cfg.seed);
    }
    cfg.seed = get_field<std::uint64_t>(doc, "seed", "$", cfg.seed);
    cfg.repetitions = get_field<std::size_t>(doc, "repetitions", "$", cfg.repetitions);
    cfg.output_dir = resolve(base_dir, get_field<std::string>(doc, "output_dir", "$", "results"));
    if (auto r = get_field<std::string>(doc, "resources", "$", ""); !r.empty()) cfg.resources = resolve(base_dir, r);
    const auto space = get_field<std::string>(doc, "igd_space", "$", "normalized");
    if (space != "normalized" && space != "raw") config_error("igd_space", "must be 'normalized' or 'raw'");
    cfg.igd_normalised = space == "normalized";

    if (auto it = doc.find("clusterers"); it != doc.end()) {
        if (!it->is_array()) config_error("clusterers", "expected an array");
        for (const auto& c : *it) {
            if (!c.is_string()) config_error("clusterers", "expected strings");
            cfg.clusterers.push_back(parse_clusterer(c.get<std::string>()));
        }
    } else {
        cfg.clusterers = {Clusterer::P2P, Clusterer::Mdnc, Clusterer::DfsCst};
    }

    auto it = doc.find("datasets");
    if (it == doc.end() || !it->is_array()) config_error("datasets", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
        const auto& d = (*it)[i];
        const std::string p = "datasets[" + std::to_string(i) + "]";
        if (!d.is_object()) config_error(p, "expected an object");
        if (d.contains("factorial")) {
            // Expands to the sixteen-dataset factorial design.
            const auto design_seed = get_field<std::uint64_t>(d, "seed", p, cfg.seed);
            for (auto& named : factorial_design(design_seed)) {
                cfg.datasets.push_back({named.name, named.spec, {}, {}});
            }
            continue;
        }
        DatasetSource src;
        src.name = get_field<std::string>(d, "name", p, "");
        if (auto g = d.find("generator"); g != d.end()) src.generator = generator_from_json(*g, p + ".generator");
        if (auto path = get_field<std::string>(d, "path", p, ""); !path.empty()) src.native_path = resolve(base_dir, path);
        if (auto dax = d.find("dax"); dax != d.end()) {
            if (!dax->is_array()) config_error(p + ".dax", "expected an array of paths");
            for (const auto& f : *dax) src.dax_paths.push_back(resolve(base_dir, f.get<std::string>()));
        }
        cfg.datasets.push_back(std::move(src));
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
    }
    return experiment_config_from_json(doc, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

json to_json(const ExperimentConfig& cfg) {
    json datasets = json::array();
    for (const auto& d : cfg.datasets) {
        json j{{"name", d.name}};
        if (d.generator) j["generator"] = generator_to_json(*d.generator);
        if (!d.native_path.empty()) j["path"] = d.native_path.string();
        if (!d.dax_paths.empty()) {
            json arr = json::array();
            for (const auto& p : d.dax_paths) arr.push_back(p.string());
            j["dax"] = std::move(arr);
        }
        datasets.push_back(std::move(j));
    }
    json clusterers = json::array();
    for (auto c : cfg.clusterers) clusterers.push_back(std::string(to_string(c)));
    // output_dir is deliberately absent so that result trees written to
    // different directories stay byte-identical.
    json out{{"datasets", std::move(datasets)},
             {"clusterers", std::move(clusterers)},
             {"optimizer",
              {{"population", cfg.optimizer.population},
               {"generations", cfg.optimizer.generations},
               {"crossover_rate", cfg.optimizer.crossover_rate},
               {"mutation_rate", cfg.optimizer.mutation_rate},
               {"divisions", cfg.optimizer.divisions}}},
             {"repetitions", cfg.repetitions},
             {"seed", cfg.seed},
             {"igd_space", cfg.igd_normalised ? "normalized" : "raw"}};
    if (!cfg.resources.empty()) out["resources"] = cfg.resources.string();
    return out;
}

std::vector<MetricRow> evaluate_fronts(const std::string& dataset, const std::vector<std::string>& algorithms,
                                       const std::vector<std::size_t>& runs, const std::vector<PointSet>& fronts,
                                       bool igd_normalised) {
    const auto reference = union_reference(fronts);
    const auto bounds = bounds_of(reference);
    const auto norm_ref = normalise(reference, bounds);
    std::vector<MetricRow> out;
    for (std::size_t i = 0; i < fronts.size(); ++i) {
        const auto norm = normalise(fronts[i], bounds);
        MetricRow row{dataset, algorithms.at(i), runs.at(i), 0.0, 0.0};
        row.igd = igd_normalised ? igd(norm, norm_ref) : igd(fronts[i], reference);
        row.hv = hypervolume(norm, kHvReference);
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<AggregateRow> aggregate(const std::vector<MetricRow>& rows) {
    std::vector<std::string> datasets;
    std::map<std::string, std::vector<std::string>> algorithms;
    std::map<std::pair<std::string, std::string>, std::pair<std::vector<double>, std::vector<double>>> values;
    for (const auto& r : rows) {
        if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) datasets.push_back(r.dataset);
        auto& algs = algorithms[r.dataset];
        if (std::find(algs.begin(), algs.end(), r.algorithm) == algs.end()) algs.push_back(r.algorithm);
        auto& v = values[{r.dataset, r.algorithm}];
        v.first.push_back(r.igd);
        v.second.push_back(r.hv);
    }

    std::vector<AggregateRow> out;
    for (const auto& d : datasets) {
        std::vector<AggregateRow> block;
        std::vector<double> igd_means;
        std::vector<double> hv_means;
        for (const auto& a : algorithms[d]) {
            const auto& v = values[{d, a}];
            AggregateRow row{d, a, mean_of(v.first), std_of(v.first), mean_of(v.second), std_of(v.second), NAN, NAN};
            igd_means.push_back(row.igd_mean);
            hv_means.push_back(row.hv_mean);
            block.push_back(row);
        }
        if (block.size() >= 2) {
            try {
                const auto r = rdi(igd_means, Better::Smaller);
                for (std::size_t i = 0; i < block.size(); ++i) block[i].igd_rdi = r[i];
            } catch (const Error&) {
            }
            try {
                const auto r = rdi(hv_means, Better::Larger);
                for (std::size_t i = 0; i < block.size(); ++i) block[i].hv_rdi = r[i];
            } catch (const Error&) {
            }
        }
        out.insert(out.end(), block.begin(), block.end());
    }
    return out;
}

std::string metrics_csv(const std::vector<MetricRow>& rows) {
    std::string out = "dataset,algorithm,run,igd,hv\n";
    for (const auto& r : rows) {
        out += r.dataset + ',' + r.algorithm + ',' + std::to_string(r.run) + ',' + format_double(r.igd) + ',' +
               format_double(r.hv) + '\n';
    }
    return out;
}

std::vector<MetricRow> parse_metrics_csv(std::string_view text) {
    std::vector<MetricRow> out;
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line_no == 1) continue;
        const auto cols = split(line, ',');
        MetricRow r;
        if (cols.size() != 5 || !parse_double(cols[3], r.igd) || !parse_double(cols[4], r.hv)) {
            throw Error(ErrorKind::Parse, "metrics.csv:" + std::to_string(line_no) + ": malformed row");
        }
        r.dataset = std::string(cols[0]);
        r.algorithm = std::string(cols[1]);
        r.run = static_cast<std::size_t>(std::stoull(std::string(cols[2])));
        out.push_back(std::move(r));
    }
    return out;
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
    std::string out = "dataset,algorithm,igd_mean,igd_std,hv_mean,hv_std,igd_rdi,hv_rdi\n";
    for (const auto& r : rows) {
        out += r.dataset + ',' + r.algorithm + ',' + format_double(r.igd_mean) + ',' + format_double(r.igd_std) + ',' +
               format_double(r.hv_mean) + ',' + format_double(r.hv_std) + ',' + format_double(r.igd_rdi) + ',' +
               format_double(r.hv_rdi) + '\n';
    }
    return out;
}

std::string rdi_table_csv(const std::vector<AggregateRow>& rows) {
    std::vector<std::string> algs;
    std::vector<std::string> datasets;
    for (const auto& r : rows) {
        if (std::find(algs.begin(), algs.end(), r.algorithm) == algs.end()) algs.push_back(r.algorithm);
        if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) datasets.push_back(r.dataset);
    }
    std::string out = "dataset";
    for (const auto& a : algs) out += ",igd_rdi_" + a;
    for (const auto& a : algs) out += ",hv_rdi_" + a;
    out += '\n';
    for (const auto& d : datasets) {
        out += d;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& a : algs) {
                auto it = std::find_if(rows.begin(), rows.end(),
                                       [&](const AggregateRow& r) { return r.dataset == d && r.algorithm == a; });
                out += ',';
                if (it != rows.end()) out += format_double(pass == 0 ? it->igd_rdi : it->hv_rdi);
            }
        }
        out += '\n';
    }
    return out;
}

fs::path front_path(const fs::path& result_dir, const std::string& dataset, Clusterer clusterer, std::size_t repetition) {
    return result_dir / "fronts" / cell_name(dataset, clusterer, repetition);
}

namespace {

std::uint64_t recorded_seed(const fs::path& result_dir, const std::string& dataset, Clusterer clusterer,
                            std::size_t repetition) {
    const auto path = result_dir / "runs.csv";
    if (!fs::exists(path)) throw Error(ErrorKind::Io, "replay: missing input '" + path.string() + "'");
    const auto text = read_text_file(path);
    for (auto line : split(text, '\n')) {
        const auto cols = split(trim(line), ',');
        if (cols.size() < 4 || cols[0] != dataset || cols[1] != to_string(clusterer) ||
            cols[2] != std::to_string(repetition)) {
            continue;
        }
        std::uint64_t s = 0;
        auto res = std::from_chars(cols[3].data(), cols[3].data() + cols[3].size(), s);
        if (res.ec != std::errc() || res.ptr != cols[3].data() + cols[3].size()) {
            throw Error(ErrorKind::Parse, path.string() + ": bad seed '" + std::string(cols[3]) + "'");
        }
        return s;
    }
    throw Error(ErrorKind::Lookup, "replay: no run " + dataset + "/" + std::string(to_string(clusterer)) + "/r" +
                                       std::to_string(repetition) + " in " + path.string());
}

} // namespace

Front load_front(const fs::path& path) { return front_from_csv(read_text_file(path), path.string()); }

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* log) {
    check(cfg);

    // Everything that can fail on input happens before the first optimisation.
    const ResourceCatalog catalog = cfg.resources.empty() ? default_catalog() : load_resources(cfg.resources);
    std::vector<WorkflowSet> sets;
    for (const auto& d : cfg.datasets) {
        sets.push_back(load_dataset(d));
        try {
            require_schedulable(sets.back());
        } catch (const Error& e) {
            throw Error(ErrorKind::Validation, "dataset '" + d.name + "': " + e.what());
        }
    }
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create output directory '" + cfg.output_dir.string() + "': " + ec.message());
    write_text_file(cfg.output_dir / "config.json", to_json(cfg).dump(1) + "\n");
    save_resources(catalog, cfg.output_dir / "resources.json");

    ExperimentResult result;
    std::string runs_csv = "dataset,clusterer,repetition,seed,front_size,front_file\n";
    for (std::size_t di = 0; di < cfg.datasets.size(); ++di) {
        const auto& name = cfg.datasets[di].name;
        const auto& ws = sets[di];
        save_native(ws, cfg.output_dir / "datasets" / (name + ".json"));
        const Baselines baselines = compute_baselines(ws, catalog);

        std::vector<std::string> algs;
        std::vector<std::size_t> reps;
        std::vector<PointSet> fronts;
        for (auto c : cfg.clusterers) {
            const ClusterPlan plan = make_plan(c, ws, catalog);
            const OrderedPlan order = order_interleave(plan, ws);
            const Problem problem{&ws, &catalog, &plan, &order, &baselines};
            for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
                RunRecord rec{name, c, rep, run_seed(cfg.seed, name, to_string(c), rep), {}, 0.0};
                OptimizerConfig oc = cfg.optimizer;
                oc.seed = rec.seed;
                const auto t0 = std::chrono::steady_clock::now();
                rec.front = run(problem, oc);
                rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

                const auto rel = fs::path("fronts") / cell_name(name, c, rep);
                write_text_file(cfg.output_dir / rel, front_to_csv(rec.front));
                runs_csv += name + ',' + std::string(to_string(c)) + ',' + std::to_string(rep) + ',' +
                            std::to_string(rec.seed) + ',' + std::to_string(rec.front.size()) + ',' +
                            rel.generic_string() + '\n';
                if (log) {
                    *log << name << ' ' << to_string(c) << " rep " << rep << ": " << plan.size() << " clusters, "
                         << rec.front.size() << " solutions, " << rec.wall_seconds << " s\n";
                }
                algs.emplace_back(to_string(c));
                reps.push_back(rep);
                fronts.push_back(points_of(rec.front));
                result.runs.push_back(std::move(rec));
            }
        }

        const auto reference = union_reference(fronts);
        Front ref_front;
        for (const auto& p : reference) ref_front.solutions.push_back({{}, p, 0, 0});
        write_text_file(cfg.output_dir / "reference" / (name + ".csv"), front_to_csv(ref_front));
        auto rows = evaluate_fronts(name, algs, reps, fronts, cfg.igd_normalised);
        result.metrics.insert(result.metrics.end(), rows.begin(), rows.end());
    }

    result.aggregate = aggregate(result.metrics);
    write_text_file(cfg.output_dir / "runs.csv", runs_csv);
    write_text_file(cfg.output_dir / "metrics.csv", metrics_csv(result.metrics));
    write_text_file(cfg.output_dir / "aggregate.csv", aggregate_csv(result.aggregate));
    write_text_file(cfg.output_dir / "rdi.csv", rdi_table_csv(result.aggregate));
    return result;
}

Front replay(const fs::path& result_dir, const std::string& dataset, Clusterer clusterer, std::size_t repetition,
             std::optional<std::uint64_t> seed) {
    const auto cfg_path = result_dir / "config.json";
    const auto ds_path = result_dir / "datasets" / (dataset + ".json");
    for (const auto& p : {cfg_path, ds_path, result_dir / "resources.json"}) {
        if (!fs::exists(p)) throw Error(ErrorKind::Io, "replay: missing input '" + p.string() + "'");
    }
    const auto cfg = load_experiment_config(cfg_path);
    std::optional<std::uint64_t> recorded;
    if (!seed) recorded = recorded_seed(result_dir, dataset, clusterer, repetition);
    const WorkflowSet ws = load_native(ds_path);
    require_schedulable(ws);
    const ResourceCatalog catalog = load_resources(result_dir / "resources.json");
    const Baselines baselines = compute_baselines(ws, catalog);
    const ClusterPlan plan = make_plan(clusterer, ws, catalog);
    const OrderedPlan order = order_interleave(plan, ws);
    OptimizerConfig oc = cfg.optimizer;
    oc.seed = seed ? *seed : *recorded;
    return run({&ws, &catalog, &plan, &order, &baselines}, oc);
}

} // namespace mwsched
