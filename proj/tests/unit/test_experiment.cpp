#include <doctest.h>

#include "mwsched/error.hpp"
#include "mwsched/experiment.hpp"
#include "mwsched/io.hpp"
#include "mwsched/seeding.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <filesystem>
#include <map>

using namespace mwsched;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / "mwsched_test_experiment" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ExperimentConfig small_config(const fs::path& out) {
    ExperimentConfig cfg;
    cfg.datasets.push_back({"tiny", GeneratorSpec{2, 4, 6, 1.0, 0.3, 3}, {}, {}});
    cfg.clusterers = {Clusterer::DfsCst, Clusterer::P2P};
    cfg.optimizer.population = 12;
    cfg.optimizer.generations = 10;
    cfg.repetitions = 2;
    cfg.output_dir = out;
    cfg.seed = 9;
    return cfg;
}

} // namespace

TEST_CASE("one dataset, one clusterer, one repetition scores IGD 0") {
    auto cfg = small_config(fresh_dir("single"));
    cfg.clusterers = {Clusterer::DfsCst};
    cfg.repetitions = 1;
    const auto res = run_experiment(cfg);
    REQUIRE(res.runs.size() == 1);
    REQUIRE(res.metrics.size() == 1);
    CHECK(res.metrics[0].igd == 0.0);
    CHECK(res.metrics[0].hv > 0.0);
}

TEST_CASE("result tree layout and round trips") {
    const auto out = fresh_dir("tree");
    const auto cfg = small_config(out);
    const auto res = run_experiment(cfg);
    CHECK(res.runs.size() == 4);
    for (const char* f : {"config.json", "resources.json", "datasets/tiny.json", "reference/tiny.csv", "runs.csv",
                          "metrics.csv", "aggregate.csv", "rdi.csv"})
        CHECK(fs::exists(out / f));
    for (const auto& r : res.runs) {
        CHECK(r.seed == run_seed(cfg.seed, r.dataset, to_string(r.clusterer), r.repetition));
        const auto stored = load_front(front_path(out, r.dataset, r.clusterer, r.repetition));
        REQUIRE(stored.size() == r.front.size());
        for (std::size_t i = 0; i < stored.size(); ++i) {
            CHECK(stored.solutions[i].objectives == r.front.solutions[i].objectives);
            CHECK(stored.solutions[i].assignment == r.front.solutions[i].assignment);
        }
    }
    // Metrics CSV parses back to the values used for aggregation.
    const auto parsed = parse_metrics_csv(read_text_file(out / "metrics.csv"));
    REQUIRE(parsed.size() == res.metrics.size());
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        CHECK(parsed[i].dataset == res.metrics[i].dataset);
        CHECK(parsed[i].algorithm == res.metrics[i].algorithm);
        CHECK(parsed[i].igd == res.metrics[i].igd);
        CHECK(parsed[i].hv == res.metrics[i].hv);
    }
    const auto again = aggregate(parsed);
    REQUIRE(again.size() == res.aggregate.size());
    for (std::size_t i = 0; i < again.size(); ++i) {
        CHECK(again[i].igd_mean == res.aggregate[i].igd_mean);
        CHECK(again[i].hv_mean == res.aggregate[i].hv_mean);
    }
    CHECK(read_text_file(out / "aggregate.csv") == aggregate_csv(res.aggregate));
}

TEST_CASE("aggregate statistics match a direct computation") {
    std::vector<MetricRow> rows{{"d", "a", 0, 1.0, 0.5}, {"d", "a", 1, 3.0, 0.7}, {"d", "b", 0, 2.0, 0.2},
                                {"d", "b", 1, 2.0, 0.2}};
    const auto agg = aggregate(rows);
    REQUIRE(agg.size() == 2);
    std::map<std::string, AggregateRow> by;
    for (const auto& r : agg) by[r.algorithm] = r;
    CHECK(by["a"].igd_mean == 2.0);
    CHECK(by["a"].igd_std == doctest::Approx(std::sqrt(2.0)));
    CHECK(by["a"].hv_mean == doctest::Approx(0.6));
    CHECK(by["b"].igd_std == 0.0);
    CHECK(by["b"].igd_rdi == 0.0);
    CHECK(by["a"].igd_rdi == 0.0);
    CHECK(by["a"].hv_rdi == 0.0);
    CHECK(by["b"].hv_rdi == doctest::Approx((0.2 - 0.6) / 0.6));
}

TEST_CASE("evaluate_fronts uses the union reference") {
    const std::vector<PointSet> fronts{{{0, 1, 0}, {1, 0, 0}}, {{0.5, 0.5, 0}}};
    const auto rows = evaluate_fronts("d", {"a", "b"}, {0, 0}, fronts, false);
    REQUIRE(rows.size() == 2);
    PointSet all{{0, 1, 0}, {1, 0, 0}, {0.5, 0.5, 0}};
    const auto ref = oracle::pareto_filter(all);
    CHECK(rows[0].igd == doctest::Approx(oracle::igd(fronts[0], ref)));
    CHECK(rows[1].igd == doctest::Approx(oracle::igd(fronts[1], ref)));
}

TEST_CASE("identical configs give identical trees and replay matches") {
    const auto a = fresh_dir("det_a");
    const auto b = fresh_dir("det_b");
    run_experiment(small_config(a));
    run_experiment(small_config(b));
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
        if (!entry.is_regular_file()) continue;
        const auto rel = fs::relative(entry.path(), a);
        CAPTURE(rel.string());
        CHECK(read_text_file(entry.path()) == read_text_file(b / rel));
    }
    const auto stored = load_front(front_path(a, "tiny", Clusterer::P2P, 1));
    const auto again = replay(a, "tiny", Clusterer::P2P, 1);
    CHECK(front_to_csv(again) == front_to_csv(stored));

    bool any_diff = false;
    for (std::uint64_t s = 1; s <= 5 && !any_diff; ++s)
        any_diff = front_to_csv(replay(a, "tiny", Clusterer::P2P, 1, s)) != front_to_csv(stored);
    CHECK(any_diff);

    CHECK_THROWS_AS(replay(a, "missing", Clusterer::P2P, 0), Error);
    CHECK_THROWS_AS(replay(a, "tiny", Clusterer::P2P, 7), Error);
}

TEST_CASE("config parsing") {
    const auto doc = nlohmann::json::parse(R"({
        "datasets": [{"name": "g", "generator": {"n_workflows": 2, "task_min": 3, "task_max": 4, "ccr": 1, "parallelism": 0.5, "seed": 1}},
                     {"name": "n", "path": "diamond.json"},
                     {"factorial": true, "seed": 5}],
        "clusterers": ["p2p", "mdnc"],
        "optimizer": {"population": 10, "generations": 3},
        "repetitions": 2, "seed": 4, "output_dir": "out", "igd_space": "raw"})");
    const auto cfg = experiment_config_from_json(doc, MWS_FIXTURES);
    CHECK(cfg.datasets.size() == 18);
    CHECK(cfg.datasets[1].native_path == fs::path(MWS_FIXTURES) / "diamond.json");
    CHECK(cfg.datasets[2].name == "ds01");
    CHECK(cfg.clusterers == std::vector<Clusterer>{Clusterer::P2P, Clusterer::Mdnc});
    CHECK(cfg.optimizer.population == 10);
    CHECK(cfg.optimizer.crossover_rate == 0.8);
    CHECK(cfg.repetitions == 2);
    CHECK_FALSE(cfg.igd_normalised);
    CHECK(cfg.output_dir == fs::path(MWS_FIXTURES) / "out");
}

TEST_CASE("invalid configs fail before any output") {
    auto bad = [](const char* text) {
        check(experiment_config_from_json(nlohmann::json::parse(text), fs::temp_directory_path()));
    };
    CHECK_THROWS_AS(bad(R"({"datasets": []})"), Error);
    CHECK_THROWS_AS(bad(R"({"datasets": [{"name": "x", "path": "a.json"}], "clusterers": []})"), Error);
    CHECK_THROWS_AS(bad(R"({"datasets": [{"name": "x", "path": "a.json"}], "clusterers": ["kmeans"]})"), Error);
    CHECK_THROWS_AS(bad(R"({"datasets": [{"name": "x", "path": "a.json"}], "repetitions": 0})"), Error);

    const auto out = fresh_dir("invalid") / "tree";
    auto cfg = small_config(out);
    cfg.datasets.push_back({"missing", std::nullopt, "/nonexistent/file.json", {}});
    CHECK_THROWS_AS(run_experiment(cfg), Error);
    CHECK_FALSE(fs::exists(out));
}
