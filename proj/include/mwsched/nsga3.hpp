#pragma once

#include "mwsched/schedule.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mwsched {

using ObjVec = std::array<double, 3>;

// true iff a Pareto-dominates b (minimisation).
bool dominates(const ObjVec& a, const ObjVec& b);

struct Individual {
    Assignment assignment;
    ObjVec objectives{};
    std::size_t rank = 0;  // non-domination level
    std::size_t niche = 0; // associated reference direction
};

struct OptimizerConfig {
    std::size_t population = 50;
    std::size_t generations = 200;
    double crossover_rate = 0.8;
    double mutation_rate = 0.01;
    std::uint64_t seed = 1;
    std::size_t divisions = 12;
};

// Throws Error(InvalidArgument).
void check(const OptimizerConfig& cfg);

// Pairwise non-dominated solutions, sorted by objectives.
struct Front {
    std::vector<Individual> solutions;

    std::size_t size() const noexcept { return solutions.size(); }
};

// Levels of indices into `points`; level 0 is the non-dominated set.
std::vector<std::vector<std::size_t>> nondominated_sort(std::span<const ObjVec> points);

// Das-Dennis lattice on the unit simplex: all 3-vectors with coordinates in
// {0, 1/p, ..., 1} summing to 1. C(p + 2, 2) directions.
std::vector<ObjVec> reference_directions(std::size_t divisions);

using Rng = std::mt19937_64;

// Picks `k` survivors (indices into `points`) from the ranked levels: whole
// levels first, then the boundary level split by reference-direction niching
// on normalised objectives. Throws Error(InvalidArgument) when k exceeds the
// number of points.
std::vector<std::size_t> niche_preserve(std::span<const ObjVec> points,
                                        const std::vector<std::vector<std::size_t>>& levels, std::size_t k,
                                        std::span<const ObjVec> refs, Rng& rng,
                                        std::vector<std::size_t>* niche_out = nullptr);

// Children of a cut before position `cut`: (a[:cut] + b[cut:], b[:cut] + a[cut:]).
std::pair<Assignment, Assignment> single_point_crossover(const Assignment& a, const Assignment& b, std::size_t cut);
// Single-point crossover with probability `rate` (children are copies otherwise).
std::pair<Assignment, Assignment> crossover(const Assignment& a, const Assignment& b, double rate, Rng& rng);
// Per-gene uniform resample over [0, n_resources) with probability `rate`.
Assignment mutate(const Assignment& a, double rate, std::size_t n_resources, Rng& rng);

using Evaluator = std::function<ObjVec(const Assignment&)>;

struct RunTrace {
    std::vector<Individual> initial_population;
};

// NSGA-III over assignment vectors of length `genes`, each gene in [0, n_resources).
Front optimize(std::size_t genes, std::size_t n_resources, const Evaluator& evaluate, const OptimizerConfig& cfg,
               RunTrace* trace = nullptr);

// Clusters -> order -> NSGA-III over cluster-to-resource assignments.
Front run(const Problem& problem, const OptimizerConfig& cfg, RunTrace* trace = nullptr);

// Non-dominated subset of `points` with exact duplicates removed (first kept).
std::vector<std::size_t> nondominated_filter(std::span<const ObjVec> points);

// CSV with header "makespan,cost,unfairness,genes"; genes are space-separated
// resource indices. Doubles use shortest round-trip formatting.
std::string front_to_csv(const Front& front);
// Throws Error(Parse) with the offending line number.
Front front_from_csv(std::string_view text, std::string_view source = "<front>");

} // namespace mwsched
