#include "mwsched/nsga3.hpp"

#include "mwsched/error.hpp"
#include "mwsched/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace mwsched {

bool dominates(const ObjVec& a, const ObjVec& b) {
    bool strictly = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly = true;
    }
    return strictly;
}

void check(const OptimizerConfig& cfg) {
    auto bad = [](const std::string& m) { throw Error(ErrorKind::InvalidArgument, "optimizer config: " + m); };
    if (cfg.population == 0) bad("population must be > 0");
    if (!(cfg.crossover_rate >= 0.0 && cfg.crossover_rate <= 1.0)) bad("crossover_rate must lie in [0, 1]");
    if (!(cfg.mutation_rate >= 0.0 && cfg.mutation_rate <= 1.0)) bad("mutation_rate must lie in [0, 1]");
    if (cfg.divisions == 0) bad("divisions must be > 0");
}

std::vector<std::vector<std::size_t>> nondominated_sort(std::span<const ObjVec> points) {
    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> dominated_by_me(n);
    std::vector<std::size_t> dom_count(n, 0);
    std::vector<std::vector<std::size_t>> levels;
    std::vector<std::size_t> current;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            if (dominates(points[p], points[q])) {
                dominated_by_me[p].push_back(q);
                ++dom_count[q];
            } else if (dominates(points[q], points[p])) {
                dominated_by_me[q].push_back(p);
                ++dom_count[p];
            }
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        if (dom_count[p] == 0) current.push_back(p);
    }
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (auto p : current) {
            for (auto q : dominated_by_me[p]) {
                if (--dom_count[q] == 0) next.push_back(q);
            }
        }
        std::sort(next.begin(), next.end());
        levels.push_back(std::move(current));
        current = std::move(next);
    }
    return levels;
}

std::vector<ObjVec> reference_directions(std::size_t divisions) {
    if (divisions == 0) throw Error(ErrorKind::InvalidArgument, "reference_directions: divisions must be > 0");
    std::vector<ObjVec> out;
    const double p = static_cast<double>(divisions);
    for (std::size_t i = 0; i <= divisions; ++i) {
        for (std::size_t j = 0; j <= divisions - i; ++j) {
            out.push_back({static_cast<double>(i) / p, static_cast<double>(j) / p,
                           static_cast<double>(divisions - i - j) / p});
        }
    }
    return out;
}

namespace {

// Solves A x = 1 for 3x3 A by Gaussian elimination; false if (near) singular.
bool solve_unit_rhs(std::array<std::array<double, 3>, 3> a, std::array<double, 3>& x) {
    std::array<double, 3> b{1.0, 1.0, 1.0};
    for (std::size_t c = 0; c < 3; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < 3; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        }
        if (std::abs(a[piv][c]) < 1e-12) return false;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < 3; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < 3; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    for (std::size_t c = 3; c-- > 0;) {
        double s = b[c];
        for (std::size_t k = c + 1; k < 3; ++k) s -= a[c][k] * x[k];
        x[c] = s / a[c][c];
    }
    return true;
}

// Adaptive normalisation: translate by the ideal point, scale by the
// intercepts of the hyperplane through the extreme points, falling back to
// the nadir of `members` when that hyperplane is degenerate.
std::vector<ObjVec> normalise(std::span<const ObjVec> points, std::span<const std::size_t> members) {
    ObjVec ideal;
    ideal.fill(std::numeric_limits<double>::infinity());
    for (auto s : members) {
        for (std::size_t i = 0; i < 3; ++i) ideal[i] = std::min(ideal[i], points[s][i]);
    }

    std::vector<ObjVec> shifted(members.size());
    for (std::size_t m = 0; m < members.size(); ++m) {
        for (std::size_t i = 0; i < 3; ++i) shifted[m][i] = points[members[m]][i] - ideal[i];
    }

    std::array<std::array<double, 3>, 3> extremes{};
    for (std::size_t axis = 0; axis < 3; ++axis) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& f : shifted) {
            double asf = 0.0;
            for (std::size_t i = 0; i < 3; ++i) asf = std::max(asf, f[i] / (i == axis ? 1.0 : 1e-6));
            if (asf < best) {
                best = asf;
                extremes[axis] = f;
            }
        }
    }

    ObjVec intercept{};
    std::array<double, 3> plane{};
    bool ok = solve_unit_rhs(extremes, plane);
    for (std::size_t i = 0; ok && i < 3; ++i) {
        intercept[i] = 1.0 / plane[i];
        if (!std::isfinite(intercept[i]) || intercept[i] <= 1e-10) ok = false;
    }
    if (!ok) {
        for (std::size_t i = 0; i < 3; ++i) {
            intercept[i] = 0.0;
            for (const auto& f : shifted) intercept[i] = std::max(intercept[i], f[i]);
        }
    }
    for (auto& a : intercept) {
        if (!(a > 1e-10)) a = 1.0; // flat objective: every member normalises to 0
    }
    for (auto& f : shifted) {
        for (std::size_t i = 0; i < 3; ++i) f[i] /= intercept[i];
    }
    return shifted;
}

std::pair<std::size_t, double> associate(const ObjVec& f, std::span<const ObjVec> refs) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < refs.size(); ++j) {
        const auto& w = refs[j];
        const double ww = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
        const double t = (f[0] * w[0] + f[1] * w[1] + f[2] * w[2]) / ww;
        double d2 = 0.0;
        for (std::size_t i = 0; i < 3; ++i) d2 += (f[i] - t * w[i]) * (f[i] - t * w[i]);
        if (d2 < best_d) {
            best_d = d2;
            best = j;
        }
    }
    return {best, std::sqrt(best_d)};
}

} // namespace

std::vector<std::size_t> niche_preserve(std::span<const ObjVec> points,
                                        const std::vector<std::vector<std::size_t>>& levels, std::size_t k,
                                        std::span<const ObjVec> refs, Rng& rng, std::vector<std::size_t>* niche_out) {
    std::size_t total = 0;
    for (const auto& l : levels) total += l.size();
    if (k > total) {
        throw Error(ErrorKind::InvalidArgument, "niche_preserve: K=" + std::to_string(k) + " exceeds the " +
                                                    std::to_string(total) + " ranked points");
    }
    if (refs.empty()) throw Error(ErrorKind::InvalidArgument, "niche_preserve: no reference directions");

    std::vector<std::size_t> selected;
    std::size_t l = 0;
    while (l < levels.size() && selected.size() + levels[l].size() <= k) {
        selected.insert(selected.end(), levels[l].begin(), levels[l].end());
        ++l;
    }
    const bool split = selected.size() < k && l < levels.size();
    std::vector<std::size_t> boundary = split ? levels[l] : std::vector<std::size_t>{};

    std::vector<std::size_t> members = selected;
    members.insert(members.end(), boundary.begin(), boundary.end());
    if (members.empty()) {
        if (niche_out) niche_out->clear();
        return selected;
    }
    const auto normalised = normalise(points, members);
    std::vector<std::size_t> niche(points.size(), 0);
    std::vector<double> dist(points.size(), 0.0);
    for (std::size_t m = 0; m < members.size(); ++m) {
        std::tie(niche[members[m]], dist[members[m]]) = associate(normalised[m], refs);
    }

    if (split) {
        std::vector<std::size_t> count(refs.size(), 0);
        for (auto s : selected) ++count[niche[s]];
        std::vector<bool> taken(points.size(), false);
        auto admit = [&](std::size_t s) {
            selected.push_back(s);
            taken[s] = true;
            ++count[niche[s]];
        };

        // Keep the best value of every objective: if no accepted member
        // attains the minimum over the candidates, admit the boundary member
        // that does.
        for (std::size_t i = 0; i < 3 && selected.size() < k; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (auto s : members) best = std::min(best, points[s][i]);
            const bool kept = std::any_of(selected.begin(), selected.end(), [&](std::size_t s) { return points[s][i] == best; });
            if (kept) continue;
            for (auto s : boundary) {
                if (!taken[s] && points[s][i] == best) {
                    admit(s);
                    break;
                }
            }
        }

        std::vector<bool> excluded(refs.size(), false);
        while (selected.size() < k) {
            std::size_t min_count = std::numeric_limits<std::size_t>::max();
            for (std::size_t j = 0; j < refs.size(); ++j) {
                if (!excluded[j]) min_count = std::min(min_count, count[j]);
            }
            std::vector<std::size_t> least;
            for (std::size_t j = 0; j < refs.size(); ++j) {
                if (!excluded[j] && count[j] == min_count) least.push_back(j);
            }
            const std::size_t j = least[std::uniform_int_distribution<std::size_t>(0, least.size() - 1)(rng)];

            std::vector<std::size_t> cands;
            for (auto s : boundary) {
                if (!taken[s] && niche[s] == j) cands.push_back(s);
            }
            if (cands.empty()) {
                excluded[j] = true;
                continue;
            }
            std::size_t pick = cands.front();
            if (count[j] == 0) {
                for (auto s : cands) {
                    if (dist[s] < dist[pick]) pick = s;
                }
            } else {
                pick = cands[std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng)];
            }
            admit(pick);
        }
    }

    if (niche_out) {
        niche_out->clear();
        for (auto s : selected) niche_out->push_back(niche[s]);
    }
    return selected;
}

std::pair<Assignment, Assignment> single_point_crossover(const Assignment& a, const Assignment& b, std::size_t cut) {
    if (a.genes.size() != b.genes.size()) {
        throw Error(ErrorKind::InvalidArgument, "crossover: parents have different gene lengths");
    }
    cut = std::min(cut, a.genes.size());
    Assignment c1 = a;
    Assignment c2 = b;
    for (std::size_t i = cut; i < a.genes.size(); ++i) {
        c1.genes[i] = b.genes[i];
        c2.genes[i] = a.genes[i];
    }
    return {std::move(c1), std::move(c2)};
}

std::pair<Assignment, Assignment> crossover(const Assignment& a, const Assignment& b, double rate, Rng& rng) {
    if (a.genes.size() != b.genes.size()) {
        throw Error(ErrorKind::InvalidArgument, "crossover: parents have different gene lengths");
    }
    const bool apply = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < rate;
    if (!apply || a.genes.size() < 2) return {a, b};
    const auto cut = std::uniform_int_distribution<std::size_t>(1, a.genes.size() - 1)(rng);
    return single_point_crossover(a, b, cut);
}

Assignment mutate(const Assignment& a, double rate, std::size_t n_resources, Rng& rng) {
    Assignment out = a;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(n_resources) - 1);
    for (auto& g : out.genes) {
        if (coin(rng) < rate) g = pick(rng);
    }
    return out;
}

std::vector<std::size_t> nondominated_filter(std::span<const ObjVec> points) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool keep = true;
        for (std::size_t j = 0; j < points.size() && keep; ++j) {
            if (j == i) continue;
            if (dominates(points[j], points[i])) keep = false;
            if (j < i && points[j] == points[i]) keep = false;
        }
        if (keep) out.push_back(i);
    }
    return out;
}

namespace {

std::vector<ObjVec> objectives_of(const std::vector<Individual>& pop) {
    std::vector<ObjVec> out;
    out.reserve(pop.size());
    for (const auto& ind : pop) out.push_back(ind.objectives);
    return out;
}

// Ranks `pool`, keeps `k` by niching and writes rank/niche into the survivors.
std::vector<Individual> environmental_selection(std::vector<Individual>& pool, std::size_t k,
                                                std::span<const ObjVec> refs, Rng& rng) {
    const auto objs = objectives_of(pool);
    const auto levels = nondominated_sort(objs);
    for (std::size_t l = 0; l < levels.size(); ++l) {
        for (auto i : levels[l]) pool[i].rank = l;
    }
    std::vector<std::size_t> niches;
    const auto keep = niche_preserve(objs, levels, k, refs, rng, &niches);
    std::vector<Individual> out;
    out.reserve(keep.size());
    for (std::size_t s = 0; s < keep.size(); ++s) {
        out.push_back(std::move(pool[keep[s]]));
        out.back().niche = niches[s];
    }
    return out;
}

} // namespace

Front optimize(std::size_t genes, std::size_t n_resources, const Evaluator& evaluate, const OptimizerConfig& cfg,
               RunTrace* trace) {
    check(cfg);
    if (genes == 0) throw Error(ErrorKind::InvalidArgument, "optimize: chromosome has no genes");
    if (n_resources == 0) throw Error(ErrorKind::InvalidArgument, "optimize: no resources");

    Rng rng(splitmix64(cfg.seed));
    const auto refs = reference_directions(cfg.divisions);
    std::uniform_int_distribution<int> gene_dist(0, static_cast<int>(n_resources) - 1);

    // Genomes are kept unique; the population only falls short of its target
    // size when the search space itself is smaller.
    const std::size_t max_attempts = 10 * cfg.population;
    std::set<std::vector<int>> seen;
    std::vector<Individual> pop;
    pop.reserve(cfg.population);
    for (std::size_t attempt = 0; pop.size() < cfg.population && attempt < max_attempts; ++attempt) {
        Individual ind;
        ind.assignment.genes.resize(genes);
        for (auto& g : ind.assignment.genes) g = gene_dist(rng);
        if (seen.insert(ind.assignment.genes).second) pop.push_back(std::move(ind));
    }
    // Non-dominated set of every individual evaluated so far; ties on
    // objectives keep the first one seen.
    std::vector<Individual> archive;
    auto record = [&](const Individual& ind) {
        for (const auto& a : archive) {
            if (a.objectives == ind.objectives || dominates(a.objectives, ind.objectives)) return;
        }
        std::erase_if(archive, [&](const Individual& a) { return dominates(ind.objectives, a.objectives); });
        archive.push_back(ind);
    };
    for (auto& ind : pop) {
        ind.objectives = evaluate(ind.assignment);
        record(ind);
    }
    if (trace) trace->initial_population = pop;
    pop = environmental_selection(pop, pop.size(), refs, rng);

    std::vector<std::size_t> niche_count(refs.size(), 0);
    auto tournament = [&]() -> const Individual& {
        std::uniform_int_distribution<std::size_t> any(0, pop.size() - 1);
        const auto& a = pop[any(rng)];
        const auto& b = pop[any(rng)];
        if (a.rank != b.rank) return a.rank < b.rank ? a : b;
        if (niche_count[a.niche] != niche_count[b.niche]) return niche_count[a.niche] < niche_count[b.niche] ? a : b;
        return std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? a : b;
    };

    for (std::size_t gen = 0; gen < cfg.generations; ++gen) {
        std::fill(niche_count.begin(), niche_count.end(), 0);
        for (const auto& ind : pop) ++niche_count[ind.niche];

        seen.clear();
        for (const auto& ind : pop) seen.insert(ind.assignment.genes);
        std::vector<Individual> offspring;
        offspring.reserve(cfg.population + 1);
        auto admit = [&](Assignment&& a) {
            if (offspring.size() < cfg.population && seen.insert(a.genes).second) {
                offspring.push_back({std::move(a), {}, 0, 0});
            }
        };
        for (std::size_t attempt = 0; offspring.size() < cfg.population && attempt < max_attempts; ++attempt) {
            const auto& p1 = tournament();
            const auto& p2 = tournament();
            auto [c1, c2] = crossover(p1.assignment, p2.assignment, cfg.crossover_rate, rng);
            admit(mutate(c1, cfg.mutation_rate, n_resources, rng));
            admit(mutate(c2, cfg.mutation_rate, n_resources, rng));
        }
        for (auto& ind : offspring) {
            ind.objectives = evaluate(ind.assignment);
            record(ind);
        }

        std::vector<Individual> pool = std::move(pop);
        pool.insert(pool.end(), std::make_move_iterator(offspring.begin()), std::make_move_iterator(offspring.end()));
        pop = environmental_selection(pool, std::min(cfg.population, pool.size()), refs, rng);
    }

    Front front;
    front.solutions = std::move(archive);
    for (auto& ind : front.solutions) ind.rank = 0;
    std::sort(front.solutions.begin(), front.solutions.end(), [](const Individual& a, const Individual& b) {
        return a.objectives != b.objectives ? a.objectives < b.objectives : a.assignment.genes < b.assignment.genes;
    });
    return front;
}

Front run(const Problem& problem, const OptimizerConfig& cfg, RunTrace* trace) {
    if (!problem.ws || !problem.catalog || !problem.plan || !problem.order) {
        throw Error(ErrorKind::InvalidArgument, "run: incomplete problem");
    }
    auto evaluate = [&](const Assignment& a) { return decode(problem, a).objectives.as_array(); };
    return optimize(problem.plan->size(), problem.catalog->size(), evaluate, cfg, trace);
}

} // namespace mwsched
