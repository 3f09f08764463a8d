#pragma once

#include "mwsched/nsga3.hpp"

#include <span>
#include <vector>

namespace mwsched {

using PointSet = std::vector<ObjVec>;

// Pseudo-optimal front: non-dominated filter of the union of all fronts,
// duplicates (within 1e-9) removed.
PointSet union_reference(std::span<const PointSet> fronts);

struct Bounds {
    ObjVec lo{};
    ObjVec hi{};
};

// Per-objective min/max over `points`.
Bounds bounds_of(std::span<const ObjVec> points);

// (x - lo) / (hi - lo) per objective; a flat objective (hi == lo) maps to 0.
// Points outside the bounds map outside [0, 1].
PointSet normalise(std::span<const ObjVec> points, const Bounds& b);

// Mean over x in `reference` of the distance to the nearest point of `front`.
// Throws Error(InvalidArgument) on empty input.
double igd(std::span<const ObjVec> front, std::span<const ObjVec> reference);

inline constexpr ObjVec kHvReference{1.1, 1.1, 1.1};

// Exact hypervolume dominated by `points` w.r.t. `ref` (dimension sweep).
// Points that do not strictly dominate `ref` contribute nothing; their count
// is written to `clipped` when given.
double hypervolume(std::span<const ObjVec> points, const ObjVec& ref = kHvReference, std::size_t* clipped = nullptr);

// Exact area dominated by 2-D points w.r.t. (ref_x, ref_y).
double hypervolume_2d(std::vector<std::pair<double, double>> points, double ref_x, double ref_y);

enum class Better { Smaller, Larger };

// (value - best) / best, best = min (Smaller) or max (Larger). Throws
// Error(Domain) when best is 0 and Error(InvalidArgument) for < 2 values.
std::vector<double> rdi(std::span<const double> values, Better better);

} // namespace mwsched
