#include "mwsched/metrics.hpp"

#include "mwsched/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mwsched {

namespace {

constexpr double kTol = 1e-9;

bool same_point(const ObjVec& a, const ObjVec& b) {
    for (std::size_t i = 0; i < 3; ++i) {
        if (std::abs(a[i] - b[i]) > kTol) return false;
    }
    return true;
}

} // namespace

PointSet union_reference(std::span<const PointSet> fronts) {
    PointSet all;
    for (const auto& f : fronts) all.insert(all.end(), f.begin(), f.end());
    PointSet out;
    for (std::size_t i = 0; i < all.size(); ++i) {
        bool keep = true;
        for (std::size_t j = 0; j < all.size() && keep; ++j) {
            if (j != i && dominates(all[j], all[i]) && !same_point(all[j], all[i])) keep = false;
        }
        if (!keep) continue;
        const bool dup = std::any_of(out.begin(), out.end(), [&](const ObjVec& p) { return same_point(p, all[i]); });
        if (!dup) out.push_back(all[i]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Bounds bounds_of(std::span<const ObjVec> points) {
    Bounds b;
    b.lo.fill(std::numeric_limits<double>::infinity());
    b.hi.fill(-std::numeric_limits<double>::infinity());
    for (const auto& p : points) {
        for (std::size_t i = 0; i < 3; ++i) {
            b.lo[i] = std::min(b.lo[i], p[i]);
            b.hi[i] = std::max(b.hi[i], p[i]);
        }
    }
    return b;
}

PointSet normalise(std::span<const ObjVec> points, const Bounds& b) {
    PointSet out;
    out.reserve(points.size());
    for (const auto& p : points) {
        ObjVec q{};
        for (std::size_t i = 0; i < 3; ++i) {
            const double span = b.hi[i] - b.lo[i];
            q[i] = span > 0.0 ? (p[i] - b.lo[i]) / span : 0.0;
        }
        out.push_back(q);
    }
    return out;
}

double igd(std::span<const ObjVec> front, std::span<const ObjVec> reference) {
    if (front.empty() || reference.empty()) throw Error(ErrorKind::InvalidArgument, "igd: empty point set");
    double total = 0.0;
    for (const auto& x : reference) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& y : front) {
            double d2 = 0.0;
            for (std::size_t i = 0; i < 3; ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
            best = std::min(best, d2);
        }
        total += std::sqrt(best);
    }
    return total / static_cast<double>(reference.size());
}

double hypervolume_2d(std::vector<std::pair<double, double>> points, double ref_x, double ref_y) {
    std::sort(points.begin(), points.end());
    double area = 0.0;
    double ceiling = ref_y; // lowest y seen so far
    for (const auto& [x, y] : points) {
        if (x >= ref_x || y >= ceiling) continue;
        area += (ref_x - x) * (ceiling - y);
        ceiling = y;
    }
    return area;
}

double hypervolume(std::span<const ObjVec> points, const ObjVec& ref, std::size_t* clipped) {
    std::vector<ObjVec> inside;
    std::size_t dropped = 0;
    for (const auto& p : points) {
        if (p[0] < ref[0] && p[1] < ref[1] && p[2] < ref[2]) {
            inside.push_back(p);
        } else {
            ++dropped;
        }
    }
    if (clipped) *clipped = dropped;
    // Sweep along the first objective; between consecutive x-levels the
    // cross-section is the 2-D front of every point already passed.
    std::sort(inside.begin(), inside.end());
    double volume = 0.0;
    std::vector<std::pair<double, double>> slice;
    for (std::size_t i = 0; i < inside.size(); ++i) {
        slice.emplace_back(inside[i][1], inside[i][2]);
        const double next_x = i + 1 < inside.size() ? inside[i + 1][0] : ref[0];
        const double depth = next_x - inside[i][0];
        if (depth > 0.0) volume += depth * hypervolume_2d(slice, ref[1], ref[2]);
    }
    return volume;
}

std::vector<double> rdi(std::span<const double> values, Better better) {
    if (values.size() < 2) throw Error(ErrorKind::InvalidArgument, "rdi: needs at least two algorithms");
    const double best = better == Better::Smaller ? *std::min_element(values.begin(), values.end())
                                                  : *std::max_element(values.begin(), values.end());
    if (best == 0.0) throw Error(ErrorKind::Domain, "rdi: best value is 0, relative deviation is undefined");
    std::vector<double> out;
    out.reserve(values.size());
    for (auto v : values) out.push_back((v - best) / best);
    return out;
}

} // namespace mwsched
