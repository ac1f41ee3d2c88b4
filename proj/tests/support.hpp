#pragma once

// Shared instance generators and tolerance helpers for the test suites.

#include <cmath>
#include <cstdint>
#include <vector>

#include "ccoreset/geometry.hpp"
#include "ccoreset/random.hpp"

namespace testsupport {

using namespace ccoreset;

inline bool close_rel(double a, double b, double rtol = 1e-9) {
    return std::abs(a - b) <= rtol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline Point random_point(Rng& rng, int d, double lo = 0.0, double hi = 1.0) {
    std::vector<double> c(d);
    for (int i = 0; i < d; ++i) c[i] = lo + (hi - lo) * rng.next_double();
    return Point(std::move(c));
}

inline PointSet random_points(Rng& rng, int n, int d, int colors = 1, std::int64_t max_weight = 1,
                              double lo = 0.0, double hi = 1.0) {
    PointSet out(d, colors);
    for (int i = 0; i < n; ++i) {
        int color = colors > 1 ? static_cast<int>(rng.next_index(colors)) : 0;
        std::int64_t w = max_weight > 1 ? 1 + static_cast<std::int64_t>(rng.next_index(max_weight)) : 1;
        out.add(random_point(rng, d, lo, hi), color, w);
    }
    return out;
}

/// Colored instance with at least one point of each color (so per-color masses
/// are all positive and family arities behave).
inline PointSet random_colored_points(Rng& rng, int n, int d, int colors) {
    PointSet out(d, colors);
    for (int i = 0; i < n; ++i) {
        int color = i < colors ? i : static_cast<int>(rng.next_index(colors));
        out.add(random_point(rng, d), color, 1);
    }
    return out;
}

inline CenterSet random_centers(Rng& rng, int k, int d, double lo = 0.0, double hi = 1.0) {
    CenterSet out;
    for (int i = 0; i < k; ++i) out.push_back(random_point(rng, d, lo, hi));
    return out;
}

inline PointSet points_1d(const std::vector<double>& xs) {
    PointSet out(1, 1);
    for (double x : xs) out.add(Point{x});
    return out;
}

/// The worked 1-d instance: four unit points at 0 and four at 1.
inline PointSet eight_point_instance() {
    return points_1d({0, 0, 0, 0, 1, 1, 1, 1});
}

}  // namespace testsupport
