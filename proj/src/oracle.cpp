#include "ccoreset/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace ccoreset {

namespace {

double part_cost_at(const std::vector<const WeightedColoredPoint*>& part, const Point& center,
                    int power) {
    double c = 0.0;
    for (const auto* e : part)
        c += static_cast<double>(e->weight) * distance_pow(e->point, center, power);
    return c;
}

Point centroid_of(const std::vector<const WeightedColoredPoint*>& part, int dim) {
    Point mu(std::vector<double>(dim, 0.0));
    double total = 0.0;
    for (const auto* e : part) {
        total += static_cast<double>(e->weight);
        for (int i = 0; i < dim; ++i) mu[i] += static_cast<double>(e->weight) * e->point[i];
    }
    for (int i = 0; i < dim; ++i) mu[i] /= total;
    return mu;
}

Point optimal_part_center(const std::vector<const WeightedColoredPoint*>& part, int dim,
                          int power) {
    if (power == 2) return centroid_of(part, dim);
    PointSet tmp(dim);
    for (const auto* e : part) tmp.add(e->point, 0, e->weight);
    return geometric_median(tmp);
}

}  // namespace

Point geometric_median(const PointSet& points) {
    if (points.empty()) throw Error("geometric_median: empty input");
    const int dim = points.dimension();
    if (points.size() == 1) return points[0].point;

    double scale = 0.0;
    Point y = weighted_mean(points);
    for (const auto& e : points.entries()) scale = std::max(scale, distance(e.point, y));
    if (scale == 0.0) return y;  // all points coincide

    const double eps = 1e-13 * scale;
    for (int iter = 0; iter < 500; ++iter) {
        // Vardi-Zhang step: split off any data point the iterate sits on
        double anchor_weight = 0.0;
        Point t(std::vector<double>(dim, 0.0));
        double denom = 0.0;
        for (const auto& e : points.entries()) {
            double d = distance(e.point, y);
            if (d < eps) {
                anchor_weight += static_cast<double>(e.weight);
                continue;
            }
            double w = static_cast<double>(e.weight) / d;
            denom += w;
            for (int i = 0; i < dim; ++i) t[i] += w * e.point[i];
        }
        if (denom == 0.0) return y;  // everything sits on y

        Point direction(std::vector<double>(dim, 0.0));
        for (const auto& e : points.entries()) {
            double d = distance(e.point, y);
            if (d < eps) continue;
            double w = static_cast<double>(e.weight) / d;
            for (int i = 0; i < dim; ++i) direction[i] += w * (e.point[i] - y[i]);
        }
        double r = std::sqrt(squared_distance(direction, Point(std::vector<double>(dim, 0.0))));
        if (anchor_weight > 0.0 && r <= anchor_weight) return y;  // anchor certificate

        Point next(std::vector<double>(dim, 0.0));
        for (int i = 0; i < dim; ++i) next[i] = t[i] / denom;
        if (anchor_weight > 0.0) {
            double lambda = anchor_weight / r;
            for (int i = 0; i < dim; ++i) next[i] = (1.0 - lambda) * next[i] + lambda * y[i];
        }
        double moved = distance(next, y);
        y = next;
        if (moved <= 1e-11 * scale) break;
    }
    return y;
}

UnconstrainedOpt brute_force_unconstrained_opt(const PointSet& points, int k,
                                               const MetricConfig& cfg,
                                               const OracleBudget& budget) {
    if (points.empty()) throw Error("oracle: empty input");
    if (cfg.power != 1 && cfg.power != 2) throw Error("oracle: power must be 1 or 2");
    if (k < 1) throw Error("oracle: k must be >= 1");
    if (k > budget.max_k) throw Error("oracle: k exceeds budget");
    PointSet exp = expand(points);
    const int n = static_cast<int>(exp.size());
    if (n > budget.max_points) throw Error("oracle: instance exceeds point budget");

    const int dim = exp.dimension();
    UnconstrainedOpt best;
    best.value = std::numeric_limits<double>::infinity();

    // restricted-growth strings enumerate set partitions into at most k parts
    std::vector<int> labels(n, 0);
    std::function<void(int, int)> rec = [&](int idx, int used) {
        if (idx == n) {
            std::vector<std::vector<const WeightedColoredPoint*>> parts(used);
            for (int i = 0; i < n; ++i) parts[labels[i]].push_back(&exp[i]);
            double total = 0.0;
            CenterSet centers;
            for (const auto& part : parts) {
                Point c = optimal_part_center(part, dim, cfg.power);
                total += part_cost_at(part, c, cfg.power);
                centers.push_back(std::move(c));
                if (total >= best.value) break;
            }
            if (total < best.value) {
                best.value = total;
                best.centers = std::move(centers);
                best.expanded_labels = labels;
            }
            return;
        }
        int top = std::min(used + 1, k);
        for (int c = 0; c < top; ++c) {
            labels[idx] = c;
            rec(idx + 1, std::max(used, c + 1));
        }
    };
    rec(0, 0);
    if (best.value < 1e-15) best.value = std::max(best.value, 0.0);
    return best;
}

namespace {

struct RowRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

// conservative per-row size windows used only to prune the labeled enumeration
std::vector<RowRange> row_windows(const ConstraintFamily& family) {
    const int R = family.cluster_count();
    const std::int64_t n = family.total_mass();
    std::vector<RowRange> win(R, RowRange{0, n});
    switch (family.kind()) {
        case ConstraintFamily::Kind::LowerBounds:
            if (family.lower_bound_mode() == LowerBoundMode::Strict)
                for (int i = 0; i < R; ++i) win[i].lo = family.bounds()[i];
            break;
        case ConstraintFamily::Kind::UpperBounds:
            for (int i = 0; i < R; ++i) win[i].hi = family.bounds()[i];
            break;
        case ConstraintFamily::Kind::Outliers:
            for (int i = 0; i < family.outlier_count(); ++i) win[i] = RowRange{1, 1};
            break;
        case ConstraintFamily::Kind::Chromatic:
            for (int i = 0; i < R; ++i) win[i].hi = family.color_count();
            break;
        default:
            break;
    }
    return win;
}

}  // namespace

ConstrainedOpt brute_force_constrained_opt(const PointSet& points, const ConstraintFamily& family,
                                           const MetricConfig& cfg, const OracleBudget& budget) {
    if (points.empty()) throw Error("oracle: empty input");
    if (cfg.power != 1 && cfg.power != 2) throw Error("oracle: power must be 1 or 2");
    if (family.center_count() > budget.max_k) throw Error("oracle: k exceeds budget");
    if (family.color_count() != points.color_count() ||
        family.color_masses() != points.color_weights())
        throw Error("oracle: family arity does not match the instance");
    PointSet exp = expand(points);
    const int n = static_cast<int>(exp.size());
    if (n > budget.max_points_constrained) throw Error("oracle: instance exceeds point budget");

    const int R = family.cluster_count();
    const int z = family.outlier_count();
    const int dim = exp.dimension();
    const auto windows = row_windows(family);

    double est = std::pow(static_cast<double>(R), n);
    if (est > static_cast<double>(budget.max_candidates))
        throw Error("oracle: labeled enumeration exceeds budget");

    ConstrainedOpt best;
    best.value = std::numeric_limits<double>::infinity();

    std::vector<int> labels(n, -1);
    std::vector<std::int64_t> row_size(R, 0);
    std::function<void(int)> rec = [&](int idx) {
        if (idx == n) {
            ColorMatrix K = realized_matrix(exp, labels, R);
            if (!family.admits(K)) return;
            std::vector<std::vector<const WeightedColoredPoint*>> parts(R);
            for (int i = 0; i < n; ++i) parts[labels[i]].push_back(&exp[i]);
            double discounted = 0.0;
            double raw = 0.0;
            CenterSet centers;
            for (int r = 0; r < R; ++r) {
                if (parts[r].empty()) {
                    if (r >= z) centers.push_back(Point(std::vector<double>(dim, 0.0)));
                    continue;
                }
                Point c = optimal_part_center(parts[r], dim, cfg.power);
                double pc = part_cost_at(parts[r], c, cfg.power);
                raw += pc;
                if (r >= z) {
                    discounted += pc;
                    centers.push_back(std::move(c));
                }
            }
            if (discounted < best.value) {
                best.feasible = true;
                best.value = discounted;
                best.raw_value = raw;
                best.centers = std::move(centers);
                best.expanded_labels = labels;
                best.realized = std::move(K);
            }
            return;
        }
        const int remaining = n - idx;
        for (int r = 0; r < R; ++r) {
            if (row_size[r] + 1 > windows[r].hi) continue;
            // outlier rows are interchangeable; force nondecreasing outlier usage
            if (r > 0 && r < z && row_size[r - 1] == 0) break;
            labels[idx] = r;
            row_size[r] += 1;
            // can all row minima still be met with the points left after this one?
            std::int64_t deficit = 0;
            for (int q = 0; q < R; ++q) deficit += std::max<std::int64_t>(0, windows[q].lo - row_size[q]);
            if (deficit <= remaining - 1) rec(idx + 1);
            row_size[r] -= 1;
            labels[idx] = -1;
        }
    };
    rec(0);
    return best;
}

std::optional<double> constrained_cost_at_centers(const PointSet& points, const CenterSet& centers,
                                                  const ConstraintFamily& family,
                                                  const MetricConfig& cfg,
                                                  const OracleBudget& budget) {
    if (points.empty()) throw Error("oracle: empty input");
    if (family.color_count() != points.color_count() ||
        family.color_masses() != points.color_weights())
        throw Error("oracle: family arity does not match the instance");
    const int R = family.cluster_count();
    const int z = family.outlier_count();
    const bool explicit_outlier_centers = static_cast<int>(centers.size()) == R && z > 0;
    if (!explicit_outlier_centers && static_cast<int>(centers.size()) != family.center_count())
        throw Error("oracle: center count does not match the family");

    PointSet exp = expand(points);
    const int n = static_cast<int>(exp.size());
    if (n > budget.max_points_constrained) throw Error("oracle: instance exceeds point budget");
    double est = std::pow(static_cast<double>(R), n);
    if (est > static_cast<double>(budget.max_candidates))
        throw Error("oracle: labeled enumeration exceeds budget");

    // leg cost for putting one unit of entry e into row r
    auto leg = [&](int e, int r) -> double {
        if (r < z) {
            if (!explicit_outlier_centers) return 0.0;
            return distance_pow(exp[e].point, centers[r], cfg.power);
        }
        int ci = explicit_outlier_centers ? r : r - z;
        return distance_pow(exp[e].point, centers[ci], cfg.power);
    };
    // outlier legs never count toward the reported cost
    auto counted = [&](int e, int r) -> double { return r < z ? 0.0 : leg(e, r); };

    const auto windows = row_windows(family);
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> labels(n, -1);
    std::vector<std::int64_t> row_size(R, 0);
    double running = 0.0;
    std::function<void(int)> rec = [&](int idx) {
        if (running >= best) return;
        if (idx == n) {
            ColorMatrix K = realized_matrix(exp, labels, R);
            if (family.admits(K)) best = std::min(best, running);
            return;
        }
        const int remaining = n - idx;
        for (int r = 0; r < R; ++r) {
            if (row_size[r] + 1 > windows[r].hi) continue;
            if (r > 0 && r < z && row_size[r - 1] == 0) break;
            labels[idx] = r;
            row_size[r] += 1;
            running += counted(idx, r);
            std::int64_t deficit = 0;
            for (int q = 0; q < R; ++q) deficit += std::max<std::int64_t>(0, windows[q].lo - row_size[q]);
            if (deficit <= remaining - 1) rec(idx + 1);
            running -= counted(idx, r);
            row_size[r] -= 1;
            labels[idx] = -1;
        }
    };
    rec(0);
    if (best == std::numeric_limits<double>::infinity()) return std::nullopt;
    return best;
}

}  // namespace ccoreset
