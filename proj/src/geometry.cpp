#include "ccoreset/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace ccoreset {

PointSet::PointSet(int dimension, int color_count)
    : dimension_(dimension), color_count_(color_count), color_weights_(color_count, 0) {
    if (dimension < 1) throw Error("PointSet dimension must be >= 1");
    if (color_count < 1) throw Error("PointSet color count must be >= 1");
}

void PointSet::add(Point p, int color, std::int64_t weight) {
    if (dimension_ == 0) {
        dimension_ = p.dim();
        if (dimension_ < 1) throw Error("point dimension must be >= 1");
        color_weights_.assign(color_count_, 0);
    }
    if (p.dim() != dimension_) throw Error("point dimension mismatch");
    if (weight < 1) throw Error("weights must be positive integers");
    if (color < 0 || color >= color_count_) throw Error("color id out of range");
    for (double c : p.coords)
        if (!std::isfinite(c)) throw Error("coordinates must be finite");
    total_weight_ += weight;
    color_weights_[color] += weight;
    entries_.push_back(WeightedColoredPoint{std::move(p), weight, color});
}

double squared_distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.coords.size(); ++i) {
        double d = a.coords[i] - b.coords[i];
        s += d * d;
    }
    return s;
}

double distance(const Point& a, const Point& b) { return std::sqrt(squared_distance(a, b)); }

double distance_pow(const Point& a, const Point& b, int power) {
    double sq = squared_distance(a, b);
    switch (power) {
        case 1: return std::sqrt(sq);
        case 2: return sq;
        default: return std::pow(std::sqrt(sq), power);
    }
}

double nearest_center_cost(const Point& p, const CenterSet& centers, int power) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& c : centers) best = std::min(best, distance_pow(p, c, power));
    return best;
}

std::size_t nearest_center_index(const Point& p, const CenterSet& centers, int power) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        double d = distance_pow(p, centers[i], power);
        if (d < best) {
            best = d;
            arg = i;
        }
    }
    return arg;
}

double clustering_cost(const PointSet& points, const CenterSet& centers, const MetricConfig& cfg) {
    if (centers.empty()) throw Error("clustering_cost: empty center set");
    for (const Point& c : centers)
        if (c.dim() != points.dimension() && !points.empty())
            throw Error("clustering_cost: dimension mismatch");
    double total = 0.0;
    for (const auto& e : points.entries())
        total += static_cast<double>(e.weight) * nearest_center_cost(e.point, centers, cfg.power);
    return total;
}

Point weighted_mean(const PointSet& points) {
    if (points.total_weight() <= 0) throw Error("weighted_mean: empty or zero-weight input");
    Point mean(std::vector<double>(points.dimension(), 0.0));
    for (const auto& e : points.entries())
        for (int i = 0; i < points.dimension(); ++i)
            mean[i] += static_cast<double>(e.weight) * e.point[i];
    const double inv = 1.0 / static_cast<double>(points.total_weight());
    for (int i = 0; i < points.dimension(); ++i) mean[i] *= inv;
    return mean;
}

double scatter_around(const PointSet& points, const Point& z) {
    double s = 0.0;
    for (const auto& e : points.entries())
        s += static_cast<double>(e.weight) * squared_distance(e.point, z);
    return s;
}

PointSet expand(const PointSet& points) {
    PointSet out(points.dimension(), points.color_count());
    for (const auto& e : points.entries())
        for (std::int64_t i = 0; i < e.weight; ++i) out.add(e.point, e.color, 1);
    return out;
}

PointSet merge_duplicates(const PointSet& points) {
    std::map<std::pair<std::vector<double>, int>, std::int64_t> merged;
    for (const auto& e : points.entries()) merged[{e.point.coords, e.color}] += e.weight;
    PointSet out(points.dimension(), points.color_count());
    for (const auto& [key, w] : merged) out.add(Point(key.first), key.second, w);
    return out;
}

double spread(const PointSet& points) {
    std::vector<Point> locations;
    for (const auto& e : points.entries()) locations.push_back(e.point);
    std::sort(locations.begin(), locations.end());
    locations.erase(std::unique(locations.begin(), locations.end()), locations.end());
    if (locations.size() < 2) throw Error("spread: all points coincident");
    double dmin = std::numeric_limits<double>::infinity();
    double dmax = 0.0;
    for (std::size_t i = 0; i < locations.size(); ++i)
        for (std::size_t j = i + 1; j < locations.size(); ++j) {
            double d = distance(locations[i], locations[j]);
            dmin = std::min(dmin, d);
            dmax = std::max(dmax, d);
        }
    return dmax / dmin;
}

double assignment_cost(const PointSet& points, const CenterSet& centers,
                       const std::vector<FlowTriple>& flows, const MetricConfig& cfg) {
    std::vector<std::int64_t> assigned(points.size(), 0);
    double total = 0.0;
    for (const auto& f : flows) {
        if (f.entry < 0 || static_cast<std::size_t>(f.entry) >= points.size())
            throw Error("assignment_cost: entry id out of range");
        if (f.cluster < 0 || static_cast<std::size_t>(f.cluster) >= centers.size())
            throw Error("assignment_cost: center id out of range");
        if (f.mass <= 0) throw Error("assignment_cost: nonpositive mass");
        assigned[f.entry] += f.mass;
        total += static_cast<double>(f.mass) *
                 distance_pow(points[f.entry].point, centers[f.cluster], cfg.power);
    }
    for (std::size_t i = 0; i < points.size(); ++i)
        if (assigned[i] != points[i].weight) throw Error("assignment_cost: unassigned mass");
    return total;
}

}  // namespace ccoreset
