#pragma once

#include <cstdint>
#include <vector>

#include "ccoreset/errors.hpp"

namespace ccoreset {

/// A location in R^d. Coordinates are plain doubles; d is fixed per problem instance.
struct Point {
    std::vector<double> coords;

    Point() = default;
    Point(std::initializer_list<double> c) : coords(c) {}
    explicit Point(std::vector<double> c) : coords(std::move(c)) {}

    int dim() const { return static_cast<int>(coords.size()); }
    double operator[](std::size_t i) const { return coords[i]; }
    double& operator[](std::size_t i) { return coords[i]; }

    bool operator==(const Point& o) const { return coords == o.coords; }
    bool operator<(const Point& o) const { return coords < o.coords; }
};

using CenterSet = std::vector<Point>;

/// Cost power and dimension. power = 1 is Euclidean k-median, power = 2 is k-means.
/// The cost functions accept any small positive power so that the movement bound
/// can be checked for powers beyond the two named problems.
struct MetricConfig {
    int power = 2;
    int dimension = 0;

    MetricConfig() = default;
    MetricConfig(int m, int d) : power(m), dimension(d) {}
};

struct WeightedColoredPoint {
    Point point;
    std::int64_t weight = 1;
    int color = 0;
};

/// A weighted colored multiset of points. Weights are positive integers; colors
/// are 0-based ids below color_count(). Uncolored data uses a single color 0.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(int dimension, int color_count = 1);

    void add(Point p, int color = 0, std::int64_t weight = 1);
    void add(const WeightedColoredPoint& e) { add(e.point, e.color, e.weight); }

    const std::vector<WeightedColoredPoint>& entries() const { return entries_; }
    const WeightedColoredPoint& operator[](std::size_t i) const { return entries_[i]; }

    int dimension() const { return dimension_; }
    int color_count() const { return color_count_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    std::int64_t total_weight() const { return total_weight_; }
    const std::vector<std::int64_t>& color_weights() const { return color_weights_; }

private:
    std::vector<WeightedColoredPoint> entries_;
    int dimension_ = 0;
    int color_count_ = 1;
    std::int64_t total_weight_ = 0;
    std::vector<std::int64_t> color_weights_;
};

double squared_distance(const Point& a, const Point& b);
double distance(const Point& a, const Point& b);

/// dist(a, b)^m for small integer m >= 1.
double distance_pow(const Point& a, const Point& b, int power);

/// Minimum over centers of dist(p, c)^m. C must be nonempty with matching dimension.
double nearest_center_cost(const Point& p, const CenterSet& centers, int power);
std::size_t nearest_center_index(const Point& p, const CenterSet& centers, int power);

/// Sum over entries of weight * min_c dist^m. Zero iff every entry sits on a center.
double clustering_cost(const PointSet& points, const CenterSet& centers, const MetricConfig& cfg);

/// Weight-averaged coordinate vector. Total weight must be positive.
Point weighted_mean(const PointSet& points);

/// Sum of w(s) * ||s - z||^2, the 1-means cost around z.
double scatter_around(const PointSet& points, const Point& z);

/// Replace each weight-w entry by w unit-weight copies. Costs are preserved exactly.
PointSet expand(const PointSet& points);

/// Merge entries that share (location, color) exactly, summing weights.
PointSet merge_duplicates(const PointSet& points);

/// Max pairwise distance over min pairwise distance across distinct locations.
/// Throws Error when fewer than two distinct locations exist.
double spread(const PointSet& points);

/// One (entry, cluster) flow leg of an assignment; mass is a positive integer.
struct FlowTriple {
    int entry = 0;
    int cluster = 0;
    std::int64_t mass = 0;
};

/// Sum of mass * dist(entry, center)^m over the given legs, where cluster indexes
/// into centers. Every entry's weight must be fully assigned.
double assignment_cost(const PointSet& points, const CenterSet& centers,
                       const std::vector<FlowTriple>& flows, const MetricConfig& cfg);

}  // namespace ccoreset
