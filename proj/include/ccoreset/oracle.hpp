#pragma once

#include <optional>
#include <vector>

#include "ccoreset/constraints.hpp"
#include "ccoreset/geometry.hpp"

namespace ccoreset {

/// Hard caps for the brute-force oracle. Instances beyond the caps are refused
/// rather than silently approximated.
struct OracleBudget {
    int max_points = 12;              // expanded size for unconstrained enumeration
    int max_points_constrained = 10;  // expanded size for labeled enumeration
    int max_k = 4;
    std::int64_t max_candidates = 20'000'000;
};

/// Weighted Euclidean geometric median (Weiszfeld with the anchor-point handling
/// for iterates that land on data points), converged to ~1e-10 of the data scale.
Point geometric_median(const PointSet& points);

struct UnconstrainedOpt {
    double value = 0.0;
    CenterSet centers;                // optimal center per nonempty part
    std::vector<int> expanded_labels; // over expand(P), entry order
};

/// Exact unconstrained k-clustering optimum by enumerating set partitions of the
/// expanded input into at most k parts. power must be 1 or 2.
UnconstrainedOpt brute_force_unconstrained_opt(const PointSet& points, int k,
                                               const MetricConfig& cfg,
                                               const OracleBudget& budget = {});

struct ConstrainedOpt {
    bool feasible = false;
    double value = 0.0;      // outlier rows excluded
    double raw_value = 0.0;  // all rows, outlier parts at their own optimal centers
    CenterSet centers;       // real rows only
    std::vector<int> expanded_labels;
    ColorMatrix realized;
};

/// Exact constrained optimum by enumerating labeled partitions of the expanded
/// input into cluster_count parts, keeping those the family admits. Centers are
/// chosen optimally per part (centroid for power 2, geometric median for power 1).
ConstrainedOpt brute_force_constrained_opt(const PointSet& points, const ConstraintFamily& family,
                                           const MetricConfig& cfg,
                                           const OracleBudget& budget = {});

/// Minimum admitted assignment cost at fixed centers, by labeled enumeration.
/// Independent of the flow solver; used to certify it. For outlier families pass
/// either center_count() or cluster_count() centers; outlier legs cost zero when
/// no explicit outlier centers are given.
std::optional<double> constrained_cost_at_centers(const PointSet& points, const CenterSet& centers,
                                                  const ConstraintFamily& family,
                                                  const MetricConfig& cfg,
                                                  const OracleBudget& budget = {});

}  // namespace ccoreset
