#pragma once

#include <optional>
#include <vector>

#include "ccoreset/constraints.hpp"
#include "ccoreset/geometry.hpp"

namespace ccoreset {

/// A constrained assignment of weighted colored mass to cluster rows. Row indices
/// follow the family convention: outlier rows (if any) come first, then the real
/// clusters in center order. total_cost excludes outlier legs; raw_cost includes
/// them when explicit outlier centers were provided.
struct Assignment {
    std::vector<FlowTriple> flows;  // cluster field = row index
    double total_cost = 0.0;
    double raw_cost = 0.0;
    ColorMatrix realized;
};

struct AssignOptions {
    std::int64_t enumeration_cap = ConstraintFamily::kDefaultEnumerationCap;
    int open_subset_max_k = 24;  // open-centers lower bounds enumerate 2^k cluster subsets
};

/// Optimal assignment realizing exactly the matrix K. Decomposes into one
/// transportation problem per color; flows are integral. If K has more rows than
/// there are centers, the leading extra rows are zero-cost virtual outlier rows.
Assignment assign_exact_matrix(const PointSet& points, const CenterSet& centers,
                               const ColorMatrix& K, const MetricConfig& cfg);

/// Minimum-cost assignment over every matrix the family admits. Size-style and
/// per-cell-cap families go through one min-cost flow; l-diversity enumerates row
/// profiles; explicit/cannot-link families enumerate matrices (lexicographically,
/// so ties return the lex-smallest realized matrix). Returns nullopt when the
/// family admits no matrix for this instance.
std::optional<Assignment> optimal_assignment(const PointSet& points, const CenterSet& centers,
                                             const ConstraintFamily& family,
                                             const MetricConfig& cfg,
                                             const AssignOptions& opts = {});

/// Constrained cost of a weighted summary: identical to running optimal_assignment
/// on the expanded set, but solved directly on the weighted entries.
std::optional<double> weighted_constrained_cost(const PointSet& summary, const CenterSet& centers,
                                                const ConstraintFamily& family,
                                                const MetricConfig& cfg,
                                                const AssignOptions& opts = {});

}  // namespace ccoreset
