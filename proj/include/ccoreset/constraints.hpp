#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ccoreset/geometry.hpp"

namespace ccoreset {

/// A clusters x colors matrix of nonnegative integers. Entry (i, j) is the number
/// of color-j points placed in cluster i.
struct ColorMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::int64_t> data;  // row-major

    ColorMatrix() = default;
    ColorMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0) {}

    std::int64_t& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    std::int64_t at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

    std::int64_t row_sum(int i) const;
    std::int64_t col_sum(int j) const;
    std::vector<std::int64_t> row_sums() const;

    auto operator<=>(const ColorMatrix& o) const = default;
};

/// Cluster-size/color-count matrix built from per-entry cluster labels.
ColorMatrix realized_matrix(const PointSet& points, const std::vector<int>& labels, int clusters);

enum class LowerBoundMode { Strict, OpenCenters };

/// A family of admissible cluster-composition matrices. Symbolic kinds never
/// materialize their matrix sets unless enumerate() is called under a cap.
class ConstraintFamily {
public:
    enum class Kind {
        Unconstrained,
        LowerBounds,
        UpperBounds,
        Outliers,
        Chromatic,
        LDiversity,
        PerColorCaps,
        MustLink,
        CannotLink,
        Explicit,
    };

    static ConstraintFamily unconstrained(int k, std::vector<std::int64_t> color_masses);
    /// Strict mode admits exactly row sums in [bounds_i, n]; open-centers mode also
    /// admits empty clusters (row sum 0 or >= bounds_i).
    static ConstraintFamily lower_bounds(std::vector<std::int64_t> bounds, LowerBoundMode mode,
                                         std::vector<std::int64_t> color_masses);
    static ConstraintFamily upper_bounds(std::vector<std::int64_t> bounds,
                                         std::vector<std::int64_t> color_masses);
    /// k + z clusters; the first z rows are outlier singletons of size exactly 1.
    static ConstraintFamily outliers(int k, int z, std::vector<std::int64_t> color_masses);
    static ConstraintFamily chromatic(int k, std::vector<std::int64_t> color_masses);
    static ConstraintFamily l_diversity(int k, int l, std::vector<std::int64_t> color_masses);
    static ConstraintFamily per_color_caps(ColorMatrix caps, std::vector<std::int64_t> color_masses);
    /// Columns below constrained_colors must each have at most one nonzero entry.
    static ConstraintFamily must_link(int k, int constrained_colors,
                                      std::vector<std::int64_t> color_masses);
    /// For every conflicting color pair, no row may hold both colors.
    static ConstraintFamily cannot_link(int k, std::vector<std::pair<int, int>> conflicts,
                                        std::vector<std::int64_t> color_masses);
    static ConstraintFamily explicit_family(std::vector<ColorMatrix> matrices,
                                            std::vector<std::int64_t> color_masses);

    Kind kind() const { return kind_; }
    /// Number of rows of admitted matrices (k + z for outlier families).
    int cluster_count() const { return cluster_count_; }
    /// Number of real centers a solver must place (excludes outlier rows).
    int center_count() const { return cluster_count_ - outlier_count_; }
    int outlier_count() const { return outlier_count_; }
    int color_count() const { return static_cast<int>(color_masses_.size()); }
    std::int64_t total_mass() const { return total_mass_; }
    const std::vector<std::int64_t>& color_masses() const { return color_masses_; }

    /// Exact membership test (arity, column sums, kind predicate).
    bool admits(const ColorMatrix& K) const;

    /// Structural emptiness checks that need no enumeration.
    bool provably_infeasible() const;

    /// All admitted matrices, each exactly once, sorted. Throws CapExceeded when the
    /// search-space estimate exceeds the cap.
    std::vector<ColorMatrix> enumerate(std::int64_t cap = kDefaultEnumerationCap) const;

    /// Estimated number of matrices the enumeration has to visit.
    double enumeration_estimate() const;

    static constexpr std::int64_t kDefaultEnumerationCap = 2'000'000;

    // dispatch payload accessors
    const std::vector<std::int64_t>& bounds() const { return bounds_; }
    LowerBoundMode lower_bound_mode() const { return lb_mode_; }
    int diversity_l() const { return diversity_l_; }
    const ColorMatrix& caps() const { return caps_; }
    int constrained_colors() const { return constrained_colors_; }
    const std::vector<std::pair<int, int>>& conflicts() const { return conflicts_; }
    const std::vector<ColorMatrix>& explicit_matrices() const { return explicit_; }

private:
    ConstraintFamily(Kind kind, int cluster_count, int outlier_count,
                     std::vector<std::int64_t> color_masses);
    bool kind_admits(const ColorMatrix& K) const;

    Kind kind_ = Kind::Unconstrained;
    int cluster_count_ = 0;
    int outlier_count_ = 0;
    std::vector<std::int64_t> color_masses_;
    std::int64_t total_mass_ = 0;

    std::vector<std::int64_t> bounds_;
    LowerBoundMode lb_mode_ = LowerBoundMode::Strict;
    int diversity_l_ = 1;
    ColorMatrix caps_;
    int constrained_colors_ = 0;
    std::vector<std::pair<int, int>> conflicts_;
    std::vector<ColorMatrix> explicit_;
};

/// Result of a link encoder: the input with colors reassigned plus the family
/// expressing the links over those colors.
struct LinkEncoding {
    PointSet recolored;
    ConstraintFamily family;
};

/// Connected components of the link graph become one color each; remaining points
/// share a final color. Links are pairs of entry indices into points.
LinkEncoding encode_must_link(const std::vector<std::pair<int, int>>& links, const PointSet& points,
                              int k);

/// Linked points get distinct colors via greedy coloring of the conflict graph;
/// unlinked points share one color. Sound but possibly coarser than optimal.
LinkEncoding encode_cannot_link(const std::vector<std::pair<int, int>>& links,
                                const PointSet& points, int k);

}  // namespace ccoreset
