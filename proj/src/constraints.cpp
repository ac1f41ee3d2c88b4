#include "ccoreset/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace ccoreset {

std::int64_t ColorMatrix::row_sum(int i) const {
    std::int64_t s = 0;
    for (int j = 0; j < cols; ++j) s += at(i, j);
    return s;
}

std::int64_t ColorMatrix::col_sum(int j) const {
    std::int64_t s = 0;
    for (int i = 0; i < rows; ++i) s += at(i, j);
    return s;
}

std::vector<std::int64_t> ColorMatrix::row_sums() const {
    std::vector<std::int64_t> s(rows, 0);
    for (int i = 0; i < rows; ++i) s[i] = row_sum(i);
    return s;
}

ColorMatrix realized_matrix(const PointSet& points, const std::vector<int>& labels, int clusters) {
    if (labels.size() != points.size()) throw Error("realized_matrix: label count mismatch");
    ColorMatrix K(clusters, points.color_count());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= clusters) throw Error("realized_matrix: label out of range");
        K.at(labels[i], points[i].color) += points[i].weight;
    }
    return K;
}

ConstraintFamily::ConstraintFamily(Kind kind, int cluster_count, int outlier_count,
                                   std::vector<std::int64_t> color_masses)
    : kind_(kind), cluster_count_(cluster_count), outlier_count_(outlier_count),
      color_masses_(std::move(color_masses)) {
    if (cluster_count_ < 1) throw Error("constraint family needs at least one cluster");
    if (color_masses_.empty()) throw Error("constraint family needs color masses");
    for (std::int64_t m : color_masses_)
        if (m < 0) throw Error("color masses must be nonnegative");
    total_mass_ = std::accumulate(color_masses_.begin(), color_masses_.end(), std::int64_t{0});
}

ConstraintFamily ConstraintFamily::unconstrained(int k, std::vector<std::int64_t> masses) {
    return ConstraintFamily(Kind::Unconstrained, k, 0, std::move(masses));
}

ConstraintFamily ConstraintFamily::lower_bounds(std::vector<std::int64_t> bounds,
                                                LowerBoundMode mode,
                                                std::vector<std::int64_t> masses) {
    ConstraintFamily f(Kind::LowerBounds, static_cast<int>(bounds.size()), 0, std::move(masses));
    for (std::int64_t b : bounds)
        if (b < 0) throw Error("lower bounds must be nonnegative");
    f.bounds_ = std::move(bounds);
    f.lb_mode_ = mode;
    return f;
}

ConstraintFamily ConstraintFamily::upper_bounds(std::vector<std::int64_t> bounds,
                                                std::vector<std::int64_t> masses) {
    ConstraintFamily f(Kind::UpperBounds, static_cast<int>(bounds.size()), 0, std::move(masses));
    for (std::int64_t b : bounds)
        if (b < 0) throw Error("upper bounds must be nonnegative");
    f.bounds_ = std::move(bounds);
    return f;
}

ConstraintFamily ConstraintFamily::outliers(int k, int z, std::vector<std::int64_t> masses) {
    if (z < 0) throw Error("outlier count must be nonnegative");
    return ConstraintFamily(Kind::Outliers, k + z, z, std::move(masses));
}

ConstraintFamily ConstraintFamily::chromatic(int k, std::vector<std::int64_t> masses) {
    return ConstraintFamily(Kind::Chromatic, k, 0, std::move(masses));
}

ConstraintFamily ConstraintFamily::l_diversity(int k, int l, std::vector<std::int64_t> masses) {
    if (l < 1) throw Error("l-diversity parameter must be >= 1");
    ConstraintFamily f(Kind::LDiversity, k, 0, std::move(masses));
    f.diversity_l_ = l;
    return f;
}

ConstraintFamily ConstraintFamily::per_color_caps(ColorMatrix caps,
                                                  std::vector<std::int64_t> masses) {
    ConstraintFamily f(Kind::PerColorCaps, caps.rows, 0, std::move(masses));
    if (caps.cols != f.color_count()) throw Error("per-color caps: column count mismatch");
    for (std::int64_t c : caps.data)
        if (c < 0) throw Error("per-color caps must be nonnegative");
    f.caps_ = std::move(caps);
    return f;
}

ConstraintFamily ConstraintFamily::must_link(int k, int constrained_colors,
                                             std::vector<std::int64_t> masses) {
    ConstraintFamily f(Kind::MustLink, k, 0, std::move(masses));
    if (constrained_colors < 0 || constrained_colors > f.color_count())
        throw Error("must-link: constrained color count out of range");
    f.constrained_colors_ = constrained_colors;
    return f;
}

ConstraintFamily ConstraintFamily::cannot_link(int k, std::vector<std::pair<int, int>> conflicts,
                                               std::vector<std::int64_t> masses) {
    ConstraintFamily f(Kind::CannotLink, k, 0, std::move(masses));
    for (auto& [a, b] : conflicts) {
        if (a < 0 || b < 0 || a >= f.color_count() || b >= f.color_count() || a == b)
            throw Error("cannot-link: bad conflict pair");
        if (a > b) std::swap(a, b);
    }
    std::sort(conflicts.begin(), conflicts.end());
    conflicts.erase(std::unique(conflicts.begin(), conflicts.end()), conflicts.end());
    f.conflicts_ = std::move(conflicts);
    return f;
}

ConstraintFamily ConstraintFamily::explicit_family(std::vector<ColorMatrix> matrices,
                                                   std::vector<std::int64_t> masses) {
    if (matrices.empty()) throw Error("explicit family must be nonempty");
    ConstraintFamily f(Kind::Explicit, matrices.front().rows, 0, std::move(masses));
    for (const auto& K : matrices) {
        if (K.rows != f.cluster_count() || K.cols != f.color_count())
            throw Error("explicit family: matrix arity mismatch");
        for (std::int64_t v : K.data)
            if (v < 0) throw Error("explicit family: negative entry");
        for (int j = 0; j < K.cols; ++j)
            if (K.col_sum(j) != f.color_masses()[j])
                throw Error("explicit family: column sums must equal per-color masses");
    }
    std::sort(matrices.begin(), matrices.end());
    matrices.erase(std::unique(matrices.begin(), matrices.end()), matrices.end());
    f.explicit_ = std::move(matrices);
    return f;
}

bool ConstraintFamily::kind_admits(const ColorMatrix& K) const {
    switch (kind_) {
        case Kind::Unconstrained:
            return true;
        case Kind::LowerBounds: {
            for (int i = 0; i < cluster_count_; ++i) {
                std::int64_t r = K.row_sum(i);
                if (lb_mode_ == LowerBoundMode::Strict) {
                    if (r < bounds_[i]) return false;
                } else {
                    if (r != 0 && r < bounds_[i]) return false;
                }
            }
            return true;
        }
        case Kind::UpperBounds: {
            for (int i = 0; i < cluster_count_; ++i)
                if (K.row_sum(i) > bounds_[i]) return false;
            return true;
        }
        case Kind::Outliers: {
            for (int i = 0; i < outlier_count_; ++i)
                if (K.row_sum(i) != 1) return false;
            return true;
        }
        case Kind::Chromatic: {
            for (std::int64_t v : K.data)
                if (v > 1) return false;
            return true;
        }
        case Kind::LDiversity: {
            for (int i = 0; i < cluster_count_; ++i) {
                std::int64_t r = K.row_sum(i);
                if (r == 0) continue;  // empty clusters admitted
                for (int j = 0; j < K.cols; ++j)
                    if (static_cast<std::int64_t>(diversity_l_) * K.at(i, j) > r) return false;
            }
            return true;
        }
        case Kind::PerColorCaps: {
            for (int i = 0; i < cluster_count_; ++i)
                for (int j = 0; j < K.cols; ++j)
                    if (K.at(i, j) > caps_.at(i, j)) return false;
            return true;
        }
        case Kind::MustLink: {
            for (int j = 0; j < constrained_colors_; ++j) {
                int nonzero = 0;
                for (int i = 0; i < cluster_count_; ++i)
                    if (K.at(i, j) > 0) ++nonzero;
                if (nonzero > 1) return false;
            }
            return true;
        }
        case Kind::CannotLink: {
            for (const auto& [a, b] : conflicts_)
                for (int i = 0; i < cluster_count_; ++i)
                    if (K.at(i, a) > 0 && K.at(i, b) > 0) return false;
            return true;
        }
        case Kind::Explicit:
            return std::binary_search(explicit_.begin(), explicit_.end(), K);
    }
    return false;
}

bool ConstraintFamily::admits(const ColorMatrix& K) const {
    if (K.rows != cluster_count_ || K.cols != color_count()) return false;
    for (std::int64_t v : K.data)
        if (v < 0) return false;
    for (int j = 0; j < K.cols; ++j)
        if (K.col_sum(j) != color_masses_[j]) return false;
    return kind_admits(K);
}

bool ConstraintFamily::provably_infeasible() const {
    switch (kind_) {
        case Kind::LowerBounds: {
            if (lb_mode_ == LowerBoundMode::Strict) {
                std::int64_t need = std::accumulate(bounds_.begin(), bounds_.end(), std::int64_t{0});
                return need > total_mass_;
            }
            if (total_mass_ == 0) return false;
            std::int64_t least = *std::min_element(bounds_.begin(), bounds_.end());
            return least > total_mass_;
        }
        case Kind::UpperBounds: {
            std::int64_t room = std::accumulate(bounds_.begin(), bounds_.end(), std::int64_t{0});
            return room < total_mass_;
        }
        case Kind::Outliers:
            return outlier_count_ > total_mass_;
        case Kind::Chromatic: {
            for (std::int64_t m : color_masses_)
                if (m > cluster_count_) return true;
            return false;
        }
        case Kind::LDiversity: {
            for (std::int64_t m : color_masses_)
                if (static_cast<std::int64_t>(diversity_l_) * m > total_mass_) return true;
            return false;
        }
        case Kind::PerColorCaps: {
            for (int j = 0; j < color_count(); ++j) {
                std::int64_t room = 0;
                for (int i = 0; i < cluster_count_; ++i) room += caps_.at(i, j);
                if (room < color_masses_[j]) return true;
            }
            return false;
        }
        default:
            return false;
    }
}

double ConstraintFamily::enumeration_estimate() const {
    if (kind_ == Kind::Explicit) return static_cast<double>(explicit_.size());
    // compositions of each color mass into cluster_count parts, multiplied
    double est = 1.0;
    for (std::int64_t m : color_masses_) {
        double c = 1.0;
        for (int i = 1; i < cluster_count_; ++i)
            c *= static_cast<double>(m + i) / static_cast<double>(i);
        est *= c;
        if (est > 1e18) return est;
    }
    return est;
}

std::vector<ColorMatrix> ConstraintFamily::enumerate(std::int64_t cap) const {
    if (kind_ == Kind::Explicit) return explicit_;
    if (enumeration_estimate() > static_cast<double>(cap))
        throw CapExceeded("constraint enumeration would exceed the configured cap");

    const int R = cluster_count_;
    const int L = color_count();

    // per-cell caps let chromatic/per-color-cap families prune during generation
    auto cell_cap = [&](int i, int j) -> std::int64_t {
        if (kind_ == Kind::Chromatic) return 1;
        if (kind_ == Kind::PerColorCaps) return caps_.at(i, j);
        (void)i;
        return color_masses_[j];
    };

    std::vector<ColorMatrix> out;
    ColorMatrix K(R, L);
    // column-by-column DFS; within a column, row-by-row composition of the mass
    std::function<void(int)> fill_color = [&](int j) {
        if (j == L) {
            if (kind_admits(K)) out.push_back(K);
            return;
        }
        std::function<void(int, std::int64_t)> fill_row = [&](int i, std::int64_t remaining) {
            if (i == R - 1) {
                if (remaining <= cell_cap(i, j)) {
                    K.at(i, j) = remaining;
                    fill_color(j + 1);
                    K.at(i, j) = 0;
                }
                return;
            }
            std::int64_t top = std::min(remaining, cell_cap(i, j));
            for (std::int64_t v = 0; v <= top; ++v) {
                K.at(i, j) = v;
                fill_row(i + 1, remaining - v);
            }
            K.at(i, j) = 0;
        };
        fill_row(0, color_masses_[j]);
    };
    fill_color(0);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

void check_link_ids(const std::vector<std::pair<int, int>>& links, std::size_t n) {
    for (const auto& [a, b] : links)
        if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n ||
            a == b)
            throw Error("link references an invalid point id");
}

PointSet recolor(const PointSet& points, const std::vector<int>& colors, int color_count) {
    PointSet out(points.dimension(), color_count);
    for (std::size_t i = 0; i < points.size(); ++i)
        out.add(points[i].point, colors[i], points[i].weight);
    return out;
}

}  // namespace

LinkEncoding encode_must_link(const std::vector<std::pair<int, int>>& links, const PointSet& points,
                              int k) {
    check_link_ids(links, points.size());
    UnionFind uf(points.size());
    for (const auto& [a, b] : links) uf.unite(a, b);

    // non-singleton components, in order of their smallest member, get colors 0..c-1
    std::vector<int> component_size(points.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) ++component_size[uf.find(static_cast<int>(i))];
    std::vector<int> component_color(points.size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        int root = uf.find(static_cast<int>(i));
        if (component_size[root] >= 2 && component_color[root] < 0) component_color[root] = next++;
    }
    const int constrained = next;
    bool any_free = false;
    std::vector<int> colors(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        int root = uf.find(static_cast<int>(i));
        if (component_color[root] >= 0) {
            colors[i] = component_color[root];
        } else {
            colors[i] = constrained;  // shared free color
            any_free = true;
        }
    }
    int color_count = constrained + (any_free ? 1 : 0);
    if (color_count == 0) color_count = 1;

    PointSet recolored = recolor(points, colors, color_count);
    auto family = ConstraintFamily::must_link(k, constrained, recolored.color_weights());
    return LinkEncoding{std::move(recolored), std::move(family)};
}

LinkEncoding encode_cannot_link(const std::vector<std::pair<int, int>>& links,
                                const PointSet& points, int k) {
    check_link_ids(links, points.size());
    std::vector<std::vector<int>> adj(points.size());
    for (const auto& [a, b] : links) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }

    // greedy coloring in entry order over linked points; unlinked points share one color
    std::vector<int> colors(points.size(), -1);
    int palette = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (adj[i].empty()) continue;
        std::vector<bool> used(palette + 1, false);
        for (int nb : adj[i])
            if (colors[nb] >= 0) used[colors[nb]] = true;
        int c = 0;
        while (c < palette && used[c]) ++c;
        colors[i] = c;
        palette = std::max(palette, c + 1);
    }
    bool any_free = false;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (colors[i] < 0) {
            colors[i] = palette;
            any_free = true;
        }
    int color_count = palette + (any_free ? 1 : 0);
    if (color_count == 0) color_count = 1;

    std::vector<std::pair<int, int>> conflicts;
    for (const auto& [a, b] : links) conflicts.emplace_back(colors[a], colors[b]);

    PointSet recolored = recolor(points, colors, color_count);
    auto family = ConstraintFamily::cannot_link(k, std::move(conflicts), recolored.color_weights());
    return LinkEncoding{std::move(recolored), std::move(family)};
}

}  // namespace ccoreset
