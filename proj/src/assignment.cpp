#include "ccoreset/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "ccoreset/min_cost_flow.hpp"

namespace ccoreset {

namespace {

// Row geometry shared by every dispatch path. Rows 0..z-1 are outlier rows; they
// cost nothing in the objective. When the caller passes cluster_count centers the
// outlier rows have explicit centers, which only matters for raw_cost.
struct RowLayout {
    int rows = 0;
    int z = 0;
    bool explicit_outlier_centers = false;
    const CenterSet* centers = nullptr;
    int power = 2;

    int center_of(int row) const {
        if (row < z && !explicit_outlier_centers) return -1;
        return explicit_outlier_centers ? row : row - z;
    }
    double objective_leg(const Point& p, int row) const {
        if (row < z) return 0.0;
        return distance_pow(p, (*centers)[center_of(row)], power);
    }
    double raw_leg(const Point& p, int row) const {
        int c = center_of(row);
        if (c < 0) return 0.0;
        return distance_pow(p, (*centers)[c], power);
    }
};

RowLayout make_layout(const CenterSet& centers, int rows, int z, int power) {
    RowLayout L;
    L.rows = rows;
    L.z = z;
    L.centers = &centers;
    L.power = power;
    if (static_cast<int>(centers.size()) == rows) {
        L.explicit_outlier_centers = z > 0;
    } else if (static_cast<int>(centers.size()) != rows - z) {
        throw Error("assignment: center count matches neither k nor k+z");
    }
    return L;
}

Assignment finish(const PointSet& points, const RowLayout& L, std::vector<FlowTriple> flows) {
    std::sort(flows.begin(), flows.end(), [](const FlowTriple& a, const FlowTriple& b) {
        return std::tie(a.entry, a.cluster) < std::tie(b.entry, b.cluster);
    });
    Assignment out;
    out.realized = ColorMatrix(L.rows, points.color_count());
    for (const auto& f : flows) {
        const auto& e = points[f.entry];
        out.total_cost += static_cast<double>(f.mass) * L.objective_leg(e.point, f.cluster);
        out.raw_cost += static_cast<double>(f.mass) * L.raw_leg(e.point, f.cluster);
        out.realized.at(f.cluster, e.color) += f.mass;
    }
    out.flows = std::move(flows);
    return out;
}

// One transportation problem: supplies are the selected entries' weights, demands
// are per-row quotas for a single color.
std::optional<std::vector<FlowTriple>> color_transport(const PointSet& points,
                                                       const std::vector<int>& entry_ids,
                                                       const std::vector<std::int64_t>& demand,
                                                       const RowLayout& L) {
    const int E = static_cast<int>(entry_ids.size());
    const int R = L.rows;
    MinCostFlow mcf(E + R);
    for (int i = 0; i < E; ++i) mcf.add_supply(i, points[entry_ids[i]].weight);
    for (int r = 0; r < R; ++r) mcf.add_supply(E + r, -demand[r]);
    std::vector<std::vector<int>> edge_ids(E, std::vector<int>(R, -1));
    for (int i = 0; i < E; ++i) {
        const auto& e = points[entry_ids[i]];
        for (int r = 0; r < R; ++r) {
            if (demand[r] == 0) continue;
            edge_ids[i][r] = mcf.add_edge(i, E + r, e.weight, L.objective_leg(e.point, r));
        }
    }
    if (!mcf.solve().feasible) return std::nullopt;
    std::vector<FlowTriple> flows;
    for (int i = 0; i < E; ++i)
        for (int r = 0; r < R; ++r)
            if (edge_ids[i][r] >= 0) {
                std::int64_t f = mcf.flow_on(edge_ids[i][r]);
                if (f > 0) flows.push_back({entry_ids[i], r, f});
            }
    return flows;
}

struct RowWindow {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

// Single coupled flow: entries -> (row, color) cap nodes -> rows -> sink, with row
// totals confined to [lo, hi] via the excess-node transformation (the mandatory lo
// units are demanded at the row node itself, the slack runs to the sink).
std::optional<std::vector<FlowTriple>> windowed_flow(const PointSet& points, const RowLayout& L,
                                                     const std::vector<RowWindow>& window,
                                                     const ColorMatrix* cell_caps) {
    const int E = static_cast<int>(points.size());
    const int R = L.rows;
    const int C = points.color_count();
    const std::int64_t n = points.total_weight();

    std::int64_t mandatory = 0;
    for (const auto& w : window) {
        if (w.lo > w.hi) return std::nullopt;
        mandatory += w.lo;
    }
    if (mandatory > n) return std::nullopt;

    const bool use_cells = cell_caps != nullptr;
    MinCostFlow mcf(E + R + (use_cells ? R * C : 0) + 1);
    const int row_base = E;
    const int cell_base = E + R;
    const int sink = static_cast<int>(E + R + (use_cells ? R * C : 0));

    for (int i = 0; i < E; ++i) mcf.add_supply(i, points[i].weight);
    for (int r = 0; r < R; ++r) mcf.add_supply(row_base + r, -window[r].lo);
    mcf.add_supply(sink, -(n - mandatory));

    std::vector<std::vector<int>> edge_ids(E, std::vector<int>(R, -1));
    for (int i = 0; i < E; ++i) {
        const auto& e = points[i];
        for (int r = 0; r < R; ++r) {
            if (window[r].hi == 0) continue;
            double cost = L.objective_leg(e.point, r);
            if (use_cells) {
                // the per-(row,color) cap arc is shared; entry arcs feed the cell node
                edge_ids[i][r] = mcf.add_edge(i, cell_base + r * C + e.color, e.weight, cost);
            } else {
                edge_ids[i][r] = mcf.add_edge(i, row_base + r, e.weight, cost);
            }
        }
    }
    if (use_cells)
        for (int r = 0; r < R; ++r)
            for (int j = 0; j < C; ++j)
                mcf.add_edge(cell_base + r * C + j, row_base + r, cell_caps->at(r, j), 0.0);
    for (int r = 0; r < R; ++r) mcf.add_edge(row_base + r, sink, window[r].hi - window[r].lo, 0.0);

    if (!mcf.solve().feasible) return std::nullopt;
    std::vector<FlowTriple> flows;
    for (int i = 0; i < E; ++i)
        for (int r = 0; r < R; ++r)
            if (edge_ids[i][r] >= 0) {
                std::int64_t f = mcf.flow_on(edge_ids[i][r]);
                if (f > 0) flows.push_back({i, r, f});
            }
    return flows;
}

// Outlier rows demand exactly one unit each; collapse them to a shared window and
// split the collected flow into unit rows afterwards, in entry order.
std::vector<FlowTriple> split_outlier_rows(std::vector<FlowTriple> flows, int z) {
    if (z <= 1) return flows;
    std::vector<FlowTriple> out;
    int next_row = 0;
    for (auto& f : flows) {
        if (f.cluster != 0) {
            out.push_back(f);
            continue;
        }
        for (std::int64_t u = 0; u < f.mass; ++u) out.push_back({f.entry, next_row++, 1});
    }
    return out;
}

std::optional<Assignment> solve_windowed(const PointSet& points, const RowLayout& L,
                                         std::vector<RowWindow> window,
                                         const ColorMatrix* cell_caps) {
    auto flows = windowed_flow(points, L, window, cell_caps);
    if (!flows) return std::nullopt;
    return finish(points, L, std::move(*flows));
}

std::optional<Assignment> nearest_center_assignment(const PointSet& points, const RowLayout& L) {
    std::vector<FlowTriple> flows;
    for (int i = 0; i < static_cast<int>(points.size()); ++i) {
        int best = L.z;
        double bestd = std::numeric_limits<double>::infinity();
        for (int r = L.z; r < L.rows; ++r) {
            double d = L.objective_leg(points[i].point, r);
            if (d < bestd) {
                bestd = d;
                best = r;
            }
        }
        flows.push_back({i, best, points[i].weight});
    }
    return finish(points, L, std::move(flows));
}

}  // namespace

Assignment assign_exact_matrix(const PointSet& points, const CenterSet& centers,
                               const ColorMatrix& K, const MetricConfig& cfg) {
    if (points.empty()) throw Error("assign_exact_matrix: empty input");
    if (K.cols != points.color_count()) throw Error("assign_exact_matrix: color count mismatch");
    for (int j = 0; j < K.cols; ++j)
        if (K.col_sum(j) != points.color_weights()[j])
            throw Error("assign_exact_matrix: column sums must match per-color masses");
    const int z = K.rows - static_cast<int>(centers.size());
    RowLayout L = make_layout(centers, K.rows, std::max(z, 0), cfg.power);

    std::vector<FlowTriple> all_flows;
    for (int j = 0; j < K.cols; ++j) {
        std::vector<int> ids;
        for (int i = 0; i < static_cast<int>(points.size()); ++i)
            if (points[i].color == j) ids.push_back(i);
        std::vector<std::int64_t> demand(K.rows);
        for (int r = 0; r < K.rows; ++r) demand[r] = K.at(r, j);
        auto flows = color_transport(points, ids, demand, L);
        if (!flows) throw Error("assign_exact_matrix: transportation infeasible (internal)");
        all_flows.insert(all_flows.end(), flows->begin(), flows->end());
    }
    Assignment out = finish(points, L, std::move(all_flows));
    if (!(out.realized == K)) throw Error("assign_exact_matrix: realized matrix mismatch (internal)");
    return out;
}

std::optional<Assignment> optimal_assignment(const PointSet& points, const CenterSet& centers,
                                             const ConstraintFamily& family,
                                             const MetricConfig& cfg, const AssignOptions& opts) {
    if (points.empty()) throw Error("optimal_assignment: empty input");
    if (family.color_count() != points.color_count() ||
        family.color_masses() != points.color_weights())
        throw Error("optimal_assignment: family arity does not match the instance");
    const int R = family.cluster_count();
    const int z = family.outlier_count();
    RowLayout L = make_layout(centers, R, z, cfg.power);
    const std::int64_t n = points.total_weight();
    if (family.provably_infeasible()) return std::nullopt;

    using Kind = ConstraintFamily::Kind;
    switch (family.kind()) {
        case Kind::Unconstrained:
            return nearest_center_assignment(points, L);

        case Kind::LowerBounds: {
            if (family.lower_bound_mode() == LowerBoundMode::Strict) {
                std::vector<RowWindow> w(R);
                for (int r = 0; r < R; ++r) w[r] = {family.bounds()[r], n};
                return solve_windowed(points, L, std::move(w), nullptr);
            }
            // open-centers mode: a cluster is either empty or holds its bound; the
            // disjunction is resolved by trying every open subset
            if (R > opts.open_subset_max_k)
                throw CapExceeded("open-centers lower bounds: too many clusters to enumerate");
            std::optional<Assignment> best;
            for (std::uint64_t mask = 1; mask < (1ULL << R); ++mask) {
                std::int64_t need = 0;
                for (int r = 0; r < R; ++r)
                    if (mask >> r & 1) need += family.bounds()[r];
                if (need > n) continue;
                std::vector<RowWindow> w(R);
                for (int r = 0; r < R; ++r)
                    w[r] = (mask >> r & 1) ? RowWindow{family.bounds()[r], n} : RowWindow{0, 0};
                auto cand = solve_windowed(points, L, std::move(w), nullptr);
                if (cand && (!best || cand->total_cost < best->total_cost)) best = std::move(cand);
            }
            return best;
        }

        case Kind::UpperBounds: {
            std::vector<RowWindow> w(R);
            for (int r = 0; r < R; ++r) w[r] = {0, family.bounds()[r]};
            return solve_windowed(points, L, std::move(w), nullptr);
        }

        case Kind::Outliers: {
            // one merged outlier row with total demand z, split into units afterwards
            CenterSet real_centers(centers.begin() + (L.explicit_outlier_centers ? z : 0),
                                   centers.end());
            RowLayout merged = make_layout(real_centers, 1 + (R - z), 1, cfg.power);
            std::vector<RowWindow> w;
            w.push_back({z, z});
            for (int r = 0; r < R - z; ++r) w.push_back({0, n});
            auto flows = windowed_flow(points, merged, w, nullptr);
            if (!flows) return std::nullopt;
            // re-index real rows from merged layout (1..) to family layout (z..)
            std::vector<FlowTriple> shifted;
            for (auto& f : *flows)
                shifted.push_back({f.entry, f.cluster == 0 ? 0 : f.cluster - 1 + z, f.mass});
            return finish(points, L, split_outlier_rows(std::move(shifted), z));
        }

        case Kind::Chromatic: {
            ColorMatrix caps(R, family.color_count());
            for (auto& v : caps.data) v = 1;
            std::vector<RowWindow> w(R, RowWindow{0, n});
            return solve_windowed(points, L, std::move(w), &caps);
        }

        case Kind::PerColorCaps: {
            std::vector<RowWindow> w(R, RowWindow{0, n});
            return solve_windowed(points, L, std::move(w), &family.caps());
        }

        case Kind::MustLink: {
            // a constrained color moves as one block; pick its cheapest cluster
            std::vector<FlowTriple> flows;
            for (int j = 0; j < family.constrained_colors(); ++j) {
                double bestc = std::numeric_limits<double>::infinity();
                int bestr = z;
                for (int r = z; r < R; ++r) {
                    double c = 0.0;
                    for (int i = 0; i < static_cast<int>(points.size()); ++i)
                        if (points[i].color == j)
                            c += static_cast<double>(points[i].weight) *
                                 L.objective_leg(points[i].point, r);
                    if (c < bestc) {
                        bestc = c;
                        bestr = r;
                    }
                }
                for (int i = 0; i < static_cast<int>(points.size()); ++i)
                    if (points[i].color == j) flows.push_back({i, bestr, points[i].weight});
            }
            for (int i = 0; i < static_cast<int>(points.size()); ++i) {
                if (points[i].color < family.constrained_colors()) continue;
                int best = z;
                double bestd = std::numeric_limits<double>::infinity();
                for (int r = z; r < R; ++r) {
                    double d = L.objective_leg(points[i].point, r);
                    if (d < bestd) {
                        bestd = d;
                        best = r;
                    }
                }
                flows.push_back({i, best, points[i].weight});
            }
            return finish(points, L, std::move(flows));
        }

        case Kind::LDiversity: {
            // fixing row totals makes the ratio bound a per-cell cap; enumerate the
            // row profiles (compositions of n) and solve a capped flow for each
            const int l = family.diversity_l();
            double profiles = 1.0;
            for (int i = 1; i < R; ++i) profiles *= static_cast<double>(n + i) / i;
            if (profiles > static_cast<double>(opts.enumeration_cap))
                throw CapExceeded("l-diversity: row-profile enumeration exceeds the cap");

            std::optional<Assignment> best;
            std::vector<std::int64_t> profile(R, 0);
            std::function<void(int, std::int64_t)> rec = [&](int r, std::int64_t remaining) {
                if (r == R - 1) {
                    profile[r] = remaining;
                    // every row must be coverable by its caps
                    bool ok = true;
                    for (int i = 0; i < R && ok; ++i)
                        ok = static_cast<std::int64_t>(family.color_count()) * (profile[i] / l) >=
                             profile[i];
                    if (ok) {
                        ColorMatrix caps(R, family.color_count());
                        for (int i = 0; i < R; ++i)
                            for (int j = 0; j < family.color_count(); ++j)
                                caps.at(i, j) = profile[i] / l;
                        std::vector<RowWindow> w(R);
                        for (int i = 0; i < R; ++i) w[i] = {profile[i], profile[i]};
                        auto cand = solve_windowed(points, L, std::move(w), &caps);
                        if (cand && (!best || cand->total_cost < best->total_cost))
                            best = std::move(cand);
                    }
                    profile[r] = 0;
                    return;
                }
                for (std::int64_t v = 0; v <= remaining; ++v) {
                    profile[r] = v;
                    rec(r + 1, remaining - v);
                }
                profile[r] = 0;
            };
            rec(0, n);
            return best;
        }

        case Kind::CannotLink:
        case Kind::Explicit: {
            auto matrices = family.enumerate(opts.enumeration_cap);
            std::optional<Assignment> best;
            for (const auto& K : matrices) {
                Assignment cand = assign_exact_matrix(points, centers, K, cfg);
                if (!best || cand.total_cost < best->total_cost) best = std::move(cand);
            }
            return best;
        }
    }
    return std::nullopt;
}

std::optional<double> weighted_constrained_cost(const PointSet& summary, const CenterSet& centers,
                                                const ConstraintFamily& family,
                                                const MetricConfig& cfg,
                                                const AssignOptions& opts) {
    auto a = optimal_assignment(summary, centers, family, cfg, opts);
    if (!a) return std::nullopt;
    return a->total_cost;
}

}  // namespace ccoreset
