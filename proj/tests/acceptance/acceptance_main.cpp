// Acceptance suite: one check per guarantee the library ships, each printed as a
// single pass/fail line with its measured numbers. Exit code is the number of
// failed checks.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ccoreset/assignment.hpp"
#include "ccoreset/oracle.hpp"
#include "ccoreset/solver.hpp"
#include "ccoreset/stream.hpp"
#include "../support.hpp"

using namespace ccoreset;

namespace {

struct Outcome {
    bool ok = true;
    long checks = 0;
    long failures = 0;
    std::string note;

    void expect(bool cond) {
        ++checks;
        if (!cond) {
            ++failures;
            ok = false;
        }
    }
};

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// A1: moving points along a bounded-cost bijection moves every clustering cost
// by at most an eps fraction, for powers 1, 2 and 3.
// ---------------------------------------------------------------------------
Outcome run_movement_bijection() {
    Outcome out;
    Rng rng(20240801);
    for (int rep = 0; rep < 200; ++rep) {
        const int d = 1 + static_cast<int>(rng.next_index(3));
        const int n = 3 + static_cast<int>(rng.next_index(10));
        const int m = 1 + static_cast<int>(rng.next_index(3));
        const double eps = 0.05 + 0.95 * rng.next_double();
        PointSet p = testsupport::random_points(rng, n, d);
        CenterSet c = testsupport::random_centers(rng, 1 + rng.next_index(3), d);
        MetricConfig cfg(m, d);
        const double base = clustering_cost(p, c, cfg);
        if (base <= 0.0) continue;

        const double budget = std::pow(eps / (2.0 * m), m) * base;
        std::vector<Point> offsets;
        double raw = 0.0;
        for (int i = 0; i < n; ++i) {
            Point o = testsupport::random_point(rng, d, -1.0, 1.0);
            raw += distance_pow(Point(std::vector<double>(d, 0.0)), o, m);
            offsets.push_back(std::move(o));
        }
        const double scale = std::pow(rng.next_double() * budget / raw, 1.0 / m);
        PointSet q(d, 1);
        double movement = 0.0;
        for (int i = 0; i < n; ++i) {
            Point moved = p[i].point;
            for (int t = 0; t < d; ++t) moved[t] += scale * offsets[i][t];
            movement += distance_pow(p[i].point, moved, m);
            q.add(std::move(moved));
        }
        out.expect(movement <= budget * (1.0 + 1e-9));
        const double after = clustering_cost(q, c, cfg);
        out.expect(std::abs(base - after) <= eps * base * (1.0 + 1e-9));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Constraint families used by the summary-quality checks. Size-style bounds are
// derived from the instance so the family is feasible by construction; chromatic
// stays in the list even when infeasible, which exercises the agreement path.
// ---------------------------------------------------------------------------
std::vector<ConstraintFamily> standard_families(const PointSet& p, int k) {
    const std::int64_t n = p.total_weight();
    const auto masses = p.color_weights();
    std::vector<ConstraintFamily> fams;
    fams.push_back(ConstraintFamily::unconstrained(k, masses));
    fams.push_back(ConstraintFamily::lower_bounds(
        std::vector<std::int64_t>(k, std::max<std::int64_t>(1, n / (2 * k))),
        LowerBoundMode::Strict, masses));
    fams.push_back(ConstraintFamily::upper_bounds(
        std::vector<std::int64_t>(k, (3 * n) / 4 + 1), masses));
    fams.push_back(ConstraintFamily::outliers(k, 1, masses));
    fams.push_back(ConstraintFamily::chromatic(k, masses));
    fams.push_back(ConstraintFamily::l_diversity(k, 2, masses));
    return fams;
}

// balanced two-color instance so l-diversity at l = 2 stays feasible
PointSet balanced_instance(Rng& rng, int n, bool clustered) {
    PointSet p(2, 2);
    if (!clustered) {
        for (int i = 0; i < n; ++i) p.add(testsupport::random_point(rng, 2), i % 2, 1);
        return p;
    }
    const int clumps = std::max(3, n / 3);
    std::vector<Point> centers;
    for (int c = 0; c < clumps; ++c) centers.push_back(testsupport::random_point(rng, 2));
    for (int i = 0; i < n; ++i) {
        const Point& c = centers[i % clumps];
        p.add(Point{c[0] + 5e-4 * rng.next_gaussian(), c[1] + 5e-4 * rng.next_gaussian()}, i % 2,
              1);
    }
    return p;
}

// cost of the constrained instance at fixed centers: labeled enumeration for
// oracle-sized inputs, the flow solver beyond
std::optional<double> reference_cost(const PointSet& p, const CenterSet& c,
                                     const ConstraintFamily& fam, const MetricConfig& cfg) {
    if (p.total_weight() <= 10) return constrained_cost_at_centers(p, c, fam, cfg);
    auto a = optimal_assignment(p, c, fam, cfg);
    if (!a) return std::nullopt;
    return a->total_cost;
}

void summary_tracks_instance(Outcome& out, const PointSet& p, const PointSet& summary,
                             const std::vector<CenterSet>& center_sets, int k, double eps,
                             const MetricConfig& cfg) {
    for (const auto& fam : standard_families(p, k)) {
        for (const auto& c : center_sets) {
            auto on_p = reference_cost(p, c, fam, cfg);
            auto on_s = weighted_constrained_cost(summary, c, fam, cfg);
            out.expect(on_p.has_value() == on_s.has_value());
            if (!on_p || !on_s) continue;
            out.expect(std::abs(*on_p - *on_s) <= eps * (*on_p) + 1e-12);
        }
    }
}

// ---------------------------------------------------------------------------
// A2: movement summaries verify their certificates and track the constrained
// cost of the instance within eps for every family and tested center set.
// ---------------------------------------------------------------------------
Outcome run_summary_guarantee() {
    Outcome out;
    Rng rng(424242);
    const double eps = 0.3;
    const int k = 2;
    MetricConfig cfg(2, 2);
    const int sizes[] = {4, 8, 10, 20, 30, 40, 39, 10, 36, 8};
    for (int rep = 0; rep < 50; ++rep) {
        const int n = sizes[rep % 10];
        const bool clustered = rep % 10 >= 6;
        PointSet p = balanced_instance(rng, n, clustered);
        Coreset cs = build_movement_coreset(p, k, eps, cfg, derive_seed(7, rep));
        out.expect(verify_certificate(p, cs).ok);
        out.expect(cs.points.color_weights() == p.color_weights());

        std::vector<CenterSet> center_sets;
        for (int t = 0; t < 50; ++t)
            center_sets.push_back(testsupport::random_centers(rng, k, 2, -0.2, 1.2));
        if (p.total_weight() <= 10) {
            for (const auto& fam : standard_families(p, k)) {
                auto opt = brute_force_constrained_opt(p, fam, cfg);
                if (opt.feasible) center_sets.push_back(opt.centers);
            }
        } else {
            auto best = ptas_solve(cs, k, 1.0,
                                   ConstraintFamily::unconstrained(k, p.color_weights()), cfg);
            if (best) center_sets.push_back(best->centers);
        }
        summary_tracks_instance(out, p, cs.points, center_sets, k, eps, cfg);
    }
    return out;
}

// ---------------------------------------------------------------------------
// A3: merged summaries of a split input keep the guarantee on the union, even
// when the union's optimum collapses to zero.
// ---------------------------------------------------------------------------
Outcome run_mergeability() {
    Outcome out;
    Rng rng(31337);
    const double eps = 0.3;
    const int k = 2;
    MetricConfig cfg(2, 2);

    for (int rep = 0; rep < 30; ++rep) {
        PointSet p1(2, 2), p2(2, 2), whole(2, 2);
        if (rep % 6 == 5) {
            // the adversarial split: both halves sit on {0,1} x {0} and are
            // expensive alone under the lower bound, while the union is free
            for (int i = 0; i < 4; ++i) {
                Point loc{i < 2 ? 0.0 : 1.0, 0.0};
                p1.add(loc, i % 2, 1);
                p2.add(loc, i % 2, 1);
            }
        } else {
            const int n1 = 3 + static_cast<int>(rng.next_index(3));
            const int n2 = 3 + static_cast<int>(rng.next_index(3));
            for (int i = 0; i < n1; ++i) p1.add(testsupport::random_point(rng, 2), i % 2, 1);
            for (int i = 0; i < n2; ++i) p2.add(testsupport::random_point(rng, 2), i % 2, 1);
        }
        for (const auto& e : p1.entries()) whole.add(e);
        for (const auto& e : p2.entries()) whole.add(e);

        Coreset s1 = build_movement_coreset(p1, k, eps, cfg, derive_seed(100, rep));
        Coreset s2 = build_movement_coreset(p2, k, eps, cfg, derive_seed(200, rep));
        Coreset merged = merge_coresets(s1, s2);
        out.expect(merged.points.total_weight() == whole.total_weight());

        std::vector<CenterSet> center_sets;
        for (int t = 0; t < 20; ++t)
            center_sets.push_back(testsupport::random_centers(rng, k, 2, -0.2, 1.2));
        for (const auto& fam : standard_families(whole, k)) {
            auto opt = brute_force_constrained_opt(whole, fam, cfg);
            if (opt.feasible) center_sets.push_back(opt.centers);
        }
        summary_tracks_instance(out, whole, merged.points, center_sets, k, eps, cfg);

        if (rep % 6 == 5) {
            // the union optimum is exactly zero at centers {0,1}
            auto fam = ConstraintFamily::lower_bounds({4, 4}, LowerBoundMode::Strict,
                                                      whole.color_weights());
            CenterSet zeros{Point{0.0, 0.0}, Point{1.0, 0.0}};
            auto on_p = constrained_cost_at_centers(whole, zeros, fam, cfg);
            auto on_s = weighted_constrained_cost(merged.points, zeros, fam, cfg);
            out.expect(on_p && *on_p == 0.0);
            out.expect(on_s && *on_s == 0.0);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// A4: the two worked values of the one-dimensional eight-point instance.
// ---------------------------------------------------------------------------
Outcome run_worked_values() {
    Outcome out;
    MetricConfig cfg(2, 1);

    PointSet eight = testsupport::eight_point_instance();
    auto fam = ConstraintFamily::lower_bounds({4, 4}, LowerBoundMode::Strict, {8});
    auto a = optimal_assignment(eight, {Point{0.0}, Point{1.0}}, fam, cfg);
    out.expect(a.has_value() && a->total_cost == 0.0);
    auto opt = brute_force_constrained_opt(eight, fam, cfg);
    out.expect(opt.feasible && opt.value == 0.0);

    Coreset cs = build_movement_coreset(eight, 2, 0.5, cfg, 7);
    auto solved = ptas_solve(cs, 2, 0.5, fam, cfg);
    out.expect(solved.has_value() && solved->coreset_cost == 0.0);
    if (solved) {
        std::vector<double> xs;
        for (const auto& c : solved->centers) xs.push_back(c[0]);
        std::sort(xs.begin(), xs.end());
        out.expect(std::abs(xs[0] - 0.0) <= 1e-9 && std::abs(xs[1] - 1.0) <= 1e-9);
    }

    // the four-point half instance: only one center can open, best cost is 1.0,
    // which clears the (l/2)(1/4) = 0.5 floor
    PointSet half = testsupport::points_1d({0, 0, 1, 1});
    auto open = ConstraintFamily::lower_bounds({4, 4}, LowerBoundMode::OpenCenters, {4});
    auto half_opt = brute_force_constrained_opt(half, open, cfg);
    out.expect(half_opt.feasible);
    out.expect(std::abs(half_opt.value - 1.0) <= 1e-12);
    out.expect(half_opt.value >= 0.5 - 1e-12);
    return out;
}

// ---------------------------------------------------------------------------
// A5: the flow solver reproduces the brute-force constrained optimum at the
// oracle's witness centers, across all six family kinds.
// ---------------------------------------------------------------------------
Outcome run_flow_vs_oracle() {
    Outcome out;
    Rng rng(5150);
    for (int rep = 0; rep < 100; ++rep) {
        const bool median = rep % 10 == 9;
        const int k = 1 + static_cast<int>(rng.next_index(median ? 2 : 3));
        MetricConfig cfg(median ? 1 : 2, 2);
        // weighted colored entries with a small expanded size
        const int entries = median ? 3 + static_cast<int>(rng.next_index(3))
                                   : 3 + static_cast<int>(rng.next_index(4));
        const std::int64_t limit = median ? 6 : 8;
        PointSet p(2, 2);
        std::int64_t mass = 0;
        for (int i = 0; i < entries; ++i) {
            std::int64_t room = limit - mass - (entries - i - 1);
            std::int64_t w =
                1 + (room > 1 ? static_cast<std::int64_t>(rng.next_index(std::min<std::int64_t>(
                                    2, room)))
                              : 0);
            p.add(testsupport::random_point(rng, 2), i % 2, w);
            mass += w;
        }
        for (const auto& fam : standard_families(p, k)) {
            auto oracle = brute_force_constrained_opt(p, fam, cfg);
            if (!oracle.feasible) {
                out.expect(!optimal_assignment(p, testsupport::random_centers(rng, k, 2), fam, cfg)
                                .has_value());
                continue;
            }
            auto flow = optimal_assignment(p, oracle.centers, fam, cfg);
            out.expect(flow.has_value());
            if (flow)
                out.expect(std::abs(flow->total_cost - oracle.value) <=
                           1e-9 * std::max(1.0, oracle.value));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// A6: Monte-Carlo check of the weight-proportional sampling inequality.
// ---------------------------------------------------------------------------
Outcome run_sampling_statistics() {
    Outcome out;
    Rng rng(60601);
    std::vector<PointSet> sets;
    {
        PointSet line(2, 1);
        for (int i = 0; i < 6; ++i) line.add(Point{0.2 * i, 0.0}, 0, 1 + i % 3);
        sets.push_back(line);
        PointSet square(2, 1);
        for (int i = 0; i < 8; ++i)
            square.add(Point{static_cast<double>(i % 2), static_cast<double>(i / 4)}, 0, 1);
        sets.push_back(square);
        PointSet heavy(2, 1);
        heavy.add(Point{0.0, 0.0}, 0, 20);
        heavy.add(Point{1.0, 1.0}, 0, 1);
        heavy.add(Point{0.3, 0.8}, 0, 3);
        sets.push_back(heavy);
        sets.push_back(testsupport::random_points(rng, 7, 2, 1, 5));
        sets.push_back(testsupport::random_points(rng, 5, 2, 1, 9));
    }
    const std::pair<int, double> configs[] = {{5, 0.5}, {20, 0.2}};
    for (const auto& [ms, delta] : configs) {
        for (std::size_t si = 0; si < sets.size(); ++si) {
            const PointSet& s = sets[si];
            Point mu = weighted_mean(s);
            const double scatter = scatter_around(s, mu);
            const double rhs = scatter / (delta * ms * static_cast<double>(s.total_weight()));
            int violations = 0;
            const int trials = 2000;
            for (int t = 0; t < trials; ++t) {
                auto [r, mean] = inaba_sample(
                    s, {ms, delta, derive_seed(si * 1000 + static_cast<std::uint64_t>(ms), t)});
                violations += squared_distance(mu, mean) >= rhs;
            }
            out.expect(violations <= static_cast<int>((delta + 0.05) * trials));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// A7: solver cost on a summary is sandwiched in [OPT, (1+eps) OPT].
// ---------------------------------------------------------------------------
Outcome run_solver_ratio() {
    Outcome out;
    Rng rng(70707);
    MetricConfig cfg(2, 2);
    const int k = 2;
    for (int rep = 0; rep < 20; ++rep) {
        PointSet s(2, 2);
        const int entries = 5 + static_cast<int>(rng.next_index(4));
        std::int64_t mass = 0;
        for (int i = 0; i < entries; ++i) {
            std::int64_t room = 10 - mass - (entries - i - 1);
            std::int64_t w =
                1 + (room > 1 ? static_cast<std::int64_t>(rng.next_index(std::min<std::int64_t>(
                                    2, room)))
                              : 0);
            s.add(testsupport::random_point(rng, 2), i % 2, w);
            mass += w;
        }
        auto fams = standard_families(s, k);
        const auto& fam = fams[rep % fams.size()];
        auto oracle = brute_force_constrained_opt(s, fam, cfg);
        for (double eps : {0.5, 1.0}) {
            Coreset cs;
            cs.points = s;
            cs.k = k;
            cs.epsilon = eps;
            cs.power = 2;
            auto solved = ptas_solve(cs, k, eps, fam, cfg);
            out.expect(solved.has_value() == oracle.feasible);
            if (!solved || !oracle.feasible) continue;
            out.expect(solved->coreset_cost >= oracle.value - 1e-9);
            out.expect(solved->coreset_cost <= (1.0 + eps) * oracle.value + 1e-9);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// A8: solving on a summary built at eps/3 and re-evaluating on the input stays
// within (1+eps) of the constrained optimum, offline and streamed.
// ---------------------------------------------------------------------------
Outcome run_transfer_bound() {
    Outcome out;
    Rng rng(80808);
    MetricConfig cfg(2, 2);
    const int k = 2;
    const double eps = 0.6;
    for (int rep = 0; rep < 10; ++rep) {
        // a handful of support locations keeps the summary tiny, so the candidate
        // enumeration runs at full sample size
        const int supports = 4 + static_cast<int>(rng.next_index(2));
        std::vector<Point> locs;
        for (int i = 0; i < supports; ++i) locs.push_back(testsupport::random_point(rng, 2));
        const int n = 8 + static_cast<int>(rng.next_index(3));
        PointSet p(2, 1);
        for (int i = 0; i < n; ++i)
            p.add(locs[i < supports ? static_cast<std::size_t>(i) : rng.next_index(supports)], 0,
                  1);

        ConstraintFamily fam =
            rep % 3 == 0
                ? ConstraintFamily::lower_bounds({2, 2}, LowerBoundMode::Strict,
                                                 {p.total_weight()})
                : (rep % 3 == 1
                       ? ConstraintFamily::upper_bounds(
                             {(3 * p.total_weight()) / 4, (3 * p.total_weight()) / 4},
                             {p.total_weight()})
                       : ConstraintFamily::unconstrained(k, {p.total_weight()}));
        auto oracle = brute_force_constrained_opt(p, fam, cfg);
        if (!oracle.feasible) {
            out.expect(false);
            continue;
        }

        auto offline = solve_with_transfer(p, k, eps, fam, cfg, derive_seed(9000, rep));
        out.expect(offline.has_value());
        if (offline) {
            out.expect(offline->input_cost <= (1.0 + eps) * oracle.value + 1e-9);
            out.expect(offline->input_cost >= oracle.value - 1e-9);
        }

        StreamConfig scfg;
        scfg.block_size = (n + 3) / 4;  // four blocks
        scfg.k = k;
        scfg.epsilon = eps / 3.0;
        scfg.power = 2;
        scfg.dimension = 2;
        scfg.color_count = 1;
        scfg.rng_seed = derive_seed(9100, rep);
        StreamState st(scfg);
        for (const auto& e : p.entries()) st.push(e.point, e.color, e.weight);
        Coreset streamed = st.finalize();
        auto via_stream = solve_with_transfer_on(streamed, p, eps, fam, cfg);
        out.expect(via_stream.has_value());
        if (via_stream) {
            out.expect(via_stream->input_cost <= (1.0 + eps) * oracle.value + 1e-9);
            out.expect(via_stream->input_cost >= oracle.value - 1e-9);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// A9: streaming 1e5 quantized points keeps the summary size under a polylog
// ceiling, with bounded growth between decade checkpoints.
// ---------------------------------------------------------------------------
Outcome run_streaming_scale() {
    Outcome out;
    Rng rng(90909);
    StreamConfig cfg;
    cfg.block_size = 1000;
    cfg.k = 5;
    cfg.epsilon = 0.5;
    cfg.power = 2;
    cfg.dimension = 2;
    cfg.color_count = 1;
    cfg.rng_seed = 123;
    StreamState st(cfg);

    const int grid = 48;  // sensor-style quantized coordinates
    auto ceiling = [&](double n) {
        double l2 = std::log2(n);
        return 4.0 * cfg.k * std::pow(1.0 / cfg.epsilon, 2) * l2 * l2;
    };
    std::vector<std::size_t> entries_at;
    const std::vector<std::int64_t> checkpoints{1000, 10000, 100000};
    std::size_t next_cp = 0;
    for (std::int64_t i = 1; i <= 100000; ++i) {
        st.push(Point{rng.next_index(grid) / static_cast<double>(grid),
                      rng.next_index(grid) / static_cast<double>(grid)});
        if (next_cp < checkpoints.size() && i == checkpoints[next_cp]) {
            Coreset snapshot = st.finalize();
            entries_at.push_back(snapshot.points.size());
            out.expect(static_cast<double>(snapshot.points.size()) <=
                       ceiling(static_cast<double>(checkpoints[next_cp])));
            ++next_cp;
        }
    }
    out.expect(entries_at.size() == 3);
    for (std::size_t i = 1; i < entries_at.size(); ++i)
        out.expect(entries_at[i] <= 4 * entries_at[i - 1]);
    char buf[128];
    std::snprintf(buf, sizeof buf, "entries %zu/%zu/%zu",
                  entries_at.size() > 0 ? entries_at[0] : 0,
                  entries_at.size() > 1 ? entries_at[1] : 0,
                  entries_at.size() > 2 ? entries_at[2] : 0);
    out.note = buf;
    return out;
}

struct Criterion {
    const char* name;
    double time_limit_s;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"movement-bijection cost stability (200 instances, powers 1-3)", 10.0,
         run_movement_bijection},
        {"summary guarantee across families and center sets (50 instances)", 300.0,
         run_summary_guarantee},
        {"merged split summaries keep the union guarantee (30 splits)", 120.0, run_mergeability},
        {"worked one-dimensional values (free pairing, half-instance floor)", 60.0,
         run_worked_values},
        {"flow solver equals brute force at witness centers (100 instances)", 120.0,
         run_flow_vs_oracle},
        {"weighted sampling inequality statistics (2000 trials x 10 configs)", 30.0,
         run_sampling_statistics},
        {"solver ratio sandwich on summaries (20 instances, eps 0.5/1.0)", 300.0,
         run_solver_ratio},
        {"transfer bound on input, offline and streamed (10 instances)", 300.0,
         run_transfer_bound},
        {"streaming footprint at 1e5 points (decade checkpoints)", 60.0, run_streaming_scale},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome r = criteria[i].run();
        double secs = elapsed_s(t0);
        bool in_time = secs < criteria[i].time_limit_s;
        bool pass = r.ok && in_time;
        std::printf("[%s] %zu. %s — %ld checks, %ld failed, %.1fs%s%s%s\n",
                    pass ? "PASS" : "FAIL", i + 1, criteria[i].name, r.checks, r.failures, secs,
                    in_time ? "" : " (over time budget)", r.note.empty() ? "" : ", ",
                    r.note.c_str());
        failed += !pass;
    }
    return failed;
}
