#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccoreset/geometry.hpp"

namespace ccoreset {

/// Witness that a summary was produced by moving points: the map from input
/// entries to summary entries, the exact movement cost it incurred, and the
/// budget (eps/2m)^m * opt_lower_bound the cost must stay under.
struct MovementCertificate {
    std::vector<int> mapping;  // input entry id -> coreset entry id
    double movement_cost = 0.0;
    double opt_lower_bound = 0.0;
    double budget = 0.0;
};

/// A weighted colored summary with its construction parameters. Total weight and
/// per-color totals always equal the summarized input's.
struct Coreset {
    PointSet points;
    int k = 0;
    double epsilon = 0.0;
    int power = 2;
    std::optional<MovementCertificate> certificate;

    int color_count() const { return points.color_count(); }
    std::int64_t total_weight() const { return points.total_weight(); }
};

/// O(k log k) centers from distance-power-weighted sampling. cost_estimate is the
/// exact clustering cost of the returned centers; opt_lower_bound = cost_estimate
/// divided by the fixed bicriteria factor, a valid lower bound on the k-clustering
/// optimum with the sampling's success probability. Degenerate instances (the
/// seeds cover every distinct location) report cost 0 and lower bound 0.
struct SeedResult {
    CenterSet centers;
    double cost_estimate = 0.0;
    double opt_lower_bound = 0.0;
    bool degenerate = false;
};

SeedResult bicriteria_seed(const PointSet& points, int k, int power, std::uint64_t rng_seed);

/// Movement-based (k, eps)-coreset over weighted colored input: exponential-ring
/// grids around the seed centers, one summary entry per occupied (cell, color).
/// The certificate is checked during construction; if the exact movement cost ever
/// exceeds the budget the internal resolution is halved and the grid rebuilt.
/// When the lower bound degenerates to zero the exact merged input is returned
/// with zero movement.
Coreset build_movement_coreset(const PointSet& points, int k, double epsilon,
                               const MetricConfig& cfg, std::uint64_t rng_seed);

struct CertificateCheck {
    bool ok = false;
    std::string diagnostic;
};

/// Recomputes the movement cost from the mapping and checks the budget, total
/// mass conservation and per-color conservation. Any violation is reported in
/// the diagnostic. Throws when the coreset carries no certificate.
CertificateCheck verify_certificate(const PointSet& input, const Coreset& coreset);

}  // namespace ccoreset
