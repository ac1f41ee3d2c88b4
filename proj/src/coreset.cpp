#include "ccoreset/coreset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "ccoreset/random.hpp"

namespace ccoreset {

namespace {

// Bicriteria factor: the sampled centers are assumed to be within 2^m of the
// k-clustering optimum. Together with the ring geometry below this makes the
// worst-case movement land at the budget; the certificate check is the ground
// truth either way.
double bicriteria_factor(int power) { return std::pow(2.0, power); }

constexpr double kRingBaseFactor = 4.0;  // r0 = (olb / (4 n))^(1/m), quantized to 2^i

}  // namespace

SeedResult bicriteria_seed(const PointSet& points, int k, int power, std::uint64_t rng_seed) {
    if (points.empty()) throw Error("bicriteria_seed: empty input");
    if (k < 1) throw Error("bicriteria_seed: k must be >= 1");
    if (power != 1 && power != 2) throw Error("bicriteria_seed: power must be 1 or 2");

    SeedResult out;
    std::set<std::vector<double>> distinct;
    for (const auto& e : points.entries()) distinct.insert(e.point.coords);
    if (static_cast<int>(distinct.size()) <= k) {
        for (const auto& c : distinct) out.centers.push_back(Point(c));
        out.degenerate = true;
        return out;
    }

    Rng rng(rng_seed);
    const int draws = 3 * k + k * static_cast<int>(std::ceil(std::log2(k + 1)));
    const std::size_t n = points.size();

    std::vector<double> dist_pow(n);
    std::vector<double> prob(n);
    // first draw proportional to weight
    for (std::size_t i = 0; i < n; ++i) prob[i] = static_cast<double>(points[i].weight);
    std::size_t first = rng.next_weighted(prob);
    out.centers.push_back(points[first].point);
    for (std::size_t i = 0; i < n; ++i)
        dist_pow[i] = distance_pow(points[i].point, points[first].point, power);

    for (int t = 1; t < draws; ++t) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            prob[i] = static_cast<double>(points[i].weight) * dist_pow[i];
            total += prob[i];
        }
        if (total <= 0.0) break;  // every location covered
        std::size_t pick = rng.next_weighted(prob);
        out.centers.push_back(points[pick].point);
        for (std::size_t i = 0; i < n; ++i)
            dist_pow[i] = std::min(dist_pow[i],
                                   distance_pow(points[i].point, points[pick].point, power));
    }

    for (std::size_t i = 0; i < n; ++i)
        out.cost_estimate += static_cast<double>(points[i].weight) * dist_pow[i];
    out.opt_lower_bound = out.cost_estimate / bicriteria_factor(power);
    out.degenerate = out.cost_estimate == 0.0;
    if (out.degenerate) out.opt_lower_bound = 0.0;
    return out;
}

namespace {

Coreset exact_coreset(const PointSet& points, int k, double epsilon, int power) {
    Coreset cs;
    cs.points = merge_duplicates(points);
    cs.k = k;
    cs.epsilon = epsilon;
    cs.power = power;

    // index the merged entries so the identity-by-location mapping is recoverable
    std::map<std::pair<std::vector<double>, int>, int> index;
    for (std::size_t s = 0; s < cs.points.size(); ++s)
        index[{cs.points[s].point.coords, cs.points[s].color}] = static_cast<int>(s);
    MovementCertificate cert;
    cert.mapping.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        cert.mapping[i] = index.at({points[i].point.coords, points[i].color});
    cs.certificate = std::move(cert);
    return cs;
}

struct CellKey {
    int ring;
    int color;
    std::vector<std::int64_t> cell;
    auto operator<=>(const CellKey&) const = default;
};

}  // namespace

Coreset build_movement_coreset(const PointSet& points, int k, double epsilon,
                               const MetricConfig& cfg, std::uint64_t rng_seed) {
    if (points.empty()) throw Error("build_movement_coreset: empty input");
    if (!(epsilon > 0.0) || epsilon > 1.0) throw Error("build_movement_coreset: eps must be in (0,1]");
    if (cfg.power != 1 && cfg.power != 2)
        throw Error("build_movement_coreset: power must be 1 or 2");

    const int m = cfg.power;
    const int d = points.dimension();
    SeedResult seeds = bicriteria_seed(points, k, m, rng_seed);
    if (seeds.opt_lower_bound <= 0.0) return exact_coreset(points, k, epsilon, m);
    Coreset exact = exact_coreset(points, k, epsilon, m);

    const double budget =
        std::pow(epsilon / (2.0 * m), m) * seeds.opt_lower_bound;
    const double n_w = static_cast<double>(points.total_weight());
    double r0 = std::pow(seeds.opt_lower_bound / (kRingBaseFactor * n_w), 1.0 / m);
    r0 = std::pow(2.0, std::floor(std::log2(r0)));  // power-of-two scale aligns grids across builds

    std::vector<double> seed_dist(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        double best = distance(points[i].point, seeds.centers[0]);
        for (std::size_t c = 1; c < seeds.centers.size(); ++c)
            best = std::min(best, distance(points[i].point, seeds.centers[c]));
        seed_dist[i] = best;
    }

    double eps_int = epsilon;
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::map<CellKey, std::int64_t> cells;
        std::vector<CellKey> entry_key(points.size());
        bool overflow = false;
        for (std::size_t i = 0; i < points.size(); ++i) {
            int ring = 0;
            if (seed_dist[i] > r0) ring = static_cast<int>(std::ceil(std::log2(seed_dist[i] / r0)));
            const double side =
                (eps_int / (4.0 * m)) * std::ldexp(r0, ring) / std::sqrt(static_cast<double>(d));
            CellKey key;
            key.ring = ring;
            key.color = points[i].color;
            key.cell.resize(d);
            for (int c = 0; c < d; ++c) {
                double q = std::floor(points[i].point[c] / side);
                if (std::abs(q) > 9.0e15) {
                    overflow = true;
                    break;
                }
                key.cell[c] = static_cast<std::int64_t>(q);
            }
            if (overflow) break;
            cells[key] += points[i].weight;
            entry_key[i] = std::move(key);
        }
        if (overflow) throw Error("build_movement_coreset: coordinate spread too large for grid");

        // representative of a cell is its center
        auto representative = [&](const CellKey& key) {
            const double side =
                (eps_int / (4.0 * m)) * std::ldexp(r0, key.ring) / std::sqrt(static_cast<double>(d));
            Point p(std::vector<double>(d, 0.0));
            for (int c = 0; c < d; ++c)
                p[c] = (static_cast<double>(key.cell[c]) + 0.5) * side;
            return p;
        };

        std::map<CellKey, int> index;
        PointSet summary(d, points.color_count());
        for (const auto& [key, weight] : cells) {
            index[key] = static_cast<int>(summary.size());
            summary.add(representative(key), key.color, weight);
        }

        double movement = 0.0;
        MovementCertificate cert;
        cert.mapping.resize(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            int s = index.at(entry_key[i]);
            cert.mapping[i] = s;
            movement += static_cast<double>(points[i].weight) *
                        distance_pow(points[i].point, summary[s].point, m);
        }
        if (movement <= budget * (1.0 + 1e-12)) {
            // duplicate-merging alone may already be the smaller summary; it moves
            // nothing, so it always satisfies the budget
            if (exact.points.size() <= summary.size()) return exact;
            cert.movement_cost = movement;
            cert.opt_lower_bound = seeds.opt_lower_bound;
            cert.budget = budget;
            Coreset cs;
            cs.points = std::move(summary);
            cs.k = k;
            cs.epsilon = epsilon;
            cs.power = m;
            cs.certificate = std::move(cert);
            return cs;
        }
        eps_int *= 0.5;
    }
    throw Error("build_movement_coreset: failed to meet the movement budget");
}

CertificateCheck verify_certificate(const PointSet& input, const Coreset& coreset) {
    if (!coreset.certificate) throw Error("verify_certificate: coreset carries no certificate");
    const auto& cert = *coreset.certificate;
    CertificateCheck res;

    if (cert.mapping.size() != input.size()) {
        res.diagnostic = "mapping does not cover every input entry";
        return res;
    }
    std::vector<std::int64_t> mapped_weight(coreset.points.size(), 0);
    for (std::size_t i = 0; i < input.size(); ++i) {
        int s = cert.mapping[i];
        if (s < 0 || static_cast<std::size_t>(s) >= coreset.points.size()) {
            res.diagnostic = "mapping target out of range";
            return res;
        }
        if (coreset.points[s].color != input[i].color) {
            res.diagnostic = "per-color conservation violated: entry mapped across colors";
            return res;
        }
        mapped_weight[s] += input[i].weight;
    }
    for (std::size_t s = 0; s < coreset.points.size(); ++s)
        if (mapped_weight[s] != coreset.points[s].weight) {
            res.diagnostic = "mass conservation violated at coreset entry " + std::to_string(s);
            return res;
        }
    if (coreset.points.total_weight() != input.total_weight()) {
        res.diagnostic = "total weight mismatch";
        return res;
    }

    double movement = 0.0;
    for (std::size_t i = 0; i < input.size(); ++i)
        movement += static_cast<double>(input[i].weight) *
                    distance_pow(input[i].point, coreset.points[cert.mapping[i]].point,
                                 coreset.power);
    if (std::abs(movement - cert.movement_cost) >
        1e-9 * std::max(1.0, std::abs(cert.movement_cost))) {
        res.diagnostic = "recorded movement cost does not match the mapping";
        return res;
    }
    if (movement > cert.budget * (1.0 + 1e-9) + 1e-30) {
        res.diagnostic = "movement cost exceeds the budget";
        return res;
    }
    res.ok = true;
    return res;
}

}  // namespace ccoreset
