#include "ccoreset/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <thread>

#include "ccoreset/random.hpp"

namespace ccoreset {

std::pair<std::vector<Point>, Point> inaba_sample(const PointSet& points,
                                                  const InabaParams& params) {
    if (points.total_weight() <= 0) throw Error("inaba_sample: empty input");
    if (params.sample_size < 1) throw Error("inaba_sample: sample size must be >= 1");
    Rng rng(params.rng_seed);
    std::vector<double> prob(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        prob[i] = static_cast<double>(points[i].weight);
    std::vector<Point> draws;
    Point mean(std::vector<double>(points.dimension(), 0.0));
    for (int t = 0; t < params.sample_size; ++t) {
        const Point& p = points[rng.next_weighted(prob)].point;
        draws.push_back(p);
        for (int c = 0; c < points.dimension(); ++c) mean[c] += p[c];
    }
    for (int c = 0; c < points.dimension(); ++c) mean[c] /= params.sample_size;
    return {std::move(draws), std::move(mean)};
}

namespace {

// C(n + q - 1, q) as a double with saturation; counts size-q multisets of n items.
double multiset_count(std::size_t n, int q) {
    double c = 1.0;
    for (int i = 1; i <= q; ++i) {
        c *= static_cast<double>(n + i - 1) / static_cast<double>(i);
        if (c > 1e18) return 1e18;
    }
    return c;
}

double candidate_set_count(std::size_t locations, int k, int q) {
    double centroids = multiset_count(locations, q);
    if (centroids >= 1e18) return 1e18;
    double c = 1.0;
    for (int i = 1; i <= k; ++i) {
        c *= (centroids + i - 1) / static_cast<double>(i);
        if (c > 1e18) return 1e18;
    }
    return c;
}

std::vector<Point> distinct_locations(const PointSet& points) {
    std::vector<Point> locs;
    for (const auto& e : points.entries()) locs.push_back(e.point);
    std::sort(locs.begin(), locs.end());
    locs.erase(std::unique(locs.begin(), locs.end()), locs.end());
    return locs;
}

// centroids of all size-q multisets of the given locations, deduplicated by exact
// coordinate equality, in enumeration order
std::vector<Point> multiset_centroids(const std::vector<Point>& locs, int q) {
    const int d = locs.empty() ? 0 : locs.front().dim();
    std::vector<Point> out;
    std::map<std::vector<double>, bool> seen;
    std::vector<std::size_t> pick(q, 0);
    std::vector<double> acc(d, 0.0);
    std::function<void(int, std::size_t)> rec = [&](int slot, std::size_t from) {
        if (slot == q) {
            std::vector<double> c(d);
            for (int i = 0; i < d; ++i) c[i] = acc[i] / q;
            if (!seen.emplace(c, true).second) return;
            out.push_back(Point(c));
            return;
        }
        for (std::size_t j = from; j < locs.size(); ++j) {
            for (int i = 0; i < d; ++i) acc[i] += locs[j][i];
            rec(slot + 1, j);
            for (int i = 0; i < d; ++i) acc[i] -= locs[j][i];
        }
    };
    rec(0, 0);
    return out;
}

// visit nondecreasing index tuples (i_1 <= ... <= i_k) over [0, m)
void for_each_multiset(std::size_t m, int k,
                       const std::function<void(const std::vector<std::size_t>&)>& visit) {
    std::vector<std::size_t> idx(k, 0);
    std::function<void(int, std::size_t)> rec = [&](int slot, std::size_t from) {
        if (slot == k) {
            visit(idx);
            return;
        }
        for (std::size_t j = from; j < m; ++j) {
            idx[slot] = j;
            rec(slot + 1, j);
        }
    };
    rec(0, 0);
}

// visit strictly increasing index tuples over [0, m)
void for_each_subset(std::size_t m, int k,
                     const std::function<void(const std::vector<std::size_t>&)>& visit) {
    std::vector<std::size_t> idx(k, 0);
    std::function<void(int, std::size_t)> rec = [&](int slot, std::size_t from) {
        if (slot == k) {
            visit(idx);
            return;
        }
        for (std::size_t j = from; j + (k - slot - 1) < m; ++j) {
            idx[slot] = j;
            rec(slot + 1, j + 1);
        }
    };
    rec(0, 0);
}

bool lex_less(const CenterSet& a, const CenterSet& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

int max_feasible_sample_size(std::size_t locations, int k, std::int64_t cap) {
    int best = 0;
    for (int q = 1; q <= 4096; ++q) {
        if (candidate_set_count(locations, k, q) <= static_cast<double>(cap))
            best = q;
        else
            break;
    }
    return best;
}

double smallest_feasible_epsilon(std::size_t locations, int k, std::int64_t cap) {
    int q = max_feasible_sample_size(locations, k, cap);
    if (q <= 0) return std::numeric_limits<double>::infinity();
    return 2.0 / static_cast<double>(q);
}

std::vector<CenterSet> candidate_centers(const PointSet& points, int k, double epsilon,
                                         std::int64_t cap) {
    if (points.empty()) throw Error("candidate_centers: empty input");
    if (!(epsilon > 0.0)) throw Error("candidate_centers: eps must be positive");
    const int q = static_cast<int>(std::ceil(2.0 / epsilon));
    auto locs = distinct_locations(points);
    if (candidate_set_count(locs.size(), k, q) > static_cast<double>(cap))
        throw CapExceeded(
            "candidate enumeration exceeds the cap; raise eps or shrink the summary "
            "(smallest feasible eps: " +
            std::to_string(smallest_feasible_epsilon(locs.size(), k, cap)) + ")");
    auto centroids = multiset_centroids(locs, q);
    std::vector<CenterSet> out;
    for_each_multiset(centroids.size(), k, [&](const std::vector<std::size_t>& idx) {
        CenterSet cs;
        for (std::size_t j : idx) cs.push_back(centroids[j]);
        out.push_back(std::move(cs));
    });
    return out;
}

namespace {

struct Best {
    bool any = false;
    double cost = std::numeric_limits<double>::infinity();
    CenterSet centers;
    std::optional<Assignment> assignment;

    void offer(double c, const CenterSet& cs, Assignment a) {
        if (!any || c < cost || (c == cost && lex_less(cs, centers))) {
            any = true;
            cost = c;
            centers = cs;
            assignment = std::move(a);
        }
    }
    void absorb(Best&& o) {
        if (!o.any) return;
        if (!any || o.cost < cost || (o.cost == cost && lex_less(o.centers, centers))) *this = std::move(o);
    }
};

// Candidates are produced lazily and evaluated in bounded chunks so the full
// enumeration is never materialized. The (cost, lex centers) order makes the
// reduction independent of the chunking and thread split.
class ChunkedEvaluator {
public:
    ChunkedEvaluator(const PointSet& points, const ConstraintFamily& family,
                     const MetricConfig& cfg, const SolveOptions& opts)
        : points_(points), family_(family), cfg_(cfg), opts_(opts),
          jobs_(std::max(1, opts.jobs)) {
        chunk_.reserve(kChunk);
    }

    void offer(CenterSet cs) {
        ++examined_;
        chunk_.push_back(std::move(cs));
        if (chunk_.size() >= kChunk) drain();
    }

    Best take() {
        drain();
        return std::move(best_);
    }

    std::int64_t examined() const { return examined_; }

private:
    static constexpr std::size_t kChunk = 4096;

    void drain() {
        if (chunk_.empty()) return;
        std::vector<Best> partial(jobs_);
        auto work = [&](int tid) {
            for (std::size_t i = tid; i < chunk_.size(); i += jobs_) {
                auto a = optimal_assignment(points_, chunk_[i], family_, cfg_, opts_.assign);
                if (a) partial[tid].offer(a->total_cost, chunk_[i], std::move(*a));
            }
        };
        if (jobs_ == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < jobs_; ++t) pool.emplace_back(work, t);
            for (auto& th : pool) th.join();
        }
        for (auto& p : partial) best_.absorb(std::move(p));
        chunk_.clear();
    }

    const PointSet& points_;
    const ConstraintFamily& family_;
    const MetricConfig& cfg_;
    const SolveOptions& opts_;
    int jobs_;
    std::vector<CenterSet> chunk_;
    Best best_;
    std::int64_t examined_ = 0;
};

}  // namespace

std::optional<SolveResult> ptas_solve(const Coreset& coreset, int k, double epsilon,
                                      const ConstraintFamily& family, const MetricConfig& cfg,
                                      const SolveOptions& opts) {
    const PointSet& S = coreset.points;
    if (S.empty()) throw Error("ptas_solve: empty summary");
    if (family.center_count() != k) throw Error("ptas_solve: family center count mismatch");
    if (family.color_count() != S.color_count() || family.color_masses() != S.color_weights())
        throw Error("ptas_solve: family arity does not match the summary");
    if (family.provably_infeasible()) return std::nullopt;

    auto locs = distinct_locations(S);
    int q_used = 0;
    double certified = 0.0;
    ChunkedEvaluator eval(S, family, cfg, opts);

    if (cfg.power == 2) {
        int q = static_cast<int>(std::ceil(2.0 / epsilon));
        if (candidate_set_count(locs.size(), k, q) > static_cast<double>(opts.candidate_set_cap)) {
            if (!opts.allow_sample_shrink)
                throw CapExceeded("ptas_solve: candidate sets exceed the cap at requested eps");
            q = max_feasible_sample_size(locs.size(), k, opts.candidate_set_cap);
            if (q < 1) throw CapExceeded("ptas_solve: summary too large for any sample size");
        }
        q_used = q;
        certified = 1.0 + 1.0 / static_cast<double>(q);
        auto centroids = multiset_centroids(locs, q);
        for_each_multiset(centroids.size(), k, [&](const std::vector<std::size_t>& idx) {
            CenterSet cs;
            for (std::size_t j : idx) cs.push_back(centroids[j]);
            eval.offer(std::move(cs));
        });
    } else if (cfg.power == 1) {
        // discrete k-median over summary locations; exhaustive, not factor-certified
        if (locs.size() >= static_cast<std::size_t>(k)) {
            double count = 1.0;
            for (int i = 0; i < k; ++i) count *= static_cast<double>(locs.size() - i) / (i + 1);
            if (count > static_cast<double>(opts.candidate_set_cap))
                throw CapExceeded("ptas_solve: k-median subset enumeration exceeds the cap");
            for_each_subset(locs.size(), k, [&](const std::vector<std::size_t>& idx) {
                CenterSet cs;
                for (std::size_t j : idx) cs.push_back(locs[j]);
                eval.offer(std::move(cs));
            });
        } else {
            CenterSet cs = locs;
            while (static_cast<int>(cs.size()) < k) cs.push_back(locs.back());
            eval.offer(std::move(cs));
        }
    } else {
        throw Error("ptas_solve: power must be 1 or 2");
    }

    std::int64_t examined = eval.examined();
    Best best = eval.take();
    if (!best.any) return std::nullopt;

    SolveResult r;
    r.centers = std::move(best.centers);
    r.assignment = std::move(*best.assignment);
    r.coreset_cost = best.cost;
    r.certified_factor = certified;
    r.candidates_examined = examined;
    r.sample_size_used = q_used;
    return r;
}

namespace {

std::optional<TransferResult> transfer_core(const Coreset& summary, const PointSet& points,
                                            double epsilon, const ConstraintFamily& family,
                                            const MetricConfig& cfg, const SolveOptions& opts) {
    const double inner_eps = epsilon / 3.0;
    auto inner = ptas_solve(summary, family.center_count(), inner_eps, family, cfg, opts);
    if (!inner) return std::nullopt;
    auto on_input = optimal_assignment(points, inner->centers, family, cfg, opts.assign);
    if (!on_input) return std::nullopt;

    TransferResult t;
    t.input_cost = on_input->total_cost;
    t.on_input = std::move(*on_input);
    if (inner->certified_factor > 0.0 && inner_eps < 1.0) {
        // alpha-approximation on a (k, eps')-summary lands within alpha (1+eps')/(1-eps')
        t.certified_factor =
            inner->certified_factor * (1.0 + inner_eps) / (1.0 - inner_eps);
    }
    t.summary = std::move(*inner);
    return t;
}

}  // namespace

std::optional<TransferResult> solve_with_transfer(const PointSet& points, int k, double epsilon,
                                                  const ConstraintFamily& family,
                                                  const MetricConfig& cfg, std::uint64_t rng_seed,
                                                  const SolveOptions& opts) {
    if (!(epsilon > 0.0) || epsilon >= 1.0) throw Error("solve_with_transfer: eps must be in (0,1)");
    Coreset summary = build_movement_coreset(points, k, epsilon / 3.0, cfg, rng_seed);
    return transfer_core(summary, points, epsilon, family, cfg, opts);
}

std::optional<TransferResult> solve_with_transfer_on(const Coreset& summary,
                                                     const PointSet& points, double epsilon,
                                                     const ConstraintFamily& family,
                                                     const MetricConfig& cfg,
                                                     const SolveOptions& opts) {
    if (!(epsilon > 0.0) || epsilon >= 1.0) throw Error("solve_with_transfer: eps must be in (0,1)");
    return transfer_core(summary, points, epsilon, family, cfg, opts);
}

}  // namespace ccoreset
