#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ccoreset/assignment.hpp"
#include "ccoreset/constraints.hpp"
#include "ccoreset/coreset.hpp"

namespace ccoreset {

/// Weight-proportional sampling parameters. sample_size is the Appendix-style m
/// (distinct from the cost power); failure_prob only matters for the statistical
/// check of the sampling inequality, the deterministic enumeration path relies on
/// existence alone.
struct InabaParams {
    int sample_size = 1;
    double failure_prob = 0.5;
    std::uint64_t rng_seed = 0;
};

/// sample_size independent draws proportional to weight. Returns the drawn points
/// and their unweighted mean.
std::pair<std::vector<Point>, Point> inaba_sample(const PointSet& points,
                                                  const InabaParams& params);

struct SolveOptions {
    std::int64_t candidate_set_cap = 1'000'000;
    /// When the candidate-set count at sample size ceil(2/eps) exceeds the cap,
    /// shrink the per-cluster sample until it fits (the certified factor grows
    /// accordingly). With shrinking disabled the solver throws CapExceeded.
    bool allow_sample_shrink = true;
    int jobs = 1;
    AssignOptions assign;
};

/// Largest per-cluster sample size whose candidate-set count fits the cap, given
/// the number of distinct summary locations. Returns 0 when even size 1 does not fit.
int max_feasible_sample_size(std::size_t distinct_locations, int k, std::int64_t cap);

/// Smallest epsilon the k-means candidate enumeration can honor for a summary of
/// the given size under the cap (the value 2 / max feasible sample size).
double smallest_feasible_epsilon(std::size_t distinct_locations, int k, std::int64_t cap);

/// Candidate k-center sets for the k-means enumeration: the centroids of every
/// size-ceil(2/eps) multiset of summary locations, combined into every k-multiset.
/// Deduplication is by exact coordinate equality. Throws CapExceeded when the
/// combinatorial count exceeds the cap.
std::vector<CenterSet> candidate_centers(const PointSet& points, int k, double epsilon,
                                         std::int64_t cap = 1'000'000);

struct SolveResult {
    CenterSet centers;
    Assignment assignment;
    double coreset_cost = 0.0;
    /// Certified approximation factor of coreset_cost against the constrained
    /// optimum of the summary: 1 + 1/q for per-cluster sample size q (power 2).
    /// Zero means uncertified (the discrete k-median path).
    double certified_factor = 0.0;
    std::int64_t candidates_examined = 0;
    int sample_size_used = 0;
};

/// Evaluate the optimal constrained assignment at every candidate center set and
/// keep the cheapest (ties by lexicographically smallest center set). power 2
/// enumerates sampled-centroid candidates; power 1 enumerates k-subsets of the
/// summary locations (discrete k-median). Returns nullopt when the family admits
/// no matrix.
std::optional<SolveResult> ptas_solve(const Coreset& coreset, int k, double epsilon,
                                      const ConstraintFamily& family, const MetricConfig& cfg,
                                      const SolveOptions& opts = {});

struct TransferResult {
    SolveResult summary;       // the solve on the coreset
    Assignment on_input;       // the returned centers re-evaluated on the input
    double input_cost = 0.0;
    double certified_factor = 0.0;  // end-to-end bound, 0 when uncertified
};

/// Solve on a freshly built (k, eps/3)-coreset at eps/3 and re-evaluate the
/// winning centers on the input.
std::optional<TransferResult> solve_with_transfer(const PointSet& points, int k, double epsilon,
                                                  const ConstraintFamily& family,
                                                  const MetricConfig& cfg,
                                                  std::uint64_t rng_seed,
                                                  const SolveOptions& opts = {});

/// Same, but over a caller-supplied summary (for example a streamed one).
std::optional<TransferResult> solve_with_transfer_on(const Coreset& summary,
                                                     const PointSet& points, double epsilon,
                                                     const ConstraintFamily& family,
                                                     const MetricConfig& cfg,
                                                     const SolveOptions& opts = {});

}  // namespace ccoreset
