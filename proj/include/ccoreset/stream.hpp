#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ccoreset/coreset.hpp"

namespace ccoreset {

/// Merge-and-reduce parameters. Level j of the binary-counter tree is built at
/// error level_epsilon(epsilon, j) = eps / (2 (j+2)^2); the products of
/// (1 + eps_j) over all levels stay within (1 + eps) for any stream length.
struct StreamConfig {
    std::int64_t block_size = 0;
    int k = 0;
    double epsilon = 0.0;
    int power = 2;
    int dimension = 0;
    int color_count = 1;
    std::uint64_t rng_seed = 0;
};

double level_epsilon(double epsilon, int level);

/// Multiset union with concatenated weights; entries at identical (location,
/// color) are weight-summed. Parameters (d, power, k, colors) must match; the
/// result's epsilon is max(eps1, eps2). Certificates do not survive a merge.
Coreset merge_coresets(const Coreset& a, const Coreset& b);

/// Re-summarize a coreset's weighted entries at the target error.
Coreset reduce_coreset(const Coreset& coreset, double target_epsilon, std::uint64_t rng_seed);

/// Binary-counter state: at most one bucket per tree level plus a partial block
/// buffer. Carries run merge-then-reduce eagerly so memory stays at one bucket
/// per level.
class StreamState {
public:
    explicit StreamState(StreamConfig cfg);

    void push(const Point& p, int color = 0, std::int64_t weight = 1);
    /// Summarize the buffered partial block as a level-0 coreset (end of stream).
    void flush_block();

    /// Merge every bucket into the final summary. Flushes any partial block.
    Coreset finalize();

    std::int64_t points_seen() const { return points_seen_; }
    std::uint64_t blocks_done() const { return blocks_done_; }
    std::size_t stored_entries() const;
    const StreamConfig& config() const { return cfg_; }
    const std::vector<std::optional<Coreset>>& buckets() const { return buckets_; }
    const std::vector<WeightedColoredPoint>& buffer() const { return buffer_; }

    /// Rebuild a state from checkpointed buckets and buffer.
    static StreamState restore(StreamConfig cfg, std::vector<std::optional<Coreset>> buckets,
                               std::vector<WeightedColoredPoint> buffer, std::int64_t points_seen,
                               std::uint64_t blocks_done);

private:
    void carry(Coreset level0);

    StreamConfig cfg_;
    std::vector<std::optional<Coreset>> buckets_;
    std::vector<WeightedColoredPoint> buffer_;
    std::int64_t points_seen_ = 0;
    std::uint64_t blocks_done_ = 0;
};

/// Drain a point source through a StreamState and finalize. The source returns
/// entries until exhausted (nullopt).
Coreset process_stream(const std::function<std::optional<WeightedColoredPoint>()>& source,
                       const StreamConfig& cfg);

}  // namespace ccoreset
