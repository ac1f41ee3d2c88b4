#include "ccoreset/stream.hpp"

#include <algorithm>
#include <map>

#include "ccoreset/random.hpp"

namespace ccoreset {

double level_epsilon(double epsilon, int level) {
    const double j = static_cast<double>(level) + 2.0;
    return epsilon / (2.0 * j * j);
}

Coreset merge_coresets(const Coreset& a, const Coreset& b) {
    if (a.points.dimension() != b.points.dimension()) throw Error("merge: dimension mismatch");
    if (a.power != b.power) throw Error("merge: power mismatch");
    if (a.k != b.k) throw Error("merge: k mismatch");
    if (a.color_count() != b.color_count()) throw Error("merge: color count mismatch");

    std::map<std::pair<std::vector<double>, int>, std::int64_t> merged;
    for (const auto& e : a.points.entries()) merged[{e.point.coords, e.color}] += e.weight;
    for (const auto& e : b.points.entries()) merged[{e.point.coords, e.color}] += e.weight;

    Coreset out;
    out.points = PointSet(a.points.dimension(), a.color_count());
    for (const auto& [key, w] : merged) out.points.add(Point(key.first), key.second, w);
    out.k = a.k;
    out.power = a.power;
    out.epsilon = std::max(a.epsilon, b.epsilon);
    return out;
}

Coreset reduce_coreset(const Coreset& coreset, double target_epsilon, std::uint64_t rng_seed) {
    MetricConfig cfg(coreset.power, coreset.points.dimension());
    Coreset out = build_movement_coreset(coreset.points, coreset.k, target_epsilon, cfg, rng_seed);
    return out;
}

StreamState::StreamState(StreamConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.block_size < cfg_.k) throw Error("stream: block size must be at least k");
    if (!(cfg_.epsilon > 0.0) || cfg_.epsilon > 1.0) throw Error("stream: eps must be in (0,1]");
}

void StreamState::push(const Point& p, int color, std::int64_t weight) {
    buffer_.push_back(WeightedColoredPoint{p, weight, color});
    points_seen_ += weight;
    if (static_cast<std::int64_t>(buffer_.size()) >= cfg_.block_size) flush_block();
}

void StreamState::flush_block() {
    if (buffer_.empty()) return;
    PointSet block(cfg_.dimension, cfg_.color_count);
    for (const auto& e : buffer_) block.add(e);
    buffer_.clear();
    MetricConfig cfg(cfg_.power, cfg_.dimension);
    Coreset level0 = build_movement_coreset(block, cfg_.k, level_epsilon(cfg_.epsilon, 0), cfg,
                                            derive_seed(cfg_.rng_seed, blocks_done_));
    ++blocks_done_;
    carry(std::move(level0));
}

void StreamState::carry(Coreset incoming) {
    std::size_t level = 0;
    while (level < buckets_.size() && buckets_[level].has_value()) {
        Coreset merged = merge_coresets(*buckets_[level], incoming);
        buckets_[level].reset();
        incoming = reduce_coreset(merged, level_epsilon(cfg_.epsilon, static_cast<int>(level) + 1),
                                  derive_seed(cfg_.rng_seed, 0x5eed0000ULL + blocks_done_ * 64 + level));
        ++level;
    }
    if (level == buckets_.size()) buckets_.emplace_back();
    buckets_[level] = std::move(incoming);
}

Coreset StreamState::finalize() {
    flush_block();
    std::optional<Coreset> total;
    for (const auto& bucket : buckets_) {
        if (!bucket) continue;
        total = total ? merge_coresets(*total, *bucket) : *bucket;
    }
    if (!total) throw Error("stream: no points ingested");
    // a lone bucket is returned untouched; a true merge carries the configured
    // total error budget rather than the per-level one
    std::size_t occupied = 0;
    for (const auto& bucket : buckets_)
        if (bucket) ++occupied;
    if (occupied > 1) total->epsilon = cfg_.epsilon;
    return *total;
}

std::size_t StreamState::stored_entries() const {
    std::size_t n = buffer_.size();
    for (const auto& bucket : buckets_)
        if (bucket) n += bucket->points.size();
    return n;
}

StreamState StreamState::restore(StreamConfig cfg, std::vector<std::optional<Coreset>> buckets,
                                 std::vector<WeightedColoredPoint> buffer,
                                 std::int64_t points_seen, std::uint64_t blocks_done) {
    StreamState st(std::move(cfg));
    st.buckets_ = std::move(buckets);
    st.buffer_ = std::move(buffer);
    st.points_seen_ = points_seen;
    st.blocks_done_ = blocks_done;
    return st;
}

Coreset process_stream(const std::function<std::optional<WeightedColoredPoint>()>& source,
                       const StreamConfig& cfg) {
    StreamState state(cfg);
    while (auto e = source()) state.push(e->point, e->color, e->weight);
    return state.finalize();
}

}  // namespace ccoreset
