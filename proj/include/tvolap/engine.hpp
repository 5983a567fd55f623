#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/Dense>

#include "tvolap/partition.hpp"

namespace tvolap {

/// Cumulative transform and multiply-accumulate counts across all channels,
/// used to verify that the per-hop load stays constant through a filter
/// exchange.
struct EngineOpCounts {
    std::uint64_t forward_transforms = 0;
    std::uint64_t inverse_transforms = 0;
    std::uint64_t spectral_macs = 0;
};

/// Streaming time-variant partitioned convolver.
///
/// Each process() call consumes exactly L samples per channel: the new hop is
/// joined with the stored previous hop, Hann-weighted, zero-padded to 4L and
/// transformed; the spectrum enters a 2M-1 deep delay line read at stride 2
/// by the partition multiply-accumulate; the inverse transform feeds a
/// two-step overlap-add that emits L samples. A staged replacement filter
/// becomes active in its entirety at the next hop boundary while the stored
/// input spectra are retained, so past input is re-filtered by the new
/// response and the output crosses over along a half-cosine of width L.
class TvolapEngine {
public:
    explicit TvolapEngine(std::shared_ptr<const FilterPartitionSet> filter);
    explicit TvolapEngine(const FilterPartitionSet& filter);

    Index hop() const { return hop_; }
    Index channels() const { return channels_; }
    Index partition_count() const { return partition_count_; }
    Index delay_line_depth() const { return 2 * partition_count_ - 1; }

    /// Reported input-to-output latency: one hop of buffering plus the one-hop
    /// offset of the emitted stream, 2L in total.
    Index latency() const { return 2 * hop_; }
    /// Samples from an exchange boundary until the output is fully settled.
    Index switching_latency() const { return hop_; }
    /// Offset of the concatenated output stream relative to direct
    /// convolution of the same input.
    Index stream_delay() const { return hop_; }

    /// Stage a replacement partition set. It is observed atomically at the
    /// next process() boundary; never mid-hop, never partially. May be called
    /// from a coordinating thread between hops.
    void exchange_filter(std::shared_ptr<const FilterPartitionSet> next);
    void exchange_filter(const FilterPartitionSet& next);

    /// One hop: input must be hop() x channels(); returns the same shape.
    Eigen::ArrayXXd process(const Eigen::Ref<const Eigen::ArrayXXd>& input);

    /// Zero all state (input history, spectral delay line, tails, carry).
    void reset();

    const EngineOpCounts& op_counts() const { return counts_; }
    const FilterPartitionSet& filter() const { return *filter_; }

private:
    struct ChannelState {
        Eigen::ArrayXd history;              // previous hop, length L
        std::vector<SpectrumFrame> spectra;  // delay line, 2M-1 frames
        Eigen::ArrayXd tail_prev;            // right half of block l-1, length 2L
        Eigen::ArrayXd tail_prev2;           // right half of block l-2, length 2L
        Eigen::ArrayXd carry;                // overlap remainder, length L
    };

    void latch_pending_filter();

    Index hop_ = 0;
    Index partition_count_ = 0;
    Index channels_ = 0;
    std::shared_ptr<const FilterPartitionSet> filter_;
    std::shared_ptr<const FilterPartitionSet> pending_;
    std::mutex pending_mutex_;

    Eigen::ArrayXd window_;    // length 2L
    std::vector<ChannelState> state_;
    Index ring_head_ = 0;      // slot of the newest spectrum

    // scratch, reused every hop
    Eigen::ArrayXd padded_block_;
    SpectrumFrame accumulator_;

    EngineOpCounts counts_;
};

} // namespace tvolap
