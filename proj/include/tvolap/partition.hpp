#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tvolap/audio_buffer.hpp"
#include "tvolap/spectral.hpp"

namespace tvolap {

/// Periodic Hann window of length 2L for hop size L:
///   w(n) = 1 - cos(2 pi n / 2L),  0 <= n < 2L.
/// Peak value 2 at n = L, endpoints 0. Shifted copies at hop L sum to the
/// constant 2 everywhere.
Eigen::ArrayXd hann_window(Index hop);

/// Frequency-domain partitions of an impulse response: per channel, M frames
/// of transform length 4L covering non-overlapping 2L slices of the response.
/// Immutable after construction (treat as read-only; share via shared_ptr).
struct FilterPartitionSet {
    Index hop = 0;             // L
    Index partition_count = 0; // M = ceil(source_length / 2L)
    Index channels = 0;
    Index source_length = 0;   // original impulse-response length
    double normalization_gain = 0.5;
    double sample_rate = 48000.0;
    std::vector<std::vector<SpectrumFrame>> partitions; // [channel][m]

    Index transform_length() const { return 4 * hop; }
    Index padded_length() const { return 2 * hop * partition_count; }
};

/// Slice the impulse response into M = ceil(N / 2L) rectangular partitions of
/// length 2L (tail zero-padded), zero-pad each to 4L and transform.
/// `min_partitions` forces extra all-zero partitions so a shorter response
/// can replace a longer one in a running engine.
FilterPartitionSet partition(const ImpulseResponse& ir, Index hop, Index min_partitions = 1);

/// Inverse of partition(): inverse-transform every partition, drop the 2L of
/// transform padding, and concatenate. Returns the source response zero-padded
/// to M*2L samples.
ImpulseResponse reassemble(const FilterPartitionSet& set);

} // namespace tvolap
