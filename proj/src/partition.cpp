#include "tvolap/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace tvolap {

Eigen::ArrayXd hann_window(Index hop) {
    if (hop < 2)
        throw InvalidSizeError("hann_window: hop size must be >= 2, got " + std::to_string(hop));
    const Index n = 2 * hop;
    Eigen::ArrayXd w(n);
    for (Index i = 0; i < n; ++i)
        w[i] = 1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    return w;
}

FilterPartitionSet partition(const ImpulseResponse& ir, Index hop, Index min_partitions) {
    if (ir.length() < 1 || ir.channels() < 1)
        throw InvalidInputError("partition: impulse response is empty");
    if (hop < 2 || !is_power_of_two(4 * hop))
        throw InvalidSizeError("partition: 4L must be a power of two, got L = " + std::to_string(hop));

    const Index slice = 2 * hop;
    const Index m = std::max((ir.length() + slice - 1) / slice, std::max<Index>(min_partitions, 1));

    FilterPartitionSet set;
    set.hop = hop;
    set.partition_count = m;
    set.channels = ir.channels();
    set.source_length = ir.length();
    set.sample_rate = ir.sample_rate;
    set.partitions.resize(static_cast<std::size_t>(ir.channels()));

    Eigen::ArrayXd padded = Eigen::ArrayXd::Zero(4 * hop);
    for (Index c = 0; c < ir.channels(); ++c) {
        auto& frames = set.partitions[static_cast<std::size_t>(c)];
        frames.reserve(static_cast<std::size_t>(m));
        for (Index p = 0; p < m; ++p) {
            const Index begin = p * slice;
            const Index count = std::clamp<Index>(ir.length() - begin, 0, slice);
            padded.setZero();
            if (count > 0)
                padded.head(count) = ir.samples.col(c).segment(begin, count);
            frames.push_back(forward_real(padded));
        }
    }
    return set;
}

ImpulseResponse reassemble(const FilterPartitionSet& set) {
    const Index slice = 2 * set.hop;
    ImpulseResponse ir;
    ir.sample_rate = set.sample_rate;
    ir.samples = Eigen::ArrayXXd::Zero(slice * set.partition_count, set.channels);
    for (Index c = 0; c < set.channels; ++c) {
        for (Index p = 0; p < set.partition_count; ++p) {
            const Eigen::ArrayXd block = inverse_real(set.partitions[static_cast<std::size_t>(c)][static_cast<std::size_t>(p)]);
            ir.samples.col(c).segment(p * slice, slice) = block.head(slice);
        }
    }
    return ir;
}

} // namespace tvolap
