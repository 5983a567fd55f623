#include "tvolap/engine.hpp"

#include <utility>

#include "tvolap/errors.hpp"

namespace tvolap {

TvolapEngine::TvolapEngine(std::shared_ptr<const FilterPartitionSet> filter)
    : filter_(std::move(filter)) {
    if (!filter_)
        throw InvalidConfigurationError("engine requires a filter partition set");
    hop_ = filter_->hop;
    partition_count_ = filter_->partition_count;
    channels_ = filter_->channels;
    if (hop_ < 2 || partition_count_ < 1 || channels_ < 1)
        throw InvalidConfigurationError("degenerate filter partition set");

    window_ = hann_window(hop_);
    const Index n = filter_->transform_length();
    state_.resize(static_cast<std::size_t>(channels_));
    for (auto& st : state_) {
        st.history = Eigen::ArrayXd::Zero(hop_);
        st.spectra.assign(static_cast<std::size_t>(delay_line_depth()),
                          SpectrumFrame::zero(n));
        st.tail_prev = Eigen::ArrayXd::Zero(2 * hop_);
        st.tail_prev2 = Eigen::ArrayXd::Zero(2 * hop_);
        st.carry = Eigen::ArrayXd::Zero(hop_);
    }
    padded_block_ = Eigen::ArrayXd::Zero(n);
    accumulator_ = SpectrumFrame::zero(n);
}

TvolapEngine::TvolapEngine(const FilterPartitionSet& filter)
    : TvolapEngine(std::make_shared<FilterPartitionSet>(filter)) {}

void TvolapEngine::exchange_filter(std::shared_ptr<const FilterPartitionSet> next) {
    if (!next)
        throw IncompatibleFilterError("replacement filter is null");
    if (next->hop != hop_)
        throw IncompatibleFilterError("replacement filter hop differs");
    if (next->partition_count != partition_count_)
        throw IncompatibleFilterError("replacement filter partition count differs");
    if (next->channels != channels_)
        throw IncompatibleFilterError("replacement filter channel count differs");
    std::lock_guard<std::mutex> lock(pending_mutex_);
    pending_ = std::move(next);  // last staged filter wins
}

void TvolapEngine::exchange_filter(const FilterPartitionSet& next) {
    exchange_filter(std::make_shared<FilterPartitionSet>(next));
}

void TvolapEngine::latch_pending_filter() {
    std::lock_guard<std::mutex> lock(pending_mutex_);
    if (pending_)
        filter_ = std::move(pending_);
}

Eigen::ArrayXXd TvolapEngine::process(const Eigen::Ref<const Eigen::ArrayXXd>& input) {
    latch_pending_filter();

    const Index L = hop_;
    if (input.rows() != L)
        throw InvalidSizeError("process() expects exactly one hop of input per call");
    if (input.cols() != channels_)
        throw InvalidInputError("input channel count does not match the filter");

    const Index depth = delay_line_depth();
    const Index new_head = (ring_head_ + depth - 1) % depth;
    const double gain = filter_->normalization_gain;

    Eigen::ArrayXXd output(L, channels_);
    for (Index c = 0; c < channels_; ++c) {
        auto& st = state_[static_cast<std::size_t>(c)];

        padded_block_.setZero();
        padded_block_.head(L) = st.history * window_.head(L);
        padded_block_.segment(L, L) = input.col(c) * window_.tail(L);
        st.history = input.col(c);

        st.spectra[static_cast<std::size_t>(new_head)] = forward_real(padded_block_);
        ++counts_.forward_transforms;

        accumulator_.set_zero();
        const auto& parts = filter_->partitions[static_cast<std::size_t>(c)];
        for (Index m = 0; m < partition_count_; ++m) {
            const Index slot = (new_head + 2 * m) % depth;
            mac_in_place(accumulator_, parts[static_cast<std::size_t>(m)],
                         st.spectra[static_cast<std::size_t>(slot)]);
            ++counts_.spectral_macs;
        }

        Eigen::ArrayXd y = inverse_real(accumulator_);
        ++counts_.inverse_transforms;

        Eigen::ArrayXd overlapped = y.head(2 * L) + st.tail_prev2;
        output.col(c) = gain * (overlapped.head(L) + st.carry);
        st.carry = overlapped.tail(L);

        std::swap(st.tail_prev2, st.tail_prev);
        st.tail_prev = y.tail(2 * L);
    }
    ring_head_ = new_head;
    return output;
}

void TvolapEngine::reset() {
    for (auto& st : state_) {
        st.history.setZero();
        for (auto& frame : st.spectra)
            frame.set_zero();
        st.tail_prev.setZero();
        st.tail_prev2.setZero();
        st.carry.setZero();
    }
    ring_head_ = 0;
}

} // namespace tvolap
