#include "tvolap/reference.hpp"

#include <cmath>
#include <utility>

#include "tvolap/errors.hpp"

namespace tvolap {

AudioBuffer direct_convolve(const AudioBuffer& x, const ImpulseResponse& h) {
    if (x.frames() == 0 || x.channels() == 0)
        throw InvalidInputError("direct_convolve: empty input");
    if (h.length() == 0 || h.channels() == 0)
        throw InvalidInputError("direct_convolve: empty impulse response");
    if (h.channels() != x.channels() && h.channels() != 1)
        throw InvalidInputError("direct_convolve: channel count mismatch");

    const Index n = x.frames();
    const Index taps = h.length();
    AudioBuffer out;
    out.sample_rate = x.sample_rate;
    out.samples = Eigen::ArrayXXd::Zero(n + taps - 1, x.channels());
    for (Index c = 0; c < x.channels(); ++c) {
        const Index hc = h.channels() == 1 ? 0 : c;
        for (Index q = 0; q < taps; ++q) {
            const double w = h.samples(q, hc);
            if (w != 0.0)
                out.samples.col(c).segment(q, n) += w * x.samples.col(c);
        }
    }
    return out;
}

namespace {

void check_frame(const Eigen::Ref<const Eigen::ArrayXXd>& input, Index hop, Index channels) {
    if (input.rows() != hop)
        throw InvalidSizeError("process() expects exactly one hop of input per call");
    if (input.cols() != channels)
        throw InvalidInputError("input channel count does not match the filter");
}

// Zero-padded block spectra of the response, transform length 2*block.
std::vector<SpectrumFrame> block_filter_spectra(const ImpulseResponse& ir, Index block) {
    std::vector<SpectrumFrame> spectra;
    spectra.reserve(static_cast<std::size_t>(ir.channels()));
    Eigen::ArrayXd padded(2 * block);
    for (Index c = 0; c < ir.channels(); ++c) {
        padded.setZero();
        padded.head(block) = ir.channel(c);
        spectra.push_back(forward_real(padded));
    }
    return spectra;
}

} // namespace

// ---------------------------------------------------------------- DirectProcessor

DirectProcessor::DirectProcessor(const ImpulseResponse& ir, Index hop)
    : hop_(hop), taps_(ir.length()), channels_(ir.channels()), coeffs_(ir.samples) {
    if (hop_ < 1)
        throw InvalidConfigurationError("hop must be positive");
    if (taps_ < 1 || channels_ < 1)
        throw InvalidInputError("empty impulse response");
    history_ = Eigen::ArrayXXd::Zero(taps_ - 1, channels_);
}

void DirectProcessor::set_filter(const ImpulseResponse& ir) {
    if (ir.length() != taps_ || ir.channels() != channels_)
        throw IncompatibleFilterError("replacement filter shape differs");
    pending_coeffs_ = ir.samples;
}

Eigen::ArrayXXd DirectProcessor::process(const Eigen::Ref<const Eigen::ArrayXXd>& input) {
    if (pending_coeffs_.size() > 0) {
        coeffs_ = std::move(pending_coeffs_);
        pending_coeffs_.resize(0, 0);
    }
    check_frame(input, hop_, channels_);

    Eigen::ArrayXXd buf(taps_ - 1 + hop_, channels_);
    buf.topRows(taps_ - 1) = history_;
    buf.bottomRows(hop_) = input;

    Eigen::ArrayXXd out(hop_, channels_);
    for (Index c = 0; c < channels_; ++c)
        for (Index i = 0; i < hop_; ++i)
            out(i, c) = (coeffs_.col(c) * buf.col(c).segment(i, taps_).reverse()).sum();
    history_ = buf.bottomRows(taps_ - 1);
    return out;
}

void DirectProcessor::reset() {
    history_.setZero();
}

// ---------------------------------------------------------------- CfTdcProcessor

CfTdcProcessor::CfTdcProcessor(const ImpulseResponse& ir, Index hop, CrossfadeConfig fade)
    : hop_(hop), taps_(ir.length()), channels_(ir.channels()), fade_(fade), coeffs_(ir.samples) {
    if (hop_ < 1)
        throw InvalidConfigurationError("hop must be positive");
    if (taps_ < 1 || channels_ < 1)
        throw InvalidInputError("empty impulse response");
    if (fade_.duration < 1)
        throw InvalidConfigurationError("crossfade duration must be >= 1");
    old_coeffs_ = Eigen::ArrayXXd::Zero(taps_, channels_);
    history_ = Eigen::ArrayXXd::Zero(taps_ - 1, channels_);
}

double CfTdcProcessor::new_filter_gain(Index t) const {
    const Index d = fade_.duration;
    if (t >= d || d == 1)
        return 1.0;  // duration 1 degenerates to a hard switch at the boundary sample
    const double phase = static_cast<double>(t) / static_cast<double>(d);
    if (fade_.shape == CrossfadeConfig::Shape::Linear)
        return phase;
    return 0.5 * (1.0 - std::cos(EIGEN_PI * phase));
}

void CfTdcProcessor::switch_filter(const ImpulseResponse& ir, const CrossfadeConfig& fade) {
    if (fade_remaining_ > 0 || pending_)
        throw SwitchInProgressError("a crossfade is already in progress");
    if (ir.length() != taps_ || ir.channels() != channels_)
        throw IncompatibleFilterError("replacement filter shape differs");
    if (fade.duration < 1)
        throw InvalidConfigurationError("crossfade duration must be >= 1");
    pending_coeffs_ = ir.samples;
    pending_fade_ = fade;
    pending_ = true;
}

void CfTdcProcessor::set_filter(const ImpulseResponse& ir) {
    switch_filter(ir, fade_);
}

Eigen::ArrayXXd CfTdcProcessor::process(const Eigen::Ref<const Eigen::ArrayXXd>& input) {
    if (pending_) {
        old_coeffs_.swap(coeffs_);
        coeffs_ = std::move(pending_coeffs_);
        fade_ = pending_fade_;
        fade_remaining_ = fade_.duration;
        fade_elapsed_ = 0;
        pending_ = false;
        pending_coeffs_.resize(0, 0);
    }
    check_frame(input, hop_, channels_);

    Eigen::ArrayXXd buf(taps_ - 1 + hop_, channels_);
    buf.topRows(taps_ - 1) = history_;
    buf.bottomRows(hop_) = input;

    Eigen::ArrayXXd out(hop_, channels_);
    for (Index i = 0; i < hop_; ++i) {
        const bool blending = fade_remaining_ > 0;
        const double g_new = blending ? new_filter_gain(fade_elapsed_) : 1.0;
        const double g_old = 1.0 - g_new;
        for (Index c = 0; c < channels_; ++c) {
            const auto window = buf.col(c).segment(i, taps_).reverse();
            const double y_new = (coeffs_.col(c) * window).sum();
            if (blending)
                out(i, c) = g_old * (old_coeffs_.col(c) * window).sum() + g_new * y_new;
            else
                out(i, c) = y_new;
        }
        if (blending) {
            ++fade_elapsed_;
            --fade_remaining_;
        }
    }
    history_ = buf.bottomRows(taps_ - 1);
    return out;
}

void CfTdcProcessor::reset() {
    history_.setZero();
    fade_remaining_ = 0;
    fade_elapsed_ = 0;
}

// ---------------------------------------------------------------- OlaProcessor

OlaProcessor::OlaProcessor(const ImpulseResponse& ir)
    : block_(ir.length()), channels_(ir.channels()) {
    if (block_ < 4 || !is_power_of_two(block_))
        throw InvalidSizeError("block fast convolution needs a power-of-two response length >= 4");
    filter_spectra_ = block_filter_spectra(ir, block_);
    remainder_ = Eigen::ArrayXXd::Zero(block_, channels_);
    padded_ = Eigen::ArrayXd::Zero(2 * block_);
}

void OlaProcessor::set_filter(const ImpulseResponse& ir) {
    if (ir.length() != block_ || ir.channels() != channels_)
        throw IncompatibleFilterError("replacement filter shape differs");
    pending_spectra_ = block_filter_spectra(ir, block_);
}

Eigen::ArrayXXd OlaProcessor::process(const Eigen::Ref<const Eigen::ArrayXXd>& input) {
    if (!pending_spectra_.empty()) {
        // the saved remainder below keeps whatever filter produced it
        filter_spectra_ = std::move(pending_spectra_);
        pending_spectra_.clear();
    }
    check_frame(input, block_, channels_);

    Eigen::ArrayXXd out(block_, channels_);
    SpectrumFrame acc = SpectrumFrame::zero(2 * block_);
    for (Index c = 0; c < channels_; ++c) {
        padded_.setZero();
        padded_.head(block_) = input.col(c);
        const SpectrumFrame x = forward_real(padded_);
        acc.set_zero();
        mac_in_place(acc, x, filter_spectra_[static_cast<std::size_t>(c)]);
        const Eigen::ArrayXd y = inverse_real(acc);
        out.col(c) = y.head(block_) + remainder_.col(c);
        remainder_.col(c) = y.tail(block_);
    }
    return out;
}

void OlaProcessor::reset() {
    remainder_.setZero();
}

// ---------------------------------------------------------------- OlsProcessor

OlsProcessor::OlsProcessor(const ImpulseResponse& ir)
    : block_(ir.length()), channels_(ir.channels()) {
    if (block_ < 4 || !is_power_of_two(block_))
        throw InvalidSizeError("block fast convolution needs a power-of-two response length >= 4");
    filter_spectra_ = block_filter_spectra(ir, block_);
    previous_block_ = Eigen::ArrayXXd::Zero(block_, channels_);
    window_buf_ = Eigen::ArrayXd::Zero(2 * block_);
}

void OlsProcessor::set_filter(const ImpulseResponse& ir) {
    if (ir.length() != block_ || ir.channels() != channels_)
        throw IncompatibleFilterError("replacement filter shape differs");
    pending_spectra_ = block_filter_spectra(ir, block_);
}

Eigen::ArrayXXd OlsProcessor::process(const Eigen::Ref<const Eigen::ArrayXXd>& input) {
    if (!pending_spectra_.empty()) {
        filter_spectra_ = std::move(pending_spectra_);
        pending_spectra_.clear();
    }
    check_frame(input, block_, channels_);

    Eigen::ArrayXXd out(block_, channels_);
    SpectrumFrame acc = SpectrumFrame::zero(2 * block_);
    for (Index c = 0; c < channels_; ++c) {
        window_buf_.head(block_) = previous_block_.col(c);
        window_buf_.tail(block_) = input.col(c);
        const SpectrumFrame x = forward_real(window_buf_);
        acc.set_zero();
        mac_in_place(acc, x, filter_spectra_[static_cast<std::size_t>(c)]);
        const Eigen::ArrayXd y = inverse_real(acc);
        out.col(c) = y.tail(block_);  // first half carries circular wrap, discard
        previous_block_.col(c) = input.col(c);
    }
    return out;
}

void OlsProcessor::reset() {
    previous_block_.setZero();
}

// ---------------------------------------------------------------- WolaProcessor

WolaProcessor::WolaProcessor(const ImpulseResponse& ir)
    : block_(ir.length()), channels_(ir.channels()) {
    if (block_ < 4 || !is_power_of_two(block_))
        throw InvalidSizeError("block fast convolution needs a power-of-two response length >= 4");
    analysis_ = hann_window(block_ / 2).sqrt();
    filter_spectra_ = block_filter_spectra(ir, block_);
    history_ = Eigen::ArrayXXd::Zero(block_ / 2, channels_);
    accumulator_ = Eigen::ArrayXXd::Zero(2 * block_, channels_);
    padded_ = Eigen::ArrayXd::Zero(2 * block_);
}

void WolaProcessor::set_filter(const ImpulseResponse& ir) {
    if (ir.length() != block_ || ir.channels() != channels_)
        throw IncompatibleFilterError("replacement filter shape differs");
    pending_spectra_ = block_filter_spectra(ir, block_);
}

Eigen::ArrayXXd WolaProcessor::process(const Eigen::Ref<const Eigen::ArrayXXd>& input) {
    if (!pending_spectra_.empty()) {
        filter_spectra_ = std::move(pending_spectra_);
        pending_spectra_.clear();
    }
    const Index half = block_ / 2;
    check_frame(input, half, channels_);

    Eigen::ArrayXXd out(half, channels_);
    SpectrumFrame acc = SpectrumFrame::zero(2 * block_);
    for (Index c = 0; c < channels_; ++c) {
        padded_.setZero();
        padded_.head(half) = history_.col(c) * analysis_.head(half);
        padded_.segment(half, half) = input.col(c) * analysis_.tail(half);
        history_.col(c) = input.col(c);

        const SpectrumFrame x = forward_real(padded_);
        acc.set_zero();
        mac_in_place(acc, x, filter_spectra_[static_cast<std::size_t>(c)]);
        Eigen::ArrayXd y = inverse_real(acc);
        // synthesis window over the block itself; the convolution tail beyond
        // it is overlap-added as is, which keeps the identity response exact
        y.head(block_) *= analysis_;

        accumulator_.col(c) += y;
        out.col(c) = 0.5 * accumulator_.col(c).head(half);
        accumulator_.col(c).head(2 * block_ - half) =
            accumulator_.col(c).tail(2 * block_ - half).eval();
        accumulator_.col(c).tail(half).setZero();
    }
    return out;
}

void WolaProcessor::reset() {
    history_.setZero();
    accumulator_.setZero();
}

// ---------------------------------------------------------------- TvolapProcessor

TvolapProcessor::TvolapProcessor(const ImpulseResponse& ir, Index hop)
    : engine_(std::make_shared<FilterPartitionSet>(partition(ir, hop))) {}

Eigen::ArrayXXd TvolapProcessor::process(const Eigen::Ref<const Eigen::ArrayXXd>& input) {
    return engine_.process(input);
}

void TvolapProcessor::set_filter(const ImpulseResponse& ir) {
    engine_.exchange_filter(std::make_shared<FilterPartitionSet>(
        partition(ir, engine_.hop(), engine_.partition_count())));
}

void TvolapProcessor::reset() {
    engine_.reset();
}

// ---------------------------------------------------------------- factory

std::unique_ptr<StreamingProcessor> make_processor(const std::string& name,
                                                   const ImpulseResponse& ir,
                                                   Index hop) {
    if (name == "tdc")
        return std::make_unique<DirectProcessor>(ir, hop);
    if (name == "cf-tdc") {
        CrossfadeConfig fade;
        fade.duration = hop;  // cosine blend as wide as the partitioned engine's transition
        return std::make_unique<CfTdcProcessor>(ir, hop, fade);
    }
    if (name == "ola")
        return std::make_unique<OlaProcessor>(ir);
    if (name == "ols")
        return std::make_unique<OlsProcessor>(ir);
    if (name == "wola")
        return std::make_unique<WolaProcessor>(ir);
    if (name == "tvolap")
        return std::make_unique<TvolapProcessor>(ir, hop);
    throw InvalidConfigurationError("unknown algorithm: " + name);
}

} // namespace tvolap
