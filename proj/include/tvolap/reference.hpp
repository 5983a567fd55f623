#pragma once

#include <memory>
#include <string>

#include <Eigen/Dense>

#include "tvolap/audio_buffer.hpp"
#include "tvolap/engine.hpp"

namespace tvolap {

/// Plain time-domain convolution, channel by channel. Output has
/// x.frames() + h.length() - 1 frames. This is the ground truth the
/// streaming engines are checked against.
AudioBuffer direct_convolve(const AudioBuffer& x, const ImpulseResponse& h);

struct CrossfadeConfig {
    enum class Shape { HannComplementary, Linear };
    Index duration = 1;  // samples; 1 is a hard switch
    Shape shape = Shape::HannComplementary;
};

/// Common face of the streaming convolvers. All of them consume and produce
/// fixed-size hops; a staged filter takes effect at the next hop boundary.
class StreamingProcessor {
public:
    virtual ~StreamingProcessor() = default;

    virtual std::string name() const = 0;
    virtual Index hop() const = 0;
    virtual Index channels() const = 0;

    /// Input-to-output latency in the block-processing sense: the hop of
    /// buffering plus any stream offset.
    virtual Index latency() const = 0;
    /// Offset of the concatenated output relative to direct convolution.
    virtual Index stream_delay() const = 0;
    /// Samples from a switch boundary until the output is fully governed by
    /// the new filter.
    virtual Index switching_latency() const = 0;

    /// Consume hop() x channels() samples, produce the same shape.
    virtual Eigen::ArrayXXd process(const Eigen::Ref<const Eigen::ArrayXXd>& input) = 0;

    /// Stage a replacement impulse response, applied at the next hop.
    virtual void set_filter(const ImpulseResponse& ir) = 0;

    virtual void reset() = 0;
};

/// Sample-by-sample FIR with a hard filter switch at hop boundaries.
class DirectProcessor : public StreamingProcessor {
public:
    DirectProcessor(const ImpulseResponse& ir, Index hop);

    std::string name() const override { return "tdc"; }
    Index hop() const override { return hop_; }
    Index channels() const override { return channels_; }
    Index latency() const override { return 0; }
    Index stream_delay() const override { return 0; }
    Index switching_latency() const override { return 0; }

    Eigen::ArrayXXd process(const Eigen::Ref<const Eigen::ArrayXXd>& input) override;
    void set_filter(const ImpulseResponse& ir) override;
    void reset() override;

private:
    Index hop_ = 0;
    Index taps_ = 0;
    Index channels_ = 0;
    Eigen::ArrayXXd coeffs_;          // taps x channels
    Eigen::ArrayXXd pending_coeffs_;  // empty when nothing staged
    Eigen::ArrayXXd history_;         // (taps-1) x channels, most recent last
};

/// Two time-domain convolvers on a shared input delay line, blended by a
/// complementary gain pair while a switch is in flight.
class CfTdcProcessor : public StreamingProcessor {
public:
    CfTdcProcessor(const ImpulseResponse& ir, Index hop,
                   CrossfadeConfig fade = CrossfadeConfig{});

    std::string name() const override { return "cf-tdc"; }
    Index hop() const override { return hop_; }
    Index channels() const override { return channels_; }
    Index latency() const override { return 0; }
    Index stream_delay() const override { return 0; }
    Index switching_latency() const override { return fade_.duration; }

    Eigen::ArrayXXd process(const Eigen::Ref<const Eigen::ArrayXXd>& input) override;
    void set_filter(const ImpulseResponse& ir) override;
    /// As set_filter but with a one-off fade configuration.
    void switch_filter(const ImpulseResponse& ir, const CrossfadeConfig& fade);
    void reset() override;

    bool fading() const { return fade_remaining_ > 0; }

private:
    double new_filter_gain(Index t) const;  // t samples past the switch boundary

    Index hop_ = 0;
    Index taps_ = 0;
    Index channels_ = 0;
    CrossfadeConfig fade_;
    Eigen::ArrayXXd coeffs_;
    Eigen::ArrayXXd old_coeffs_;
    Eigen::ArrayXXd pending_coeffs_;
    CrossfadeConfig pending_fade_;
    bool pending_ = false;
    Index fade_remaining_ = 0;
    Index fade_elapsed_ = 0;
    Eigen::ArrayXXd history_;
};

/// Overlap-add fast convolution: block length N equals the filter length,
/// transforms of length 2N, the saved second half of each block is added to
/// the next output. The saved remainder is not recomputed on a switch, so a
/// filter change leaves one block of old-filter contribution behind.
class OlaProcessor : public StreamingProcessor {
public:
    explicit OlaProcessor(const ImpulseResponse& ir);

    std::string name() const override { return "ola"; }
    Index hop() const override { return block_; }
    Index channels() const override { return channels_; }
    Index latency() const override { return block_; }
    Index stream_delay() const override { return 0; }
    Index switching_latency() const override { return 0; }

    Eigen::ArrayXXd process(const Eigen::Ref<const Eigen::ArrayXXd>& input) override;
    void set_filter(const ImpulseResponse& ir) override;
    void reset() override;

private:
    Index block_ = 0;
    Index channels_ = 0;
    std::vector<SpectrumFrame> filter_spectra_;   // per channel, length 2N
    std::vector<SpectrumFrame> pending_spectra_;
    Eigen::ArrayXXd remainder_;                   // N x channels
    Eigen::ArrayXd padded_;
};

/// Overlap-save fast convolution: a sliding 2N input window, keep the last N
/// output samples. The window is input only, so a switch is complete within
/// the very block it applies to.
class OlsProcessor : public StreamingProcessor {
public:
    explicit OlsProcessor(const ImpulseResponse& ir);

    std::string name() const override { return "ols"; }
    Index hop() const override { return block_; }
    Index channels() const override { return channels_; }
    Index latency() const override { return block_; }
    Index stream_delay() const override { return 0; }
    Index switching_latency() const override { return 0; }

    Eigen::ArrayXXd process(const Eigen::Ref<const Eigen::ArrayXXd>& input) override;
    void set_filter(const ImpulseResponse& ir) override;
    void reset() override;

private:
    Index block_ = 0;
    Index channels_ = 0;
    std::vector<SpectrumFrame> filter_spectra_;
    std::vector<SpectrumFrame> pending_spectra_;
    Eigen::ArrayXXd previous_block_;  // N x channels
    Eigen::ArrayXd window_buf_;
};

/// Weighted overlap-add: block N equals the filter length, hop N/2,
/// square-root Hann on both analysis and synthesis. The convolution tail
/// beyond the block is overlap-added unwindowed so the result stays exact
/// for a fixed filter; a switch settles after one hop.
class WolaProcessor : public StreamingProcessor {
public:
    explicit WolaProcessor(const ImpulseResponse& ir);

    std::string name() const override { return "wola"; }
    Index hop() const override { return block_ / 2; }
    Index channels() const override { return channels_; }
    Index latency() const override { return block_; }
    Index stream_delay() const override { return block_ / 2; }
    Index switching_latency() const override { return block_ / 2; }

    Eigen::ArrayXXd process(const Eigen::Ref<const Eigen::ArrayXXd>& input) override;
    void set_filter(const ImpulseResponse& ir) override;
    void reset() override;

private:
    Index block_ = 0;
    Index channels_ = 0;
    Eigen::ArrayXd analysis_;  // sqrt Hann, length N, also the synthesis window
    std::vector<SpectrumFrame> filter_spectra_;
    std::vector<SpectrumFrame> pending_spectra_;
    Eigen::ArrayXXd history_;      // N/2 x channels
    Eigen::ArrayXXd accumulator_;  // 2N x channels
    Eigen::ArrayXd padded_;
};

/// The partitioned engine behind the common streaming face.
class TvolapProcessor : public StreamingProcessor {
public:
    TvolapProcessor(const ImpulseResponse& ir, Index hop);

    std::string name() const override { return "tvolap"; }
    Index hop() const override { return engine_.hop(); }
    Index channels() const override { return engine_.channels(); }
    Index latency() const override { return engine_.latency(); }
    Index stream_delay() const override { return engine_.stream_delay(); }
    Index switching_latency() const override { return engine_.switching_latency(); }

    Eigen::ArrayXXd process(const Eigen::Ref<const Eigen::ArrayXXd>& input) override;
    void set_filter(const ImpulseResponse& ir) override;
    void reset() override;

    TvolapEngine& engine() { return engine_; }

private:
    TvolapEngine engine_;
};

/// Factory keyed by the names used on the command line.
std::unique_ptr<StreamingProcessor> make_processor(const std::string& name,
                                                   const ImpulseResponse& ir,
                                                   Index hop);

} // namespace tvolap
