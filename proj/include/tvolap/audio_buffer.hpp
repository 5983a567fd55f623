#pragma once

#include <Eigen/Dense>

#include "tvolap/errors.hpp"

namespace tvolap {

using Eigen::Index;

/// Multichannel audio held planar: one column per channel, one row per frame.
/// Samples are 64-bit floats throughout the library.
struct AudioBuffer {
    Eigen::ArrayXXd samples; // frames x channels
    double sample_rate = 48000.0;

    AudioBuffer() = default;
    AudioBuffer(Eigen::ArrayXXd s, double fs) : samples(std::move(s)), sample_rate(fs) {}

    Index frames() const { return samples.rows(); }
    Index channels() const { return samples.cols(); }

    /// View of one channel (contiguous, column-major storage).
    auto channel(Index c) { return samples.col(c); }
    auto channel(Index c) const { return samples.col(c); }
};

/// Time-domain filter impulse responses, one column per channel.
/// All channels share a common length.
struct ImpulseResponse {
    Eigen::ArrayXXd samples; // taps x channels
    double sample_rate = 48000.0;

    ImpulseResponse() = default;
    ImpulseResponse(Eigen::ArrayXXd s, double fs) : samples(std::move(s)), sample_rate(fs) {}

    Index length() const { return samples.rows(); }
    Index channels() const { return samples.cols(); }

    auto channel(Index c) { return samples.col(c); }
    auto channel(Index c) const { return samples.col(c); }
};

/// Single-channel convenience constructors.
inline AudioBuffer mono_buffer(const Eigen::ArrayXd& x, double fs) {
    AudioBuffer b;
    b.samples = x.matrix();
    b.sample_rate = fs;
    return b;
}

inline ImpulseResponse mono_ir(const Eigen::ArrayXd& h, double fs) {
    ImpulseResponse ir;
    ir.samples = h.matrix();
    ir.sample_rate = fs;
    return ir;
}

/// Duplicate a mono buffer across `channels` lanes (1-in, c-out fan-out).
inline AudioBuffer fan_out(const AudioBuffer& mono, Index channels) {
    if (mono.channels() != 1)
        throw InvalidInputError("fan_out expects a mono buffer");
    AudioBuffer b;
    b.sample_rate = mono.sample_rate;
    b.samples = mono.samples.col(0).replicate(1, channels);
    return b;
}

} // namespace tvolap
