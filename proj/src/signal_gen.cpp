#include "tvolap/signal_gen.hpp"

#include <cmath>
#include <random>

#include "tvolap/errors.hpp"

namespace tvolap {

namespace {

// 53-bit uniform in (-1, 1); bypasses std distributions so that streams are
// identical across standard libraries.
double uniform_pm1(std::mt19937_64& g) {
    return 2.0 * (static_cast<double>(g() >> 11) * 0x1.0p-53) - 1.0;
}

} // namespace

AudioBuffer gen_ones(Index n, double f_s) {
    if (n < 1)
        throw InvalidInputError("gen_ones: need at least one sample");
    return mono_buffer(Eigen::ArrayXd::Ones(n), f_s);
}

AudioBuffer gen_sine(double freq, Index n, double f_s) {
    if (n < 1)
        throw InvalidInputError("gen_sine: need at least one sample");
    if (!(f_s > 0.0))
        throw InvalidInputError("gen_sine: sample rate must be positive");
    if (!(freq > 0.0) || freq >= 0.5 * f_s)
        throw InvalidFrequencyError("gen_sine: frequency must lie in (0, f_s/2)");
    Eigen::ArrayXd x(n);
    const double w = 2.0 * EIGEN_PI * freq / f_s;
    for (Index t = 0; t < n; ++t)
        x(t) = std::sin(w * static_cast<double>(t));
    return mono_buffer(x, f_s);
}

AudioBuffer gen_pink(std::uint64_t seed, Index n, double f_s) {
    if (n < 1)
        throw InvalidInputError("gen_pink: need at least one sample");
    std::mt19937_64 g(seed);
    // Kellet's pole-zero cascade; about -3 dB/octave over the audio band.
    double b0 = 0, b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;
    Eigen::ArrayXd x(n);
    for (Index t = 0; t < n; ++t) {
        const double w = uniform_pm1(g);
        b0 = 0.99886 * b0 + w * 0.0555179;
        b1 = 0.99332 * b1 + w * 0.0750759;
        b2 = 0.96900 * b2 + w * 0.1538520;
        b3 = 0.86650 * b3 + w * 0.3104856;
        b4 = 0.55000 * b4 + w * 0.5329522;
        b5 = -0.7616 * b5 - w * 0.0168980;
        x(t) = 0.11 * (b0 + b1 + b2 + b3 + b4 + b5 + b6 + w * 0.5362);
        b6 = w * 0.115926;
    }
    return mono_buffer(x, f_s);
}

ImpulseResponse delta_ir(double gain, Index n, double f_s, Index delay, Index channels) {
    if (n < 1 || channels < 1)
        throw InvalidInputError("delta_ir: need at least one tap and one channel");
    if (delay < 0 || delay >= n)
        throw InvalidInputError("delta_ir: delay outside the response");
    ImpulseResponse ir;
    ir.samples = Eigen::ArrayXXd::Zero(n, channels);
    ir.samples.row(delay).setConstant(gain);
    ir.sample_rate = f_s;
    return ir;
}

ImpulseResponse synthetic_binaural_ir(double azimuth_deg, Index n_ir, double f_s,
                                      std::uint64_t seed) {
    if (n_ir < 128)
        throw InvalidInputError("synthetic_binaural_ir: response too short");
    if (!(f_s > 0.0))
        throw InvalidInputError("synthetic_binaural_ir: sample rate must be positive");

    Eigen::ArrayXXd h = Eigen::ArrayXXd::Zero(n_ir, 2);

    const double lateral = std::sin(azimuth_deg * EIGEN_PI / 180.0);
    const Index base_delay = 2;
    // half of one 750 Hz period at full lateral displacement
    const Index max_itd = static_cast<Index>(std::llround(f_s / 1500.0));
    const Index itd = static_cast<Index>(std::llround(std::abs(lateral) * static_cast<double>(max_itd)));
    const double far_gain = itd == 0 ? 1.0 : 1.0 - 0.75 * std::abs(lateral);
    const Index near = lateral >= 0.0 ? 0 : 1;  // positive azimuth puts the source left
    h(base_delay, near) = 1.0;
    h(base_delay + itd, 1 - near) = far_gain;

    // shared room tail, 30 dB under the direct tap; same for every azimuth
    const Index tail_start = 64;
    const double tau = static_cast<double>(std::max<Index>(256, n_ir / 8));
    for (Index c = 0; c < 2; ++c) {
        std::mt19937_64 g(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(c + 1)));
        for (Index q = tail_start; q < n_ir; ++q)
            h(q, c) += 0.0316 * std::exp(-static_cast<double>(q - tail_start) / tau) * uniform_pm1(g);
    }

    ImpulseResponse ir;
    ir.samples = std::move(h);
    ir.sample_rate = f_s;
    return ir;
}

} // namespace tvolap
