#pragma once

#include <cstdint>

#include "tvolap/audio_buffer.hpp"

namespace tvolap {

AudioBuffer gen_ones(Index n, double f_s = 48000.0);

/// sin(2 pi f t / f_s); rejects f >= f_s/2.
AudioBuffer gen_sine(double freq, Index n, double f_s);

/// Seeded pink noise: uniform white noise shaped by a fixed 7-state
/// pole-zero cascade approximating -3 dB/octave (about +-0.5 dB over the
/// audio band). Deterministic across platforms for a given seed.
AudioBuffer gen_pink(std::uint64_t seed, Index n, double f_s = 48000.0);

/// Length-n response that is `gain` at `delay` and zero elsewhere.
ImpulseResponse delta_ir(double gain, Index n, double f_s = 48000.0,
                         Index delay = 0, Index channels = 1);

/// Two-channel free-field surrogate for a measured binaural response:
/// a direct tap per ear plus a decaying noise tail standing in for the room.
/// The tail depends on seed and ear only, never on azimuth (same room), so
/// rotating the source moves and attenuates the direct taps alone.
/// At 90 degrees the far ear lags by half a wavelength of 750 Hz, which
/// flips the interaural phase of a 750 Hz carrier.
ImpulseResponse synthetic_binaural_ir(double azimuth_deg, Index n_ir, double f_s,
                                      std::uint64_t seed = 7);

} // namespace tvolap
