#pragma once

#include <string>

#include "tvolap/audio_buffer.hpp"

namespace tvolap {

enum class WavFormat { Pcm16, Pcm24, Float32 };

/// RIFF/WAVE reader for PCM 16/24-bit and IEEE float 32-bit, 1-16 channels
/// (plain and WAVE_FORMAT_EXTENSIBLE headers). Integer samples are scaled by
/// 1 / 2^(bits-1); parse failures throw WavError carrying the byte offset.
AudioBuffer read_wav(const std::string& path);

/// Write all channels. PCM formats round and clamp to full scale; float32
/// stores the cast of each sample, so float32 data round-trips bit-exactly.
void write_wav(const std::string& path, const AudioBuffer& buf,
               WavFormat format = WavFormat::Float32);

} // namespace tvolap
