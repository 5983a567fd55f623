#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tvolap {

/// Length or size constraint violated (non-power-of-two transform, bad hop, ...).
class InvalidSizeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input data rejected (empty signal, channel mismatch, aliasing frequency, ...).
class InvalidInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Oscillator frequency at or above Nyquist.
class InvalidFrequencyError : public InvalidInputError {
public:
    using InvalidInputError::InvalidInputError;
};

/// SpectrumFrame invariant violated (DC/Nyquist bins must be real).
class InvalidSpectrumError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Replacement filter does not match the running engine configuration.
class IncompatibleFilterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Cost-model parameter combination that the model does not define.
class InvalidConfigurationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A crossfade is already running; a second switch is not defined.
class SwitchInProgressError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// WAV parse failure. Carries the byte offset at which parsing stopped.
class WavError : public std::runtime_error {
public:
    WavError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

} // namespace tvolap
