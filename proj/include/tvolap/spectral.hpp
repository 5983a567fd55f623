#pragma once

#include <Eigen/Dense>

#include "tvolap/errors.hpp"

namespace tvolap {

using Eigen::Index;

/// Non-redundant half spectrum of a real-input transform of length
/// `transform_length` (power of two). Holds bins k = 0 .. transform_length/2;
/// bin 0 and the Nyquist bin are purely real.
struct SpectrumFrame {
    Eigen::ArrayXcd bins;
    Index transform_length = 0;

    SpectrumFrame() = default;
    SpectrumFrame(Eigen::ArrayXcd b, Index n) : bins(std::move(b)), transform_length(n) {}

    /// Zero frame of the given transform length.
    static SpectrumFrame zero(Index transform_length) {
        return {Eigen::ArrayXcd::Zero(transform_length / 2 + 1), transform_length};
    }

    Index bin_count() const { return bins.size(); }

    void set_zero() { bins.setZero(); }
};

bool is_power_of_two(Index n);

/// Unscaled forward transform of a real block, returning the non-redundant
/// bins. Sign convention e^{-j 2 pi n k / N}. The block length must be a
/// power of two >= 8.
SpectrumFrame forward_real(const Eigen::Ref<const Eigen::ArrayXd>& block);

/// Inverse of forward_real including the 1/N scaling, so that
/// inverse_real(forward_real(x)) == x. Rejects frames whose DC or Nyquist
/// bin carries a nonzero imaginary part.
Eigen::ArrayXd inverse_real(const SpectrumFrame& spec);

/// acc[k] + a[k]*b[k] per bin. All frames must share a transform length.
SpectrumFrame mac(const SpectrumFrame& acc, const SpectrumFrame& a, const SpectrumFrame& b);

/// In-place variant used on the streaming hot path: acc += a*b.
void mac_in_place(SpectrumFrame& acc, const SpectrumFrame& a, const SpectrumFrame& b);

/// Expression-friendly overload: evaluates any real Eigen array expression.
template <typename Derived>
SpectrumFrame forward_real(const Eigen::ArrayBase<Derived>& block) {
    const Eigen::ArrayXd evaluated = block.derived();
    return forward_real(Eigen::Ref<const Eigen::ArrayXd>(evaluated));
}

} // namespace tvolap
