#include "tvolap/spectral.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace tvolap {
namespace {

using cd = std::complex<double>;

constexpr double kPi = std::numbers::pi;

// Immutable per-size tables: butterfly twiddles for the half-length complex
// transform plus the phasors that tangle/untangle the packed real data.
struct FftTables {
    Index n_complex = 0;
    std::vector<Index> bit_reverse; // n_complex entries
    std::vector<cd> twiddle;        // e^{-2 pi i j / n_complex}, j < n_complex/2
    std::vector<cd> pack;           // e^{-2 pi i k / (2 n_complex)}, k <= n_complex
};

const FftTables& tables_for(Index n_complex) {
    static std::mutex mutex;
    static std::map<Index, std::unique_ptr<const FftTables>> cache;

    std::scoped_lock lock(mutex);
    auto it = cache.find(n_complex);
    if (it == cache.end()) {
        auto t = std::make_unique<FftTables>();
        t->n_complex = n_complex;

        int bits = 0;
        while ((Index{1} << bits) < n_complex)
            ++bits;
        t->bit_reverse.resize(static_cast<std::size_t>(n_complex));
        for (Index i = 0; i < n_complex; ++i) {
            Index r = 0;
            for (int b = 0; b < bits; ++b)
                r |= ((i >> b) & 1) << (bits - 1 - b);
            t->bit_reverse[static_cast<std::size_t>(i)] = r;
        }

        t->twiddle.resize(static_cast<std::size_t>(n_complex / 2));
        for (Index j = 0; j < n_complex / 2; ++j) {
            const double angle = -2.0 * kPi * static_cast<double>(j) / static_cast<double>(n_complex);
            t->twiddle[static_cast<std::size_t>(j)] = {std::cos(angle), std::sin(angle)};
        }

        const Index n_real = 2 * n_complex;
        t->pack.resize(static_cast<std::size_t>(n_complex + 1));
        for (Index k = 0; k <= n_complex; ++k) {
            const double angle = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n_real);
            t->pack[static_cast<std::size_t>(k)] = {std::cos(angle), std::sin(angle)};
        }

        it = cache.emplace(n_complex, std::move(t)).first;
    }
    return *it->second;
}

// Iterative radix-2 decimation-in-time transform over the packed buffer.
void fft_in_place(std::vector<cd>& a, const FftTables& t, bool inverse) {
    const Index n = t.n_complex;
    for (Index i = 0; i < n; ++i) {
        const Index j = t.bit_reverse[static_cast<std::size_t>(i)];
        if (j > i)
            std::swap(a[static_cast<std::size_t>(i)], a[static_cast<std::size_t>(j)]);
    }
    for (Index len = 2; len <= n; len <<= 1) {
        const Index stride = n / len;
        const Index half = len / 2;
        for (Index base = 0; base < n; base += len) {
            for (Index k = 0; k < half; ++k) {
                cd w = t.twiddle[static_cast<std::size_t>(k * stride)];
                if (inverse)
                    w = std::conj(w);
                const cd u = a[static_cast<std::size_t>(base + k)];
                const cd v = a[static_cast<std::size_t>(base + k + half)] * w;
                a[static_cast<std::size_t>(base + k)] = u + v;
                a[static_cast<std::size_t>(base + k + half)] = u - v;
            }
        }
    }
}

} // namespace

bool is_power_of_two(Index n) {
    return n > 0 && (n & (n - 1)) == 0;
}

SpectrumFrame forward_real(const Eigen::Ref<const Eigen::ArrayXd>& block) {
    const Index n = block.size();
    if (n < 8 || !is_power_of_two(n))
        throw InvalidSizeError("forward_real: block length must be a power of two >= 8, got " +
                               std::to_string(n));

    const Index nc = n / 2;
    const FftTables& t = tables_for(nc);

    std::vector<cd> z(static_cast<std::size_t>(nc));
    for (Index j = 0; j < nc; ++j)
        z[static_cast<std::size_t>(j)] = {block[2 * j], block[2 * j + 1]};
    fft_in_place(z, t, false);

    Eigen::ArrayXcd bins(nc + 1);
    for (Index k = 0; k <= nc; ++k) {
        const cd zk = z[static_cast<std::size_t>(k % nc)];
        const cd zm = std::conj(z[static_cast<std::size_t>((nc - k) % nc)]);
        const cd even = 0.5 * (zk + zm);
        const cd odd = cd{0.0, -0.5} * (zk - zm);
        bins[k] = even + t.pack[static_cast<std::size_t>(k)] * odd;
    }
    // Real input: DC and Nyquist are exactly real by construction.
    bins[0] = cd{bins[0].real(), 0.0};
    bins[nc] = cd{bins[nc].real(), 0.0};
    return {std::move(bins), n};
}

Eigen::ArrayXd inverse_real(const SpectrumFrame& spec) {
    const Index n = spec.transform_length;
    if (n < 8 || !is_power_of_two(n))
        throw InvalidSizeError("inverse_real: transform length must be a power of two >= 8, got " +
                               std::to_string(n));
    const Index nc = n / 2;
    if (spec.bins.size() != nc + 1)
        throw InvalidSizeError("inverse_real: expected " + std::to_string(nc + 1) + " bins, got " +
                               std::to_string(spec.bins.size()));
    if (spec.bins[0].imag() != 0.0 || spec.bins[nc].imag() != 0.0)
        throw InvalidSpectrumError("inverse_real: DC and Nyquist bins must have zero imaginary part");

    const FftTables& t = tables_for(nc);

    std::vector<cd> z(static_cast<std::size_t>(nc));
    for (Index k = 0; k < nc; ++k) {
        const cd xk = spec.bins[k];
        const cd xm = std::conj(spec.bins[nc - k]);
        const cd even = 0.5 * (xk + xm);
        const cd odd = 0.5 * (xk - xm) * std::conj(t.pack[static_cast<std::size_t>(k)]);
        z[static_cast<std::size_t>(k)] = even + cd{0.0, 1.0} * odd;
    }
    fft_in_place(z, t, true);

    Eigen::ArrayXd out(n);
    const double scale = 1.0 / static_cast<double>(nc);
    for (Index j = 0; j < nc; ++j) {
        out[2 * j] = z[static_cast<std::size_t>(j)].real() * scale;
        out[2 * j + 1] = z[static_cast<std::size_t>(j)].imag() * scale;
    }
    return out;
}

void mac_in_place(SpectrumFrame& acc, const SpectrumFrame& a, const SpectrumFrame& b) {
    if (acc.transform_length != a.transform_length || a.transform_length != b.transform_length)
        throw InvalidSizeError("mac: transform lengths differ");
    if (acc.bins.size() != a.bins.size() || a.bins.size() != b.bins.size())
        throw InvalidSizeError("mac: bin counts differ");
    acc.bins += a.bins * b.bins;
}

SpectrumFrame mac(const SpectrumFrame& acc, const SpectrumFrame& a, const SpectrumFrame& b) {
    SpectrumFrame out{acc.bins, acc.transform_length};
    mac_in_place(out, a, b);
    return out;
}

} // namespace tvolap
