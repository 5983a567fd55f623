#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tvolap {

using Eigen::Index;

/// Analytic per-sample operation count and latency figures for one
/// algorithm/configuration. `switching_latency` is empty for the crossfaded
/// direct form, whose settling time is whatever fade length is configured.
struct CostReport {
    std::string algorithm;  // tdc, cf-tdc, ola, wola, tvolap
    Index N_IR = 0;
    Index block = 0;  // 2L for the partitioned engine, N_IR otherwise
    double f_s = 48000.0;
    double ops_per_sample = 0.0;
    double mflops = 0.0;
    Index audio_latency = 0;
    std::optional<Index> switching_latency;
    double extra_switch_mflops = 0.0;  // cf-tdc only, cost of the fade itself
    std::string note;  // records known alternative readings of published figures
};

/// Real-input FFT cost of transform length 2N amortized over the N fresh
/// samples per block: 5*log2(N) + 14 ops/sample (radix-2 butterflies at 4
/// multiplies + 6 additions, plus the real-input pack/unpack pass).
/// N must be a power of two >= 8.
double fft_ops_per_sample(Index n);

/// Build the report for one algorithm. `block` must equal `n_ir` for the
/// block convolvers; for the partitioned engine it is the stepping block 2L
/// and the partition count is ceil(n_ir / block).
CostReport cost(const std::string& algorithm, Index n_ir, double f_s, Index block);

/// Line-oriented CSV with a header row; one line per report.
std::string to_csv(const std::vector<CostReport>& reports);

/// JSON array of objects mirroring the CostReport field names.
std::string to_json(const std::vector<CostReport>& reports);

} // namespace tvolap
