#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tvolap/audio_buffer.hpp"
#include "tvolap/reference.hpp"

namespace tvolap {

/// Measured switching behavior of one engine run. All sample positions are
/// input-aligned: the engine's stream delay has already been removed, so
/// position t lines up with input sample t and with direct convolution.
struct SwitchMetrics {
    std::string algorithm;
    Index hop = 0;
    Index audio_latency = 0;
    Index stream_delay = 0;
    Index switching_latency = 0;       // analytic figure reported by the engine
    Index switch_boundary = 0;         // hop boundary the exchange was applied at
    Index transition_start = -1;       // first departure from the old-filter output
    Index transition_width = 0;        // first fully-settled sample minus the boundary
    double max_step_transition = 0.0;  // largest sample step inside [boundary, settled]
    double max_step_steady = 0.0;      // largest sample step outside it
};

struct SwitchRun {
    Eigen::ArrayXXd output;   // the switched run
    Eigen::ArrayXXd old_ref;  // same engine, old filter throughout
    Eigen::ArrayXXd new_ref;  // same engine, new filter throughout
    SwitchMetrics metrics;
    double engine_seconds = 0.0;  // wall-clock spent inside process(), switched run only
};

/// Run `algorithm` over the input with one filter exchange. The requested
/// switch sample is quantized to the nearest hop boundary (reported in the
/// metrics); the exchange is staged so that the output departs from the old
/// response no earlier than that boundary. A null `fade` leaves the
/// crossfaded direct form at its default (cosine blend of one hop).
/// Mono input is fanned out to the filter's channel count.
SwitchRun run_switch(const std::string& algorithm, const AudioBuffer& input,
                     const ImpulseResponse& ir_a, const ImpulseResponse& ir_b,
                     Index hop, Index requested_switch_sample,
                     const CrossfadeConfig* fade = nullptr);

struct CompareMetrics {
    std::string fade_shape;  // hann or linear
    Index fade_duration = 0;
    Index window_begin = 0;  // input-aligned analysis window around the switch
    Index window_end = 0;
    double max_abs_diff = 0.0;  // over the whole run
    double rms_diff = 0.0;      // over the analysis window
    double output_rms = 0.0;    // partitioned-engine output over the same window
    double diff_db = 0.0;       // 20 log10(rms_diff / output_rms)
};

struct CompareRun {
    SwitchRun tvolap;
    SwitchRun crossfaded;
    Eigen::ArrayXXd difference;
    CompareMetrics metrics;
};

/// Partitioned engine versus crossfaded dual direct convolution, same input,
/// same filter pair, fade duration = hop.
CompareRun run_compare(const AudioBuffer& input, const ImpulseResponse& ir_a,
                       const ImpulseResponse& ir_b, Index hop,
                       Index requested_switch_sample,
                       CrossfadeConfig::Shape shape = CrossfadeConfig::Shape::HannComplementary);

std::string metrics_csv(const std::vector<SwitchMetrics>& rows);
std::string metrics_json(const std::vector<SwitchMetrics>& rows);
std::string compare_csv(const std::vector<CompareMetrics>& rows);
std::string compare_json(const std::vector<CompareMetrics>& rows);

/// Sample dump around the switch boundary for external plotting:
/// offset relative to the boundary, switched output, old and new references.
std::string transition_csv(const SwitchRun& run, Index before, Index after);

} // namespace tvolap
