#include "tvolap/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

#include <nlohmann/json.hpp>

#include "tvolap/errors.hpp"

namespace tvolap {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::unique_ptr<StreamingProcessor> make_proc(const std::string& algorithm,
                                              const ImpulseResponse& ir, Index hop,
                                              const CrossfadeConfig* fade) {
    if (algorithm == "cf-tdc" && fade)
        return std::make_unique<CfTdcProcessor>(ir, hop, *fade);
    return make_processor(algorithm, ir, hop);
}

// Feed the padded input hop by hop; stage the replacement filter right
// before `switch_call` (negative: never). Returns the input-aligned stream.
Eigen::ArrayXXd drive(StreamingProcessor& proc, const Eigen::ArrayXXd& padded,
                      const ImpulseResponse* ir_b, Index switch_call,
                      double* seconds) {
    const Index hop = proc.hop();
    const Index delay = proc.stream_delay();
    const Index calls = padded.rows() / hop + delay / hop;

    Eigen::ArrayXXd stream(calls * hop, padded.cols());
    Eigen::ArrayXXd zeros = Eigen::ArrayXXd::Zero(hop, padded.cols());
    const auto begin = std::chrono::steady_clock::now();
    for (Index k = 0; k < calls; ++k) {
        if (ir_b && k == switch_call)
            proc.set_filter(*ir_b);
        const bool in_range = (k + 1) * hop <= padded.rows();
        stream.middleRows(k * hop, hop) =
            proc.process(in_range ? padded.middleRows(k * hop, hop) : zeros);
    }
    const auto end = std::chrono::steady_clock::now();
    if (seconds)
        *seconds = std::chrono::duration<double>(end - begin).count();
    return stream.middleRows(delay, padded.rows());
}

} // namespace

SwitchRun run_switch(const std::string& algorithm, const AudioBuffer& input,
                     const ImpulseResponse& ir_a, const ImpulseResponse& ir_b,
                     Index hop, Index requested_switch_sample,
                     const CrossfadeConfig* fade) {
    if (input.frames() < 1)
        throw InvalidInputError("run_switch: empty input");
    if (input.sample_rate != ir_a.sample_rate || input.sample_rate != ir_b.sample_rate)
        throw InvalidConfigurationError("run_switch: input and filters must share a sample rate");

    AudioBuffer x = input.channels() == 1 && ir_a.channels() > 1
                        ? fan_out(input, ir_a.channels())
                        : input;

    auto proc = make_proc(algorithm, ir_a, hop, fade);
    auto ref_old = make_proc(algorithm, ir_a, hop, fade);
    auto ref_new = make_proc(algorithm, ir_b, hop, fade);

    const Index h = proc->hop();
    const Index calls_in = (x.frames() + h - 1) / h;
    const Index n = calls_in * h;
    if (requested_switch_sample < 0 || requested_switch_sample >= x.frames())
        throw InvalidConfigurationError("run_switch: switch sample outside the signal");
    Index boundary = ((requested_switch_sample + h / 2) / h) * h;
    boundary = std::min(boundary, (calls_in - 1) * h);

    Eigen::ArrayXXd padded = Eigen::ArrayXXd::Zero(n, x.channels());
    padded.topRows(x.frames()) = x.samples;

    SwitchRun run;
    const Index switch_call = boundary / h + proc->stream_delay() / h;
    run.output = drive(*proc, padded, &ir_b, switch_call, &run.engine_seconds);
    run.old_ref = drive(*ref_old, padded, nullptr, -1, nullptr);
    run.new_ref = drive(*ref_new, padded, nullptr, -1, nullptr);

    SwitchMetrics& m = run.metrics;
    m.algorithm = algorithm;
    m.hop = h;
    m.audio_latency = proc->latency();
    m.stream_delay = proc->stream_delay();
    m.switching_latency = proc->switching_latency();
    m.switch_boundary = boundary;

    const double scale = std::max({run.old_ref.abs().maxCoeff(), run.new_ref.abs().maxCoeff(),
                                   std::numeric_limits<double>::min()});
    const double tol = 1e-9 * scale;

    m.transition_start = -1;
    for (Index t = 0; t < n; ++t) {
        if ((run.output.row(t) - run.old_ref.row(t)).abs().maxCoeff() > tol) {
            m.transition_start = t;
            break;
        }
    }
    Index settled = boundary;
    for (Index t = n - 1; t >= boundary; --t) {
        if ((run.output.row(t) - run.new_ref.row(t)).abs().maxCoeff() > tol) {
            settled = t + 1;
            break;
        }
    }
    m.transition_width = settled - boundary;

    for (Index t = 1; t < n; ++t) {
        const double step = (run.output.row(t) - run.output.row(t - 1)).abs().maxCoeff();
        if (t >= boundary && t <= settled)
            m.max_step_transition = std::max(m.max_step_transition, step);
        else
            m.max_step_steady = std::max(m.max_step_steady, step);
    }
    return run;
}

CompareRun run_compare(const AudioBuffer& input, const ImpulseResponse& ir_a,
                       const ImpulseResponse& ir_b, Index hop,
                       Index requested_switch_sample, CrossfadeConfig::Shape shape) {
    CrossfadeConfig fade;
    fade.duration = hop;
    fade.shape = shape;

    CompareRun run;
    run.tvolap = run_switch("tvolap", input, ir_a, ir_b, hop, requested_switch_sample);
    run.crossfaded =
        run_switch("cf-tdc", input, ir_a, ir_b, hop, requested_switch_sample, &fade);
    run.difference = run.tvolap.output - run.crossfaded.output;

    CompareMetrics& m = run.metrics;
    m.fade_shape = shape == CrossfadeConfig::Shape::Linear ? "linear" : "hann";
    m.fade_duration = fade.duration;

    const Index n = run.difference.rows();
    const Index b = run.tvolap.metrics.switch_boundary;
    m.window_begin = b;
    m.window_end = std::min<Index>(n, b + 3 * hop);
    const Index len = m.window_end - m.window_begin;

    m.max_abs_diff = run.difference.abs().maxCoeff();
    const auto window = run.difference.middleRows(m.window_begin, len);
    const auto out_window = run.tvolap.output.middleRows(m.window_begin, len);
    m.rms_diff = std::sqrt(window.square().mean());
    m.output_rms = std::sqrt(out_window.square().mean());
    m.diff_db = 20.0 * std::log10(std::max(m.rms_diff, 1e-300) /
                                  std::max(m.output_rms, 1e-300));
    return run;
}

std::string metrics_csv(const std::vector<SwitchMetrics>& rows) {
    std::string out =
        "algorithm,hop,audio_latency,stream_delay,switching_latency,switch_boundary,"
        "transition_start,transition_width,max_step_transition,max_step_steady\n";
    for (const auto& m : rows) {
        out += m.algorithm;
        out += ',' + std::to_string(m.hop);
        out += ',' + std::to_string(m.audio_latency);
        out += ',' + std::to_string(m.stream_delay);
        out += ',' + std::to_string(m.switching_latency);
        out += ',' + std::to_string(m.switch_boundary);
        out += ',' + std::to_string(m.transition_start);
        out += ',' + std::to_string(m.transition_width);
        out += ',' + fmt(m.max_step_transition);
        out += ',' + fmt(m.max_step_steady);
        out += '\n';
    }
    return out;
}

std::string metrics_json(const std::vector<SwitchMetrics>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& m : rows) {
        nlohmann::ordered_json j;
        j["algorithm"] = m.algorithm;
        j["hop"] = m.hop;
        j["audio_latency"] = m.audio_latency;
        j["stream_delay"] = m.stream_delay;
        j["switching_latency"] = m.switching_latency;
        j["switch_boundary"] = m.switch_boundary;
        j["transition_start"] = m.transition_start;
        j["transition_width"] = m.transition_width;
        j["max_step_transition"] = m.max_step_transition;
        j["max_step_steady"] = m.max_step_steady;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

std::string compare_csv(const std::vector<CompareMetrics>& rows) {
    std::string out =
        "fade_shape,fade_duration,window_begin,window_end,max_abs_diff,rms_diff,"
        "output_rms,diff_db\n";
    for (const auto& m : rows) {
        out += m.fade_shape;
        out += ',' + std::to_string(m.fade_duration);
        out += ',' + std::to_string(m.window_begin);
        out += ',' + std::to_string(m.window_end);
        out += ',' + fmt(m.max_abs_diff);
        out += ',' + fmt(m.rms_diff);
        out += ',' + fmt(m.output_rms);
        out += ',' + fmt(m.diff_db);
        out += '\n';
    }
    return out;
}

std::string compare_json(const std::vector<CompareMetrics>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& m : rows) {
        nlohmann::ordered_json j;
        j["fade_shape"] = m.fade_shape;
        j["fade_duration"] = m.fade_duration;
        j["window_begin"] = m.window_begin;
        j["window_end"] = m.window_end;
        j["max_abs_diff"] = m.max_abs_diff;
        j["rms_diff"] = m.rms_diff;
        j["output_rms"] = m.output_rms;
        j["diff_db"] = m.diff_db;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

std::string transition_csv(const SwitchRun& run, Index before, Index after) {
    const Index n = run.output.rows();
    const Index channels = run.output.cols();
    const Index b = run.metrics.switch_boundary;
    const Index begin = std::max<Index>(0, b - before);
    const Index end = std::min<Index>(n, b + after);

    std::string out = "offset";
    for (Index c = 0; c < channels; ++c)
        out += ",output_" + std::to_string(c);
    for (Index c = 0; c < channels; ++c)
        out += ",old_ref_" + std::to_string(c);
    for (Index c = 0; c < channels; ++c)
        out += ",new_ref_" + std::to_string(c);
    out += '\n';

    for (Index t = begin; t < end; ++t) {
        out += std::to_string(t - b);
        for (Index c = 0; c < channels; ++c)
            out += ',' + fmt(run.output(t, c));
        for (Index c = 0; c < channels; ++c)
            out += ',' + fmt(run.old_ref(t, c));
        for (Index c = 0; c < channels; ++c)
            out += ',' + fmt(run.new_ref(t, c));
        out += '\n';
    }
    return out;
}

} // namespace tvolap
