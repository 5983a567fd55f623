#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tvolap/cost.hpp"
#include "tvolap/errors.hpp"
#include "tvolap/experiment.hpp"
#include "tvolap/frame_adapter.hpp"
#include "tvolap/reference.hpp"
#include "tvolap/signal_gen.hpp"
#include "tvolap/wav.hpp"

namespace {

using namespace tvolap;

// Relative output paths may be redirected with TVOLAP_OUT_DIR.
std::string out_path(const std::string& name) {
    namespace fs = std::filesystem;
    fs::path p(name);
    if (p.is_absolute())
        return name;
    const char* base = std::getenv("TVOLAP_OUT_DIR");
    if (!base || !*base)
        return name;
    fs::create_directories(base);
    return (fs::path(base) / p).string();
}

void write_text(const std::string& name, const std::string& text) {
    const std::string path = out_path(name);
    std::ofstream f(path, std::ios::trunc);
    if (!f)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
}

// ones | ones:N | sine:FREQ[:N] | pink[:SEED[:N]] | a .wav path
AudioBuffer parse_input(const std::string& spec, Index frames, double fs) {
    auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            const auto colon = s.find(':', start);
            parts.push_back(s.substr(start, colon - start));
            if (colon == std::string::npos)
                break;
            start = colon + 1;
        }
        return parts;
    };
    const auto parts = split(spec);
    const std::string& kind = parts[0];
    if (kind == "ones") {
        const Index n = parts.size() > 1 ? std::stoll(parts[1]) : frames;
        return gen_ones(n, fs);
    }
    if (kind == "sine") {
        const double freq = parts.size() > 1 ? std::stod(parts[1]) : 750.0;
        const Index n = parts.size() > 2 ? std::stoll(parts[2]) : frames;
        return gen_sine(freq, n, fs);
    }
    if (kind == "pink") {
        const std::uint64_t seed = parts.size() > 1 ? std::stoull(parts[1]) : 1;
        const Index n = parts.size() > 2 ? std::stoll(parts[2]) : frames;
        return gen_pink(seed, n, fs);
    }
    return read_wav(spec);
}

// +delta | -delta | delta:GAIN[:DELAY] | synth:azDEG | a .wav path
ImpulseResponse parse_ir(const std::string& spec, Index ir_len, double fs) {
    if (spec == "+delta")
        return delta_ir(1.0, ir_len, fs);
    if (spec == "-delta")
        return delta_ir(-1.0, ir_len, fs);
    if (spec.rfind("delta:", 0) == 0) {
        const auto rest = spec.substr(6);
        const auto colon = rest.find(':');
        const double gain = std::stod(rest.substr(0, colon));
        const Index delay = colon == std::string::npos ? 0 : std::stoll(rest.substr(colon + 1));
        return delta_ir(gain, ir_len, fs, delay);
    }
    if (spec.rfind("synth:az", 0) == 0) {
        const double az = std::stod(spec.substr(8));
        return synthetic_binaural_ir(az, ir_len, fs);
    }
    ImpulseResponse ir;
    const AudioBuffer b = read_wav(spec);
    ir.samples = b.samples;
    ir.sample_rate = b.sample_rate;
    return ir;
}

Index hop_for(const std::string& algo, Index block) {
    if (algo == "tvolap")
        return block / 2;
    return block;  // stepping size for the direct forms; ignored by ola/ols/wola
}

int run_cost(const std::string& algo, Index ir_len, Index block, double fs,
             const std::string& format) {
    std::vector<CostReport> reports;
    std::vector<std::string> algos;
    if (algo == "all")
        algos = {"tdc", "cf-tdc", "ola", "wola", "tvolap"};
    else
        algos = {algo};
    for (const auto& a : algos) {
        // the direct and single-block forms always step at N_IR; --block only
        // picks the partitioned engine's block length
        const Index b = a == "tvolap" ? (block > 0 ? block : 512) : ir_len;
        reports.push_back(cost(a, ir_len, fs, b));
    }
    std::cout << (format == "json" ? to_json(reports) : to_csv(reports));
    return 0;
}

int run_signal(const std::string& type, Index frames, double freq, std::uint64_t seed,
               double fs, const std::string& out, const std::string& format) {
    AudioBuffer buf;
    if (type == "ones")
        buf = gen_ones(frames, fs);
    else if (type == "sine")
        buf = gen_sine(freq, frames, fs);
    else if (type == "pink")
        buf = gen_pink(seed, frames, fs);
    else
        throw InvalidConfigurationError("unknown signal type: " + type);
    const WavFormat wf = format == "pcm16"   ? WavFormat::Pcm16
                         : format == "pcm24" ? WavFormat::Pcm24
                                             : WavFormat::Float32;
    write_wav(out_path(out), buf, wf);
    std::cout << "wrote " << out_path(out) << " (" << buf.frames() << " frames)\n";
    return 0;
}

int run_process(const std::string& algo, const std::string& input_spec,
                const std::string& ir_spec, Index ir_len, Index block, Index frames,
                double fs, const std::string& out) {
    const ImpulseResponse ir = parse_ir(ir_spec, ir_len, fs);
    AudioBuffer x = parse_input(input_spec, frames, ir.sample_rate);
    if (x.sample_rate != ir.sample_rate)
        throw InvalidConfigurationError("input and filter sample rates differ");
    if (x.channels() == 1 && ir.channels() > 1)
        x = fan_out(x, ir.channels());

    auto proc = make_processor(algo, ir, hop_for(algo, block));
    FrameAdapter adapter(*proc);

    const Index hop = proc->hop();
    const Index delay = proc->stream_delay();
    const Index n_padded = (x.frames() + hop - 1) / hop * hop;

    const auto begin = std::chrono::steady_clock::now();
    Eigen::ArrayXXd head = adapter.push(x.samples);
    Eigen::ArrayXXd pad =
        adapter.push(Eigen::ArrayXXd::Zero(n_padded - x.frames() + delay, x.channels()));
    Eigen::ArrayXXd tail = adapter.flush();
    const auto end = std::chrono::steady_clock::now();

    Eigen::ArrayXXd stream(head.rows() + pad.rows() + tail.rows(), x.channels());
    stream.topRows(head.rows()) = head;
    stream.middleRows(head.rows(), pad.rows()) = pad;
    stream.bottomRows(tail.rows()) = tail;

    AudioBuffer y;
    y.sample_rate = x.sample_rate;
    y.samples = stream.middleRows(delay, n_padded);
    write_wav(out_path(out), y);

    const double seconds = std::chrono::duration<double>(end - begin).count();
    const double audio_seconds = static_cast<double>(x.frames()) / x.sample_rate;
    std::cout << "wrote " << out_path(out) << " (" << y.frames() << " frames)\n";
    std::cout << "real-time factor: " << (seconds > 0 ? audio_seconds / seconds : 0.0) << "\n";
    return 0;
}

int run_switch_cmd(const std::string& algo, const std::string& input_spec,
                   const std::string& ir_a_spec, const std::string& ir_b_spec, Index ir_len,
                   Index block, Index frames, double fs, double switch_ms,
                   Index fade_duration, const std::string& fade_shape,
                   const std::string& prefix) {
    const ImpulseResponse ir_a = parse_ir(ir_a_spec, ir_len, fs);
    const ImpulseResponse ir_b = parse_ir(ir_b_spec, ir_len, fs);
    const AudioBuffer x = parse_input(input_spec, frames, ir_a.sample_rate);
    const Index hop = hop_for(algo, block);
    const Index switch_sample =
        static_cast<Index>(std::llround(switch_ms / 1000.0 * x.sample_rate));

    CrossfadeConfig fade;
    fade.duration = fade_duration > 0 ? fade_duration : hop;
    fade.shape = fade_shape == "linear" ? CrossfadeConfig::Shape::Linear
                                        : CrossfadeConfig::Shape::HannComplementary;

    const SwitchRun run = run_switch(algo, x, ir_a, ir_b, hop, switch_sample, &fade);

    AudioBuffer y;
    y.sample_rate = x.sample_rate;
    y.samples = run.output;
    write_wav(out_path(prefix + "_output.wav"), y);
    write_text(prefix + "_metrics.csv", metrics_csv({run.metrics}));
    write_text(prefix + "_metrics.json", metrics_json({run.metrics}));
    write_text(prefix + "_transition.csv",
               transition_csv(run, run.metrics.hop, 3 * run.metrics.hop));

    const double audio_seconds = static_cast<double>(x.frames()) / x.sample_rate;
    std::cout << "switch applied at sample " << run.metrics.switch_boundary
              << ", transition width " << run.metrics.transition_width << "\n";
    std::cout << "real-time factor: "
              << (run.engine_seconds > 0 ? audio_seconds / run.engine_seconds : 0.0) << "\n";
    return 0;
}

int run_compare_cmd(const std::string& input_spec, const std::string& ir_a_spec,
                    const std::string& ir_b_spec, Index ir_len, Index block, Index frames,
                    double fs, double switch_ms, const std::string& shape,
                    const std::string& prefix) {
    const ImpulseResponse ir_a = parse_ir(ir_a_spec, ir_len, fs);
    const ImpulseResponse ir_b = parse_ir(ir_b_spec, ir_len, fs);
    const AudioBuffer x = parse_input(input_spec, frames, ir_a.sample_rate);
    const Index hop = block / 2;
    const Index switch_sample =
        static_cast<Index>(std::llround(switch_ms / 1000.0 * x.sample_rate));

    std::vector<CrossfadeConfig::Shape> shapes;
    if (shape == "hann")
        shapes = {CrossfadeConfig::Shape::HannComplementary};
    else if (shape == "linear")
        shapes = {CrossfadeConfig::Shape::Linear};
    else
        shapes = {CrossfadeConfig::Shape::HannComplementary, CrossfadeConfig::Shape::Linear};

    std::vector<CompareMetrics> metrics;
    bool wrote_tvolap = false;
    for (const auto s : shapes) {
        const CompareRun run = run_compare(x, ir_a, ir_b, hop, switch_sample, s);
        if (!wrote_tvolap) {
            AudioBuffer y;
            y.sample_rate = x.sample_rate;
            y.samples = run.tvolap.output;
            write_wav(out_path(prefix + "_tvolap.wav"), y);
            wrote_tvolap = true;
        }
        AudioBuffer cf;
        cf.sample_rate = x.sample_rate;
        cf.samples = run.crossfaded.output;
        write_wav(out_path(prefix + "_cftdc_" + run.metrics.fade_shape + ".wav"), cf);
        AudioBuffer d;
        d.sample_rate = x.sample_rate;
        d.samples = run.difference;
        write_wav(out_path(prefix + "_diff_" + run.metrics.fade_shape + ".wav"), d);
        std::cout << run.metrics.fade_shape << ": max |diff| " << run.metrics.max_abs_diff
                  << ", rms diff " << run.metrics.diff_db << " dB re output\n";
        metrics.push_back(run.metrics);
    }
    write_text(prefix + "_metrics.csv", compare_csv(metrics));
    write_text(prefix + "_metrics.json", compare_json(metrics));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"streaming partitioned convolution with switchable filters"};
    app.require_subcommand(1);

    // cost
    std::string cost_algo = "all", cost_format = "csv";
    Index cost_ir_len = 2048, cost_block = 0;
    double cost_fs = 48000.0;
    auto* cost_cmd = app.add_subcommand("cost", "print analytic operation counts and latencies");
    cost_cmd->add_option("--algo", cost_algo, "tdc, cf-tdc, ola, wola, tvolap or all");
    cost_cmd->add_option("--ir-len", cost_ir_len, "impulse response length in samples");
    cost_cmd->add_option("--block", cost_block, "stepping block (2L); only used by tvolap");
    cost_cmd->add_option("--fs", cost_fs, "sample rate in Hz");
    cost_cmd->add_option("--format", cost_format)->check(CLI::IsMember({"csv", "json"}));

    // signal
    std::string sig_type = "pink", sig_out, sig_format = "float32";
    Index sig_frames = 48000;
    double sig_freq = 750.0, sig_fs = 48000.0;
    std::uint64_t sig_seed = 1;
    auto* sig_cmd = app.add_subcommand("signal", "write a generator signal to a WAV file");
    sig_cmd->add_option("--type", sig_type)->check(CLI::IsMember({"ones", "sine", "pink"}));
    sig_cmd->add_option("--frames", sig_frames);
    sig_cmd->add_option("--freq", sig_freq);
    sig_cmd->add_option("--seed", sig_seed);
    sig_cmd->add_option("--fs", sig_fs);
    sig_cmd->add_option("--out", sig_out)->required();
    sig_cmd->add_option("--format", sig_format)
        ->check(CLI::IsMember({"pcm16", "pcm24", "float32"}));

    // common processing options
    const std::string algo_help = "tdc, cf-tdc, ola, ols, wola or tvolap";

    // process
    std::string p_algo = "tvolap", p_input, p_ir, p_out;
    Index p_ir_len = 2048, p_block = 512, p_frames = 16384;
    double p_fs = 48000.0;
    auto* p_cmd = app.add_subcommand("process", "time-invariant filtering of a signal");
    p_cmd->add_option("--algo", p_algo, algo_help);
    p_cmd->add_option("--input", p_input, "ones | sine:F | pink:SEED | file.wav")->required();
    p_cmd->add_option("--ir", p_ir, "+delta | -delta | delta:G:D | synth:azDEG | file.wav")
        ->required();
    p_cmd->add_option("--ir-len", p_ir_len, "length of synthesized responses");
    p_cmd->add_option("--block", p_block, "stepping block (2L for tvolap)");
    p_cmd->add_option("--frames", p_frames, "length of generated input signals");
    p_cmd->add_option("--fs", p_fs);
    p_cmd->add_option("--out", p_out)->required();

    // switch
    std::string s_algo = "tvolap", s_input = "ones", s_ir_a = "+delta", s_ir_b = "-delta";
    std::string s_prefix = "switch", s_fade_shape = "hann";
    Index s_ir_len = 2048, s_block = 512, s_frames = 16384, s_fade_duration = 0;
    double s_fs = 48000.0, s_switch_ms = 3.0;
    auto* s_cmd = app.add_subcommand("switch", "single filter-exchange experiment");
    s_cmd->add_option("--algo", s_algo, algo_help);
    s_cmd->add_option("--input", s_input);
    s_cmd->add_option("--ir-a", s_ir_a);
    s_cmd->add_option("--ir-b", s_ir_b);
    s_cmd->add_option("--ir-len", s_ir_len);
    s_cmd->add_option("--block", s_block);
    s_cmd->add_option("--frames", s_frames);
    s_cmd->add_option("--fs", s_fs);
    s_cmd->add_option("--switch-ms", s_switch_ms, "requested switch time");
    s_cmd->add_option("--fade-duration", s_fade_duration, "cf-tdc fade length (0: one hop)");
    s_cmd->add_option("--fade-shape", s_fade_shape)->check(CLI::IsMember({"hann", "linear"}));
    s_cmd->add_option("--out-prefix", s_prefix);

    // compare
    std::string c_input = "pink:1", c_ir_a = "synth:az0", c_ir_b = "synth:az90";
    std::string c_prefix = "compare", c_shape = "both";
    Index c_ir_len = 2048, c_block = 512, c_frames = 16384;
    double c_fs = 48000.0, c_switch_ms = 7.0;
    auto* c_cmd = app.add_subcommand("compare",
                                     "partitioned engine vs crossfaded direct convolution");
    c_cmd->add_option("--input", c_input);
    c_cmd->add_option("--ir-a", c_ir_a);
    c_cmd->add_option("--ir-b", c_ir_b);
    c_cmd->add_option("--ir-len", c_ir_len);
    c_cmd->add_option("--block", c_block);
    c_cmd->add_option("--frames", c_frames);
    c_cmd->add_option("--fs", c_fs);
    c_cmd->add_option("--switch-ms", c_switch_ms);
    c_cmd->add_option("--shape", c_shape)->check(CLI::IsMember({"hann", "linear", "both"}));
    c_cmd->add_option("--out-prefix", c_prefix);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cost_cmd->parsed())
            return run_cost(cost_algo, cost_ir_len, cost_block, cost_fs, cost_format);
        if (sig_cmd->parsed())
            return run_signal(sig_type, sig_frames, sig_freq, sig_seed, sig_fs, sig_out,
                              sig_format);
        if (p_cmd->parsed())
            return run_process(p_algo, p_input, p_ir, p_ir_len, p_block, p_frames, p_fs, p_out);
        if (s_cmd->parsed())
            return run_switch_cmd(s_algo, s_input, s_ir_a, s_ir_b, s_ir_len, s_block, s_frames,
                                  s_fs, s_switch_ms, s_fade_duration, s_fade_shape, s_prefix);
        if (c_cmd->parsed())
            return run_compare_cmd(c_input, c_ir_a, c_ir_b, c_ir_len, c_block, c_frames, c_fs,
                                   c_switch_ms, c_shape, c_prefix);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
