#include <cmath>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "tvolap/cost.hpp"
#include "tvolap/errors.hpp"

using namespace tvolap;

TEST_CASE("transform cost per sample") {
    CHECK(fft_ops_per_sample(512) == 59.0);
    CHECK(fft_ops_per_sample(1024) == 64.0);
    CHECK(fft_ops_per_sample(2048) == 69.0);
    CHECK_THROWS_AS((void)fft_ops_per_sample(4), InvalidSizeError);
    CHECK_THROWS_AS((void)fft_ops_per_sample(12), InvalidSizeError);
    CHECK_THROWS_AS((void)fft_ops_per_sample(0), InvalidSizeError);
}

TEST_CASE("2048-tap table at 48 kHz") {
    CostReport tdc = cost("tdc", 2048, 48000.0, 2048);
    CHECK(tdc.ops_per_sample == 4096.0);
    CHECK(tdc.mflops == 196.608);
    CHECK(tdc.audio_latency == 0);

    CostReport cf = cost("cf-tdc", 2048, 48000.0, 2048);
    CHECK(cf.mflops == 196.608);
    CHECK(cf.audio_latency == 0);
    CHECK_FALSE(cf.switching_latency.has_value());
    CHECK(cf.extra_switch_mflops == 0.144);

    CostReport ola = cost("ola", 2048, 48000.0, 2048);
    CHECK(ola.ops_per_sample == 145.0);
    CHECK(ola.mflops == 6.96);
    CHECK(ola.audio_latency == 2048);
    CHECK(ola.switching_latency == 0);

    CostReport wola = cost("wola", 2048, 48000.0, 2048);
    CHECK(wola.ops_per_sample == 296.0);
    CHECK(wola.mflops == 14.208);
    CHECK(wola.audio_latency == 2048);
    CHECK(wola.switching_latency == 1024);
    // the published cell reads 14.064; flagged and within 1.1%
    CHECK(wola.note.find("14.064") != std::string::npos);
    CHECK(std::abs(wola.mflops - 14.064) / 14.064 < 0.011);

    CostReport tv = cost("tvolap", 2048, 48000.0, 512);
    CHECK(tv.ops_per_sample == 304.0);
    CHECK(tv.mflops == 14.592);
    CHECK(tv.audio_latency == 512);
    CHECK(tv.switching_latency == 256);
    CHECK(tv.note.empty());
}

TEST_CASE("512-tap table at 48 kHz") {
    CHECK(cost("tdc", 512, 48000.0, 512).mflops == 49.152);
    CHECK(cost("cf-tdc", 512, 48000.0, 512).mflops == 49.152);
    CHECK(cost("ola", 512, 48000.0, 512).mflops == 6.0);
    CHECK(cost("wola", 512, 48000.0, 512).mflops == 12.288);

    CHECK(cost("ola", 512, 48000.0, 512).audio_latency == 512);
    CHECK(cost("wola", 512, 48000.0, 512).audio_latency == 512);
    CHECK(cost("wola", 512, 48000.0, 512).switching_latency == 256);

    CostReport tv = cost("tvolap", 512, 48000.0, 512);
    CHECK(tv.audio_latency == 512);
    CHECK(tv.switching_latency == 256);
    CHECK(tv.mflops == 12.288);
    // single-partition run: the published cell reads 12.192; flagged, within 1.1%
    CHECK(tv.note.find("12.192") != std::string::npos);
    CHECK(std::abs(tv.mflops - 12.192) / 12.192 < 0.011);
}

TEST_CASE("single-partition run costs the same as weighted overlap-add") {
    CHECK(cost("tvolap", 512, 48000.0, 512).ops_per_sample ==
          cost("wola", 512, 48000.0, 512).ops_per_sample);
}

TEST_CASE("partition count drives the accumulate term") {
    const double base = cost("tvolap", 512, 48000.0, 512).ops_per_sample;
    CHECK(cost("tvolap", 2048, 48000.0, 512).ops_per_sample == base + 16.0 * 3);
    CHECK(cost("tvolap", 8192, 48000.0, 512).ops_per_sample == base + 16.0 * 15);
    CHECK(cost("tvolap", 513, 48000.0, 512).ops_per_sample == base + 16.0); // ceiling
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((void)cost("nope", 512, 48000.0, 512), InvalidConfigurationError);
    CHECK_THROWS_AS((void)cost("tdc", 512, 48000.0, 256), InvalidConfigurationError);
    CHECK_THROWS_AS((void)cost("ola", 2048, 48000.0, 512), InvalidConfigurationError);
    CHECK_THROWS_AS((void)cost("wola", 2048, 48000.0, 1024), InvalidConfigurationError);
    CHECK_THROWS_AS((void)cost("ola", 500, 48000.0, 500), InvalidSizeError);
    CHECK_THROWS_AS((void)cost("tvolap", 2048, 48000.0, 0), InvalidConfigurationError);
    CHECK_THROWS_AS((void)cost("tvolap", 2048, -1.0, 512), InvalidConfigurationError);
    CHECK_THROWS_AS((void)cost("tvolap", 2048, 48000.0, 96), InvalidSizeError);
}

TEST_CASE("csv rendering is stable and carries the full table") {
    std::vector<CostReport> rows{cost("cf-tdc", 2048, 48000.0, 2048),
                                 cost("wola", 2048, 48000.0, 2048)};
    std::string csv = to_csv(rows);
    CHECK(csv == to_csv(rows));
    CHECK(csv.rfind("algorithm,N_IR,block,f_s,ops_per_sample,mflops,audio_latency,"
                    "switching_latency,extra_switch_mflops,note\n",
                    0) == 0);
    CHECK(csv.find("cf-tdc,2048,2048,48000,4096,196.608,0,crossfade-dependent,0.144,\"\"") !=
          std::string::npos);
    CHECK(csv.find("\"counting the window ops") != std::string::npos);
}

TEST_CASE("json rendering mirrors the report fields") {
    std::vector<CostReport> rows{cost("tvolap", 2048, 48000.0, 512),
                                 cost("cf-tdc", 2048, 48000.0, 2048)};
    auto parsed = nlohmann::json::parse(to_json(rows));
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0]["algorithm"] == "tvolap");
    CHECK(parsed[0]["mflops"] == 14.592);
    CHECK(parsed[0]["audio_latency"] == 512);
    CHECK(parsed[0]["switching_latency"] == 256);
    CHECK(parsed[1]["switching_latency"] == "crossfade-dependent");
    CHECK(parsed[1]["extra_switch_mflops"] == 0.144);
}
