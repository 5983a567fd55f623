#include <memory>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "tvolap/engine.hpp"
#include "tvolap/signal_gen.hpp"

using namespace tvolap;
using Eigen::ArrayXd;
using Eigen::ArrayXXd;

namespace {

ArrayXXd random_frames(Index rows, Index cols, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ArrayXXd x(rows, cols);
    for (Index c = 0; c < cols; ++c)
        for (Index r = 0; r < rows; ++r)
            x(r, c) = dist(gen);
    return x;
}

// Feed the whole signal hop by hop plus enough zero hops to observe
// n_out samples after removing the stream delay.
ArrayXXd stream_through(TvolapEngine& eng, const ArrayXXd& x, Index n_out) {
    const Index hop = eng.hop();
    const Index total = n_out + eng.stream_delay();
    const Index calls = (total + hop - 1) / hop;
    ArrayXXd padded = ArrayXXd::Zero(calls * hop, x.cols());
    padded.topRows(x.rows()) = x;
    ArrayXXd out(calls * hop, x.cols());
    for (Index i = 0; i < calls; ++i)
        out.middleRows(i * hop, hop) = eng.process(padded.middleRows(i * hop, hop));
    return out.middleRows(eng.stream_delay(), n_out);
}

} // namespace

TEST_CASE("engine geometry") {
    TvolapEngine one(partition(delta_ir(1.0, 1), 256));
    CHECK(one.partition_count() == 1);
    CHECK(one.latency() == 512);
    CHECK(one.switching_latency() == 256);
    CHECK(one.delay_line_depth() == 1);

    TvolapEngine four(partition(delta_ir(1.0, 2048), 256));
    CHECK(four.partition_count() == 4);
    CHECK(four.delay_line_depth() == 7);
    CHECK(four.hop() == 256);
    CHECK(four.channels() == 1);

    TvolapEngine big(partition(delta_ir(1.0, 32768, 44100.0), 512));
    CHECK(big.partition_count() == 32);
    CHECK(big.switching_latency() == 512);
}

TEST_CASE("zero input stays zero, including after reset") {
    TvolapEngine eng(partition(delta_ir(1.0, 1024), 128));
    ArrayXXd z = ArrayXXd::Zero(128, 1);
    for (int i = 0; i < 5; ++i)
        CHECK(eng.process(z).abs().maxCoeff() == 0.0);
    eng.process(random_frames(128, 1, 1));
    eng.reset();
    for (int i = 0; i < 5; ++i)
        CHECK(eng.process(z).abs().maxCoeff() == 0.0);
}

TEST_CASE("identity filter is an exact passthrough") {
    const Index hop = 16;
    TvolapEngine eng(partition(delta_ir(1.0, 1), hop));
    ArrayXXd x = random_frames(8 * hop, 1, 2);
    ArrayXXd y = stream_through(eng, x, x.rows());
    CHECK((y - x).abs().maxCoeff() < 1e-12);
}

TEST_CASE("fixed filter matches brute-force convolution") {
    const Index hop = 128;
    for (Index n_ir : {2 * hop, 4 * hop, 8 * hop}) {
        ArrayXd h = random_frames(n_ir, 1, 10 + static_cast<std::uint64_t>(n_ir)).col(0);
        ArrayXd x = random_frames(4 * n_ir, 1, 20 + static_cast<std::uint64_t>(n_ir)).col(0);
        TvolapEngine eng(partition(mono_ir(h, 48000.0), hop));
        ArrayXXd y = stream_through(eng, x.matrix(), x.size() + n_ir - 1);
        ArrayXd ref = oracle::linear_conv(x, h);
        CHECK((y.col(0) - ref).abs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("channels are independent lanes") {
    const Index hop = 64, n_ir = 256;
    ImpulseResponse ir{random_frames(n_ir, 2, 30), 48000.0};
    ArrayXXd x = random_frames(1024, 2, 31);
    TvolapEngine eng(partition(ir, hop));
    CHECK(eng.channels() == 2);
    ArrayXXd y = stream_through(eng, x, x.rows() + n_ir - 1);
    for (Index c = 0; c < 2; ++c) {
        ArrayXd ref = oracle::linear_conv(x.col(c), ir.samples.col(c));
        CHECK((y.col(c) - ref).abs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("processing is linear in the input") {
    const Index hop = 64;
    FilterPartitionSet set = partition(mono_ir(random_frames(512, 1, 40).col(0), 48000.0), hop);
    ArrayXXd x1 = random_frames(512, 1, 41);
    ArrayXXd x2 = random_frames(512, 1, 42);
    const double a = 0.8, b = -2.5;

    TvolapEngine e1(set), e2(set), em(set);
    ArrayXXd y1 = stream_through(e1, x1, 900);
    ArrayXXd y2 = stream_through(e2, x2, 900);
    ArrayXXd ym = stream_through(em, (a * x1 + b * x2).eval(), 900);
    CHECK((ym - (a * y1 + b * y2)).abs().maxCoeff() < 1e-10);
}

TEST_CASE("per-hop work is constant through a filter exchange") {
    const Index hop = 128;
    FilterPartitionSet a = partition(mono_ir(random_frames(1024, 1, 50).col(0), 48000.0), hop);
    FilterPartitionSet b = partition(mono_ir(random_frames(1024, 1, 51).col(0), 48000.0), hop);
    TvolapEngine eng(a);
    const Index m = eng.partition_count();

    ArrayXXd x = ArrayXXd::Ones(hop, 1);
    std::vector<EngineOpCounts> after;
    for (int i = 0; i < 12; ++i) {
        if (i == 6)
            eng.exchange_filter(b);
        eng.process(x);
        after.push_back(eng.op_counts());
    }
    for (std::size_t i = 0; i < after.size(); ++i) {
        const std::uint64_t hops = i + 1;
        CHECK(after[i].forward_transforms == hops);
        CHECK(after[i].inverse_transforms == hops);
        CHECK(after[i].spectral_macs == hops * static_cast<std::uint64_t>(m));
    }
}

TEST_CASE("exchanging the identical filter leaves the output bit-identical") {
    const Index hop = 64;
    auto set = std::make_shared<const FilterPartitionSet>(
        partition(mono_ir(random_frames(512, 1, 60).col(0), 48000.0), hop));
    ArrayXXd x = random_frames(1024, 1, 61);

    TvolapEngine plain(set), exchanged(set);
    ArrayXXd y1(1024, 1), y2(1024, 1);
    for (Index i = 0; i < 16; ++i) {
        auto chunk = x.middleRows(i * hop, hop);
        y1.middleRows(i * hop, hop) = plain.process(chunk);
        if (i == 7)
            exchanged.exchange_filter(set);
        y2.middleRows(i * hop, hop) = exchanged.process(chunk);
    }
    CHECK((y1 - y2).abs().maxCoeff() == 0.0);
}

TEST_CASE("polarity flip crosses over along the analytic half-cosine") {
    const Index hop = 256;
    FilterPartitionSet pos = partition(delta_ir(1.0, 2048), hop);
    FilterPartitionSet neg = partition(delta_ir(-1.0, 2048), hop);
    REQUIRE(pos.partition_count == 4);

    TvolapEngine eng(pos);
    const Index calls = 24, switch_call = 12;
    ArrayXXd ones = ArrayXXd::Ones(hop, 1);
    ArrayXXd stream(calls * hop, 1);
    for (Index i = 0; i < calls; ++i) {
        if (i == switch_call)
            eng.exchange_filter(neg);
        stream.middleRows(i * hop, hop) = eng.process(ones);
    }
    ArrayXXd out = stream.middleRows(eng.stream_delay(), (calls - 1) * hop);
    const Index boundary = (switch_call - 1) * hop;

    ArrayXd w = hann_window(hop);
    for (Index t = 2 * hop; t < boundary; ++t)
        CHECK(out(t, 0) == doctest::Approx(1.0).epsilon(1e-9));
    for (Index u = 0; u < hop; ++u) {
        const double expected = 0.5 * w[u + hop] - 0.5 * w[u];
        CHECK(out(boundary + u, 0) == doctest::Approx(expected).epsilon(1e-9));
    }
    for (Index t = boundary + hop; t < out.rows(); ++t)
        CHECK(out(t, 0) == doctest::Approx(-1.0).epsilon(1e-9));
    // the crossover needs the full hop: one sample earlier it has not settled
    CHECK(std::abs(out(boundary + hop - 1, 0) - (-1.0)) > 1e-9);
}

TEST_CASE("a shorter response can replace a longer one via forced partitions") {
    const Index hop = 64;
    ImpulseResponse long_ir{random_frames(512, 1, 70), 48000.0};
    ImpulseResponse short_ir{random_frames(100, 1, 71), 48000.0};
    TvolapEngine eng(partition(long_ir, hop));
    REQUIRE(eng.partition_count() == 4);

    eng.exchange_filter(partition(short_ir, hop, eng.partition_count()));
    ArrayXd x = random_frames(2048, 1, 72).col(0);
    ArrayXXd y = stream_through(eng, x.matrix(), x.size() + 99);
    CHECK((y.col(0) - oracle::linear_conv(x, short_ir.samples.col(0))).abs().maxCoeff() < 1e-9);
}

TEST_CASE("input framing and filter compatibility are enforced") {
    const Index hop = 128;
    TvolapEngine eng(partition(delta_ir(1.0, 512), hop));
    CHECK_THROWS_AS((void)eng.process(ArrayXXd::Zero(hop - 1, 1)), InvalidSizeError);
    CHECK_THROWS_AS((void)eng.process(ArrayXXd::Zero(hop, 2)), InvalidInputError);

    CHECK_THROWS_AS(eng.exchange_filter(partition(delta_ir(1.0, 512), 64)), IncompatibleFilterError);
    CHECK_THROWS_AS(eng.exchange_filter(partition(delta_ir(1.0, 2048), hop)), IncompatibleFilterError);
    CHECK_THROWS_AS(eng.exchange_filter(partition(delta_ir(1.0, 512, 48000.0, 0, 2), hop)),
                    IncompatibleFilterError);

    CHECK_THROWS_AS(TvolapEngine(std::shared_ptr<const FilterPartitionSet>{}),
                    InvalidConfigurationError);
}

TEST_CASE("reset restores the zero state but keeps a staged filter") {
    const Index hop = 64;
    FilterPartitionSet a = partition(delta_ir(1.0, 256), hop);
    FilterPartitionSet b = partition(delta_ir(-1.0, 256), hop);
    TvolapEngine eng(a);
    eng.process(random_frames(hop, 1, 80));
    eng.exchange_filter(b);
    eng.reset();
    // the staged filter still lands at the next hop: steady output is -1
    ArrayXXd ones = ArrayXXd::Ones(hop, 1);
    ArrayXXd last;
    for (int i = 0; i < 8; ++i)
        last = eng.process(ones);
    CHECK(last(hop - 1, 0) == doctest::Approx(-1.0).epsilon(1e-10));
}
