#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tvolap/partition.hpp"

using namespace tvolap;
using Eigen::ArrayXd;
using Eigen::ArrayXXd;

namespace {

ImpulseResponse random_ir(Index len, Index channels, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ArrayXXd h(len, channels);
    for (Index c = 0; c < channels; ++c)
        for (Index i = 0; i < len; ++i)
            h(i, c) = dist(gen);
    return {h, 48000.0};
}

} // namespace

TEST_CASE("window endpoints, peak and overlap") {
    const Index hop = 256;
    ArrayXd w = hann_window(hop);
    REQUIRE(w.size() == 2 * hop);
    CHECK(w[0] == 0.0);
    CHECK(w[hop] == 2.0);
    for (Index n = 0; n < hop; ++n)
        CHECK(w[n] + w[n + hop] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("window overlap-add is constant at every hop shift") {
    for (Index hop : {Index{2}, Index{16}, Index{128}}) {
        ArrayXd w = hann_window(hop);
        ArrayXd cola = w.head(hop) + w.tail(hop);
        CHECK((cola - 2.0).abs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("window rejects degenerate hops") {
    CHECK_THROWS_AS((void)hann_window(1), InvalidSizeError);
    CHECK_THROWS_AS((void)hann_window(0), InvalidSizeError);
}

TEST_CASE("partition counts follow ceiling division") {
    CHECK(partition(random_ir(2048, 1, 1), 256).partition_count == 4);
    CHECK(partition(random_ir(3 * 512, 2, 2), 256).partition_count == 3);
    CHECK(partition(random_ir(1, 1, 3), 256).partition_count == 1);
    CHECK(partition(random_ir(1000, 1, 4), 256).partition_count == 2);
    CHECK(partition(random_ir(513, 1, 5), 256).partition_count == 2);
}

TEST_CASE("unit impulse partitions to a flat spectrum") {
    ArrayXXd h = ArrayXXd::Zero(1, 1);
    h(0, 0) = 1.0;
    FilterPartitionSet set = partition(ImpulseResponse{h, 48000.0}, 256);
    REQUIRE(set.partition_count == 1);
    CHECK(set.transform_length() == 1024);
    CHECK(set.normalization_gain == 0.5);
    const SpectrumFrame& s = set.partitions[0][0];
    for (Index k = 0; k < s.bin_count(); ++k) {
        CHECK(s.bins[k].real() == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::abs(s.bins[k].imag()) < 1e-13);
    }
}

TEST_CASE("reassemble inverts partitioning") {
    ImpulseResponse ir = random_ir(2048, 2, 10);
    FilterPartitionSet set = partition(ir, 256);
    ImpulseResponse back = reassemble(set);
    REQUIRE(back.length() == 2048);
    REQUIRE(back.channels() == 2);
    CHECK((back.samples - ir.samples).abs().maxCoeff() < 1e-12);
}

TEST_CASE("odd lengths come back with tail padding") {
    ImpulseResponse ir = random_ir(1000, 1, 11);
    FilterPartitionSet set = partition(ir, 256);
    CHECK(set.source_length == 1000);
    CHECK(set.padded_length() == 1024);
    ImpulseResponse back = reassemble(set);
    REQUIRE(back.length() == 1024);
    CHECK((back.samples.topRows(1000) - ir.samples).abs().maxCoeff() < 1e-12);
    CHECK(back.samples.bottomRows(24).abs().maxCoeff() < 1e-12);
}

TEST_CASE("unit impulse reassembles padded to one partition") {
    ArrayXXd h = ArrayXXd::Zero(1, 1);
    h(0, 0) = 1.0;
    ImpulseResponse back = reassemble(partition(ImpulseResponse{h, 48000.0}, 16));
    REQUIRE(back.length() == 32);
    CHECK(back.samples(0, 0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(back.samples.bottomRows(31).abs().maxCoeff() < 1e-13);
}

TEST_CASE("partition spectra are linear in the impulse response") {
    ImpulseResponse ir1 = random_ir(700, 1, 12);
    ImpulseResponse ir2 = random_ir(700, 1, 13);
    const double a = 1.25, b = -0.5;
    ImpulseResponse mix{(a * ir1.samples + b * ir2.samples).eval(), 48000.0};
    FilterPartitionSet s1 = partition(ir1, 128);
    FilterPartitionSet s2 = partition(ir2, 128);
    FilterPartitionSet sm = partition(mix, 128);
    for (Index m = 0; m < sm.partition_count; ++m) {
        Eigen::ArrayXcd want = a * s1.partitions[0][m].bins + b * s2.partitions[0][m].bins;
        CHECK((sm.partitions[0][m].bins - want).abs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("min_partitions forces trailing zero partitions") {
    ImpulseResponse ir = random_ir(512, 1, 14);
    FilterPartitionSet set = partition(ir, 256, 4);
    REQUIRE(set.partition_count == 4);
    for (Index m = 1; m < 4; ++m)
        CHECK(set.partitions[0][m].bins.abs().maxCoeff() == 0.0);
    ImpulseResponse back = reassemble(set);
    REQUIRE(back.length() == 2048);
    CHECK((back.samples.topRows(512) - ir.samples).abs().maxCoeff() < 1e-12);
}

TEST_CASE("partition validation") {
    CHECK_THROWS_AS((void)partition(ImpulseResponse{}, 256), InvalidInputError);
    ImpulseResponse ir = random_ir(64, 1, 15);
    CHECK_THROWS_AS((void)partition(ir, 0), InvalidSizeError);
    CHECK_THROWS_AS((void)partition(ir, 24), InvalidSizeError); // 4L = 96 not a power of two
    CHECK_THROWS_AS((void)partition(ir, 1), InvalidSizeError);  // window needs L >= 2
}
