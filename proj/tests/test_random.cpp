#include <cmath>
#include <numeric>

#include "doctest.h"
#include "gwk/random.hpp"

using gwk::Philox;

TEST_SUITE("random") {

TEST_CASE("philox known-answer vectors") {
    // Random123 reference outputs for philox4x32-10.
    CHECK(Philox(0, 0).block(0) == Philox::Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox(~0ull, ~0ull).block(~0ull) == Philox::Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox(0x299f31d0a4093822ull, 0x0370734413198a2eull).block(0x85a308d3243f6a88ull) ==
          Philox::Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("blocks are addressable out of order") {
    Philox p(42, 7);
    const auto b5 = p.block(5);
    for (int i = 0; i < 5; ++i) (void)p.block(i);
    CHECK(p.block(5) == b5);
}

TEST_CASE("normal moments over one million draws") {
    const auto x = gwk::standard_normals(12345, 1, 1000000);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    double v = 0.0;
    for (double e : x) v += (e - mean) * (e - mean);
    v /= static_cast<double>(x.size() - 1);
    CHECK(std::fabs(mean) < 0.004);
    CHECK(std::fabs(v - 1.0) < 0.006);
}

TEST_CASE("distinct streams are uncorrelated") {
    const std::size_t n = 200000;
    const auto a = gwk::standard_normals(99, gwk::stream_id(1, 2), n);
    const auto b = gwk::standard_normals(99, gwk::stream_id(1, 3), n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    CHECK(std::fabs(s / n) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(a != b);
}

TEST_CASE("same seed and stream reproduce") {
    CHECK(gwk::standard_normals(5, 9, 1000) == gwk::standard_normals(5, 9, 1000));
    CHECK(gwk::standard_normals(5, 9, 1000) != gwk::standard_normals(6, 9, 1000));
}

TEST_CASE("uniforms stay in the open unit interval") {
    gwk::RandomStream rs(3, 4);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rs.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("below stays in range and covers it") {
    gwk::RandomStream rs(11, 0);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) {
        const auto k = rs.below(7);
        REQUIRE(k < 7);
        ++counts[k];
    }
    for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("stream ids separate their arguments") {
    CHECK(gwk::stream_id(1, 2, 3) != gwk::stream_id(3, 2, 1));
    CHECK(gwk::stream_id(1, 2) != gwk::stream_id(2, 1));
    CHECK(gwk::stream_id(1, 2, 3) == gwk::stream_id(1, 2, 3));
}

}
