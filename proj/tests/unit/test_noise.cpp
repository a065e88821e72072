#include <doctest.h>

#include <cmath>
#include <cstring>

#include <boost/math/distributions/normal.hpp>

#include "shelab/errors.hpp"
#include "shelab/noise.hpp"
#include "shelab/normal.hpp"
#include "shelab/philox.hpp"

using namespace shelab;

TEST_CASE("philox4x32-10 known answers") {
    const auto zero = philox4x32_10({0, 0, 0, 0}, {0, 0});
    CHECK(zero == PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    const auto ones = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    CHECK(ones == PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    const auto pi = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
    CHECK(pi == PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("normal quantile agrees with boost") {
    const boost::math::normal_distribution<double> nd;
    for (double p : {1e-300, 1e-12, 1e-6, 0.01, 0.074, 0.075, 0.3, 0.5, 0.7, 0.925, 0.926, 0.99, 1.0 - 1e-12}) {
        const double q = boost::math::quantile(nd, p);
        CHECK(normal_quantile(p) == doctest::Approx(q).epsilon(1e-14).scale(1.0));
    }
}

TEST_CASE("batch quantile equals scalar quantile bitwise") {
    std::vector<double> p(1000), out(1000);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = u32_to_open_unit(static_cast<std::uint32_t>(i * 4294967u + 17u));
    normal_quantile_batch(p.data(), out.data(), p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double s = normal_quantile(p[i]);
        CHECK(std::memcmp(&s, &out[i], sizeof(double)) == 0);
    }
}

TEST_CASE("open unit mapping never hits 0 or 1") {
    CHECK(u32_to_open_unit(0) > 0.0);
    CHECK(u32_to_open_unit(0xffffffffu) < 1.0);
}

TEST_CASE("standard normals are pure functions of their key") {
    CHECK(standard_normal(1, 2, 3, 4) == standard_normal(1, 2, 3, 4));
    CHECK(standard_normal(1, 2, 3, 4) != standard_normal(1, 2, 3, 5));
    CHECK(standard_normal(1, 2, 3, 4) != standard_normal(1, 3, 3, 4));
    CHECK(standard_normal(1, 2, 3, 4) != standard_normal(2, 2, 3, 4));
    CHECK(standard_normal(1ull << 40, 2, 3, 4) != standard_normal(1, 2, 3, 4));
}

TEST_CASE("increments match per-site draws and scale with sqrt(dt)") {
    const SheetGrid g{0.1, 0.01, 64, 9, 3};
    const auto inc = sample_increments(g, 17);
    REQUIRE(inc.values.size() == 64);
    for (std::size_t j = 0; j < 64; ++j) {
        CHECK(inc.values[j] == doctest::Approx(0.1 * standard_normal(9, 3, j, 17)).epsilon(1e-15));
    }
}

TEST_CASE("increment moments") {
    const std::size_t n = 1024, steps = 100;
    const SheetGrid g{0.1, 0.25, n, 5, 0};
    double s1 = 0.0, s2 = 0.0, cross_site = 0.0, cross_step = 0.0;
    auto prev = sample_increments(g, 0);
    for (std::size_t k = 1; k <= steps; ++k) {
        const auto cur = sample_increments(g, k);
        for (std::size_t j = 0; j < n; ++j) {
            s1 += cur.values[j];
            s2 += cur.values[j] * cur.values[j];
            cross_site += cur.values[j] * cur.values[(j + 1) % n];
            cross_step += cur.values[j] * prev.values[j];
        }
        prev = cur;
    }
    const double count = static_cast<double>(n * steps);
    const double var = s2 / count;
    // dt = 0.25; standard errors: mean 0.5/sqrt(N), variance 0.25 sqrt(2/N), covariance 0.25/sqrt(N)
    const double se = 1.0 / std::sqrt(count);
    CHECK(std::abs(s1 / count) < 3.0 * 0.5 * se);
    CHECK(std::abs(var - 0.25) < 3.0 * 0.25 * std::sqrt(2.0) * se);
    CHECK(std::abs(cross_site / count) < 3.0 * 0.25 * se);
    CHECK(std::abs(cross_step / count) < 3.0 * 0.25 * se);
}

TEST_CASE("coarsen") {
    std::vector<double> zeros(8, 0.0), out(4);
    coarsen(zeros, out);
    for (double v : out) CHECK(v == 0.0);
    std::vector<double> pair{1.0, 1.0};
    std::vector<double> one(1);
    coarsen(pair, one);
    CHECK(one[0] == doctest::Approx(std::sqrt(2.0)));
    std::vector<double> odd(3);
    CHECK_THROWS_AS(coarsen(NoiseIncrement{odd}), InvalidArgument);
}

TEST_CASE("coarsened increments keep variance dt") {
    const SheetGrid g{0.05, 0.04, 2048, 11, 1};
    double s2 = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < 100; ++k) {
        const auto c = coarsen(sample_increments(g, k));
        for (double v : c.values) s2 += v * v;
        count += c.values.size();
    }
    const double var = s2 / static_cast<double>(count);
    CHECK(std::abs(var - 0.04) < 3.0 * 0.04 * std::sqrt(2.0 / static_cast<double>(count)));
}

TEST_CASE("coupled streams") {
    const SheetGrid fine{0.05, 0.001, 64, 4, 2};
    const SheetGrid coarse{0.1, 0.002, 32, 4, 2};
    const CoupledStreams s(fine, coarse);
    CHECK(s.ratio() == 2);
    std::vector<double> f0(64), f1(64), c0(32), c1(32), expected(32);
    s.fine(6, f0);
    s.fine(7, f1);
    s.coarse(3, expected);
    coarsen(f0, c0);
    coarsen(f1, c1);
    for (std::size_t j = 0; j < 32; ++j) CHECK(expected[j] == c0[j] + c1[j]);

    const SheetGrid same{0.1, 0.001, 32, 4, 2};
    const CoupledStreams unit(fine, same);
    std::vector<double> u(32);
    unit.coarse(5, u);
    s.fine(5, f0);
    coarsen(f0, c0);
    for (std::size_t j = 0; j < 32; ++j) CHECK(u[j] == c0[j]);

    CHECK_THROWS_AS(CoupledStreams(fine, SheetGrid{0.1, 0.0015, 32, 4, 2}), InvalidArgument);
    CHECK_THROWS_AS(CoupledStreams(fine, SheetGrid{0.1, 0.002, 32, 5, 2}), InvalidArgument);
    CHECK_THROWS_AS(CoupledStreams(fine, SheetGrid{0.1, 0.002, 16, 4, 2}), InvalidArgument);
}

TEST_CASE("three-level coarsening commutes bitwise") {
    const SheetGrid g{0.025, 0.001, 64, 8, 0};
    const auto f = sample_increments(g, 3);
    const auto twice = coarsen(coarsen(f));
    const auto mid = coarsen(f);
    const auto again = coarsen(mid);
    for (std::size_t j = 0; j < twice.values.size(); ++j) CHECK(std::memcmp(&twice.values[j], &again.values[j], 8) == 0);
}

TEST_CASE("sheet grid validation") {
    CHECK_THROWS_AS((SheetGrid{0.0, 0.01, 8, 0, 0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((SheetGrid{0.1, 0.0, 8, 0, 0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((SheetGrid{0.1, 0.01, 0, 0, 0}.validate()), InvalidArgument);
}
