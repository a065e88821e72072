#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "shelab/errors.hpp"
#include "shelab/walk_models.hpp"

using namespace shelab;

namespace {

double closed_form_nu(double alpha) {
    const double pi = std::numbers::pi;
    return pi / (2.0 * boost::math::zeta(alpha + 1.0) * boost::math::tgamma(alpha + 1.0) *
                 std::sin(pi * alpha / 2.0));
}

}  // namespace

TEST_CASE("simple walk") {
    const auto w = make_simple_walk();
    CHECK(w.alpha == 2.0);
    CHECK(w.nu == 0.5);
    CHECK(w.measure.mass(1) == 0.5);
    CHECK(w.measure.mass(-1) == 0.5);
    CHECK(w.measure.mass(0) == 0.0);
    CHECK(w.measure.mass(2) == 0.0);
    CHECK(w.measure.total_mass() == 1.0);
    for (double z : {0.1, 1.0, 2.5}) CHECK(char_fn(w, z) == doctest::Approx(std::cos(z)).epsilon(1e-15));
}

TEST_CASE("heavy-tail viscosity matches the positive closed form") {
    for (double alpha : {1.2, 1.5, 1.8}) {
        CHECK(stable_tail_viscosity(alpha) == doctest::Approx(closed_form_nu(alpha)).epsilon(1e-12));
    }
}

TEST_CASE("redistributed heavy-tail walk keeps unit mass") {
    const auto w = make_stable_tail_walk(1.5, 256, 512);
    CHECK(w.measure.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(w.measure.removed_tail_mass > 0.0);
    CHECK(w.measure.removed_tail_mass < 1e-3);
    CHECK(w.measure.mass(3) == w.measure.mass(-3));
    CHECK(w.measure.mass(257) == 0.0);
    // q(j) ~ j^{-(alpha+1)}
    CHECK(w.measure.mass(2) / w.measure.mass(4) == doctest::Approx(std::pow(2.0, 2.5)).epsilon(1e-12));
}

TEST_CASE("strict mode rejects a lossy truncation") {
    CHECK_THROWS_AS(make_stable_tail_walk(1.5, 16, 64, TailMode::redistribute, true), InvalidArgument);
}

TEST_CASE("aliased walk equals the folded law") {
    const std::size_t n = 64;
    const double alpha = 1.5, s = alpha + 1.0;
    const auto w = make_stable_tail_walk(alpha, static_cast<int>(n / 2), n, TailMode::alias);
    CHECK(w.measure.total_mass() == doctest::Approx(1.0).epsilon(1e-13));
    const double zeta = boost::math::zeta(s);
    // Residue r collects q(r + kn) over all k.
    for (long r : {1L, 5L, 31L}) {
        double folded = 0.0;
        for (long k = -200000; k <= 200000; ++k) {
            const long j = r + k * static_cast<long>(n);
            if (j != 0) folded += std::pow(static_cast<double>(std::labs(j)), -s) / (2.0 * zeta);
        }
        CHECK(w.measure.mass(r) == doctest::Approx(folded).epsilon(1e-6));
    }
    // Exact characteristic function on the torus.
    const auto torus = one_minus_char_fn_torus(w, n);
    const double z = 2.0 * std::numbers::pi * 3.0 / static_cast<double>(n);
    double direct = 0.0;
    for (long j = 1; j < 2000000; ++j) direct += 2.0 * std::pow(static_cast<double>(j), -s) / (2.0 * zeta) * (1.0 - std::cos(j * z));
    CHECK(torus[3] == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("one minus char fn has no cancellation at small z") {
    const auto w = make_simple_walk();
    const double z = 1e-6;
    CHECK(one_minus_char_fn(w, z) == doctest::Approx(2.0 * std::sin(z / 2) * std::sin(z / 2)).epsilon(1e-14));
}

TEST_CASE("assumption fit recovers nu and a for the simple walk") {
    const auto rep = verify_assumption(make_simple_walk(), default_assumption_grid());
    CHECK(rep.nu_hat == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(rep.a_hat == doctest::Approx(2.0).epsilon(0.05));
    CHECK(rep.fit_misfit < 1e-2);
    CHECK(rep.max_unit_violation < 0.0);
}

TEST_CASE("assumption fit for the aliased heavy tail") {
    const auto w = make_stable_tail_walk(1.5, 2048, 4096, TailMode::alias);
    const auto rep = verify_assumption(w, default_assumption_grid());
    CHECK(rep.nu_hat == doctest::Approx(w.nu).epsilon(1e-3));
    CHECK(rep.a_hat == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("assumption grid must cover [-pi, pi]") {
    std::vector<double> grid;
    for (int i = 0; i < 50; ++i) grid.push_back(0.01 + 0.005 * i);
    CHECK_THROWS_AS(verify_assumption(make_simple_walk(), grid), InvalidArgument);
}

TEST_CASE("generator annihilates constants and matches the discrete Laplacian") {
    const auto w = make_simple_walk();
    std::vector<double> ones(16, 3.0);
    for (double v : generator_apply(w, ones)) CHECK(v == 0.0);
    std::vector<double> f(16);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::sin(0.3 * static_cast<double>(i * i));
    const auto g = generator_apply(w, f);
    for (std::size_t m = 0; m < f.size(); ++m) {
        const double lap = 0.5 * (f[(m + 1) % 16] + f[(m + 15) % 16]) - f[m];
        CHECK(g[m] == doctest::Approx(lap).epsilon(1e-14));
    }
}

TEST_CASE("generator integrates to zero on the torus") {
    const auto w = make_stable_tail_walk(1.2, 8, 32);
    std::vector<double> f(32);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::cos(0.7 * static_cast<double>(i)) + 0.1 * i;
    double total = 0.0;
    for (double v : generator_apply(w, f)) total += v;
    CHECK(std::abs(total) < 1e-12);
}

TEST_CASE("box compatibility") {
    CHECK_NOTHROW(check_box_compatible(make_simple_walk(), 2));
    const auto w = make_stable_tail_walk(1.5, 16, 32);
    CHECK_THROWS_AS(check_box_compatible(w, 16), InvalidArgument);
    const auto a = make_stable_tail_walk(1.5, 16, 32, TailMode::alias);
    CHECK_THROWS_AS(check_box_compatible(a, 64), InvalidArgument);
}

TEST_CASE("invalid walks") {
    CHECK_THROWS_AS(make_stable_tail_walk(2.0, 16, 32), InvalidArgument);
    CHECK_THROWS_AS(make_stable_tail_walk(1.0, 16, 32), InvalidArgument);
    CHECK_THROWS_AS(make_stable_tail_walk(1.5, 1, 32), InvalidArgument);
    CHECK_THROWS_AS(make_stable_tail_walk(1.5, 16, 31, TailMode::alias), InvalidArgument);
}
