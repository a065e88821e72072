#include <doctest.h>

#include <cmath>

#include "shelab/errors.hpp"
#include "shelab/volterra.hpp"

using namespace shelab;

namespace {

// m(t) = e^{a^2 t} (1 + erf(a sqrt t)) with a = lambda^2 / sqrt(8 nu).
double closed_form(double nu, double lambda, double t) {
    const double a = lambda * lambda / std::sqrt(8.0 * nu);
    return std::exp(a * a * t) * (1.0 + std::erf(a * std::sqrt(t)));
}

}  // namespace

TEST_CASE("oracle matches the closed form") {
    for (double nu : {0.5, 1.0}) {
        for (double lambda : {0.5, 1.0}) {
            const auto o = pam_second_moment_oracle(nu, lambda, 3.0);
            for (double t : {0.1, 0.5, 1.0, 2.0, 3.0}) {
                CHECK(o(t) == doctest::Approx(closed_form(nu, lambda, t)).epsilon(2e-6));
            }
        }
    }
}

TEST_CASE("oracle self-convergence under grid halving") {
    const auto a = solve_pam_volterra(0.5, 1.0, 2.0, 2e-3);
    const auto b = solve_pam_volterra(0.5, 1.0, 2.0, 1e-3);
    for (std::size_t i = 0; i < a.m.size(); ++i) CHECK(std::abs(b.m[2 * i] / a.m[i] - 1.0) < 1e-4);
}

TEST_CASE("oracle long-time slope") {
    const auto o = pam_second_moment_oracle(0.5, 1.0, 10.0);
    // d/dt log m -> a^2 = lambda^4 / (8 nu) = 1/4
    CHECK(o.log_slope(5.0, 10.0) == doctest::Approx(0.25).epsilon(0.15));
    const double exact = (std::log(closed_form(0.5, 1.0, 10.0)) - std::log(closed_form(0.5, 1.0, 5.0))) / 5.0;
    CHECK(o.log_slope(5.0, 10.0) == doctest::Approx(exact).epsilon(1e-3));
}

TEST_CASE("lambda = 0 gives m = 1") {
    const auto o = pam_second_moment_oracle(0.5, 0.0, 1.0);
    for (double v : o.m) CHECK(v == 1.0);
}

TEST_CASE("oracle rejects bad input and coarse grids") {
    CHECK_THROWS_AS(solve_pam_volterra(0.0, 1.0, 1.0, 1e-3), InvalidArgument);
    CHECK_THROWS_AS(solve_pam_volterra(0.5, 1.0, 1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(pam_second_moment_oracle(0.5, 3.0, 2.0, 0.25), GridTooCoarse);
}
