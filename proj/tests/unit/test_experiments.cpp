#include <doctest.h>

#include <cmath>

#include "shelab/errors.hpp"
#include "shelab/experiments.hpp"

using namespace shelab;

namespace {

SheConfig small_config() {
    SheConfig c;
    c.eps = 0.1;
    c.T = 0.2;
    c.n = 64;
    c.seed = 3;
    return c;
}

}  // namespace

TEST_CASE("moment spec values") {
    const std::vector<double> f{1.0, 2.0, 3.0, 4.0};
    CHECK(MomentSpec{{0}, 1, false}.value(f) == 1.0);
    CHECK(MomentSpec{{1, 2}, 1, false}.value(f) == 6.0);
    CHECK(MomentSpec{{1}, 2, false}.value(f) == 4.0);
    // Wraps around the box.
    CHECK(MomentSpec{{-1}, 1, false}.value(f) == 4.0);
    CHECK(MomentSpec{{0}, 2, true}.value(f) == doctest::Approx((1.0 + 4.0 + 9.0 + 16.0) / 4.0));
    CHECK(MomentSpec{{0, 1}, 1, true}.value(f) == doctest::Approx((2.0 + 6.0 + 12.0 + 4.0) / 4.0));
}

TEST_CASE("abort budget") {
    CHECK_NOTHROW(check_abort_budget(1, 100));
    CHECK_THROWS_AS(check_abort_budget(2, 100), Error);
}

TEST_CASE("moment estimates need enough replicas") {
    CHECK_THROWS_AS(estimate_moment(small_config(), MomentSpec{}, 50), InvalidArgument);
}

TEST_CASE("first moment is one for linear sigma") {
    const auto r = estimate_moment(small_config(), MomentSpec{}, 400);
    CHECK(r.replicas == 400);
    CHECK(r.aborted == 0);
    CHECK(std::abs(r.estimate - 1.0) < 3.0 * r.std_error);
}

TEST_CASE("summaries skip aborted samples") {
    std::vector<double> s(200, 2.0);
    s[5] = std::nan("");
    const auto r = summarize_moment(MomentSpec{}, s);
    CHECK(r.aborted == 1);
    CHECK(r.estimate == 2.0);
}

TEST_CASE("comparison with identical sigma is bitwise identical") {
    const auto r = compare_moments(small_config(), sigma_abs_linear(1.0), sigma_abs_linear(1.0),
                                   MomentSpec{{0, 1}, 2, false}, 100);
    CHECK(r.identical);
    CHECK(r.ordered);
    CHECK_FALSE(r.strict);
    CHECK(r.paired_difference == 0.0);
}

TEST_CASE("comparison orders moments under a larger sigma") {
    SheConfig c = small_config();
    c.T = 0.5;
    const auto r = compare_moments(c, sigma_abs_linear(0.5), sigma_abs_linear(1.0), MomentSpec{{0, 1}, 2, false}, 200);
    CHECK(r.ordered);
    CHECK(r.strict);
    CHECK(r.paired_difference > 0.0);
    CHECK(r.realized_min >= 0.0);
}

TEST_CASE("comparison preconditions") {
    // sigma above sigma_bar
    CHECK_THROWS_AS(compare_moments(small_config(), sigma_abs_linear(2.0), sigma_abs_linear(1.0), MomentSpec{}, 100),
                    PreconditionViolation);
    // sigma(0) != 0
    CHECK_THROWS_AS(compare_moments(small_config(), SigmaSpec{SigmaKind::affine_bounded, 0.5, 1.0},
                                    SigmaSpec{SigmaKind::affine_bounded, 0.5, 1.0}, MomentSpec{}, 100),
                    PreconditionViolation);
}

TEST_CASE("Lyapunov bounds") {
    // k = 2: lower = L^4 * 2 * 3 / (48 nu), upper = Lip^4 * 8 / nu.
    CHECK(lyapunov_lower_bound(sigma_linear(1.0), 2, 0.5) == doctest::Approx(0.25));
    CHECK(lyapunov_upper_bound(sigma_linear(1.0), 2, 0.5) == doctest::Approx(16.0));
    CHECK(lyapunov_lower_bound(sigma_linear(1.0), 1, 0.5) == 0.0);
    CHECK(lyapunov_lower_bound(SigmaSpec{SigmaKind::clipped_linear, 1.0, 1.0}, 2, 0.5) == 0.0);
}

TEST_CASE("oracle Lyapunov slope sits inside the bounds") {
    const auto oracle = pam_second_moment_oracle(0.5, 1.0, 10.0);
    const double slope = oracle.log_slope(5.0, 10.0);
    CHECK(slope >= 0.25 * (1.0 - 0.15));
    CHECK(slope <= 16.0);
}

TEST_CASE("convergence rate input checks") {
    SheConfig c = small_config();
    CHECK_THROWS_AS(convergence_rate(c, {0.1, 0.05}, 0.5, 10), InvalidArgument);
    CHECK_THROWS_AS(convergence_rate(c, {0.1, 0.05, 0.02}, 0.5, 10), InvalidArgument);
    CHECK_THROWS_AS(convergence_rate(c, {0.1, 0.05, 0.025}, 1.0, 10), InvalidArgument);
}

TEST_CASE("convergence rate with zero sigma is vacuous") {
    SheConfig c = small_config();
    c.sigma = sigma_linear(0.0);
    const auto r = convergence_rate(c, {0.2, 0.1, 0.05}, 0.5, 4);
    CHECK(r.vacuous);
    CHECK(r.pass);
    CHECK(r.pairs.size() == 2);
}

TEST_CASE("temporal increments scale linearly in the gap") {
    SheConfig c = small_config();
    c.eps = 0.2;
    c.n = 32;
    c.dt = 1e-4;
    const auto r = temporal_increment_scaling(c, 0.05, {1e-4, 2e-4, 4e-4, 8e-4}, 200);
    CHECK(r.exponent == doctest::Approx(1.0).epsilon(0.2));
    CHECK_THROWS_AS(temporal_increment_scaling(c, 0.05, {1.5e-4}, 10), InvalidArgument);
}
