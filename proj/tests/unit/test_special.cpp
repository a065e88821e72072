#include <doctest.h>

#include <boost/math/special_functions/zeta.hpp>

#include "shelab/errors.hpp"
#include "shelab/special.hpp"

using namespace shelab;

TEST_CASE("riemann zeta agrees with boost") {
    for (double s : {1.5, 2.0, 2.2, 2.5, 2.8, 3.0, 4.0}) {
        CHECK(riemann_zeta(s) == doctest::Approx(boost::math::zeta(s)).epsilon(1e-13));
    }
}

TEST_CASE("zeta(2) and zeta(4) closed forms") {
    const double pi = 3.14159265358979323846;
    CHECK(riemann_zeta(2.0) == doctest::Approx(pi * pi / 6.0).epsilon(1e-14));
    CHECK(riemann_zeta(4.0) == doctest::Approx(pi * pi * pi * pi / 90.0).epsilon(1e-14));
}

TEST_CASE("hurwitz zeta reduces to riemann zeta at a = 1") {
    for (double s : {2.2, 2.5, 3.0}) {
        CHECK(hurwitz_zeta(s, 1.0) == doctest::Approx(riemann_zeta(s)).epsilon(1e-13));
    }
}

TEST_CASE("hurwitz zeta shift identity") {
    // zeta(s, a) = a^{-s} + zeta(s, a + 1)
    for (double a : {0.1, 0.25, 0.5, 0.9}) {
        const double s = 2.5;
        CHECK(hurwitz_zeta(s, a) == doctest::Approx(std::pow(a, -s) + hurwitz_zeta(s, a + 1.0)).epsilon(1e-13));
    }
}

TEST_CASE("hurwitz zeta at a = 1/2") {
    // zeta(s, 1/2) = (2^s - 1) zeta(s)
    const double s = 2.5;
    CHECK(hurwitz_zeta(s, 0.5) == doctest::Approx((std::pow(2.0, s) - 1.0) * riemann_zeta(s)).epsilon(1e-13));
}

TEST_CASE("zeta rejects s <= 1") {
    CHECK_THROWS_AS(riemann_zeta(1.0), InvalidArgument);
    CHECK_THROWS_AS(hurwitz_zeta(2.0, 0.0), InvalidArgument);
}
