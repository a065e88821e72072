#include <doctest.h>

#include "shelab/errors.hpp"
#include "shelab/sigma.hpp"

using namespace shelab;

TEST_CASE("sigma kinds evaluate as documented") {
    const SigmaSpec lin{SigmaKind::linear, 2.0, 0.0};
    CHECK(lin(1.5) == 3.0);
    CHECK(lin(-1.0) == -2.0);
    const SigmaSpec abs_lin{SigmaKind::abs_linear, 0.5, 0.0};
    CHECK(abs_lin(-4.0) == 2.0);
    const SigmaSpec clipped{SigmaKind::clipped_linear, 1.0, 0.5};
    CHECK(clipped(0.2) == 0.2);
    CHECK(clipped(3.0) == 0.5);
    CHECK(clipped(-3.0) == -0.5);
    const SigmaSpec affine{SigmaKind::affine_bounded, 0.5, 1.0};
    CHECK(affine(0.0) == 1.0);
    CHECK(affine(4.0) == 1.5);
    CHECK(affine(-4.0) == 0.5);
}

TEST_CASE("Lipschitz and lower-linear constants") {
    CHECK(sigma_linear(1.0).lip() == 1.0);
    CHECK(sigma_linear(1.0).l_lower() == 1.0);
    CHECK(sigma_abs_linear(0.7).l_lower() == 0.7);
    CHECK(SigmaSpec{SigmaKind::clipped_linear, 1.0, 0.5}.l_lower() == 0.0);
    CHECK(SigmaSpec{SigmaKind::affine_bounded, 0.5, 1.0}.l_lower() == 0.0);
    CHECK(sigma_linear(-2.0).lip() == 2.0);
}

TEST_CASE("lower-linear bound holds on the half-line") {
    for (const auto& s : {sigma_linear(1.3), sigma_abs_linear(0.4), SigmaSpec{SigmaKind::clipped_linear, 2.0, 1.0}}) {
        for (double z = 0.0; z < 10.0; z += 0.1) CHECK(s.l_lower() * z <= s(z) + 1e-15);
    }
}

TEST_CASE("zero fixing and zero detection") {
    CHECK(sigma_linear(1.0).fixes_zero());
    CHECK_FALSE((SigmaSpec{SigmaKind::affine_bounded, 0.5, 1.0}.fixes_zero()));
    CHECK(sigma_linear(0.0).is_zero());
    CHECK_FALSE(sigma_abs_linear(0.1).is_zero());
}

TEST_CASE("parsing and validation") {
    CHECK(parse_sigma_kind("abs_linear") == SigmaKind::abs_linear);
    CHECK(to_string(SigmaKind::clipped_linear) == "clipped_linear");
    CHECK_THROWS_AS(parse_sigma_kind("quadratic"), InvalidArgument);
    CHECK_THROWS_AS((SigmaSpec{SigmaKind::clipped_linear, 1.0, -1.0}.validate()), InvalidArgument);
}
