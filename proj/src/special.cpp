#include "shelab/special.hpp"

#include <array>
#include <cmath>

#include "shelab/errors.hpp"

namespace shelab {

double hurwitz_zeta(double s, double a, std::size_t direct_terms) {
    if (!(s > 1.0) || !(a > 0.0)) {
        throw InvalidArgument("hurwitz_zeta requires s > 1 and a > 0");
    }
    if (direct_terms < 8) direct_terms = 8;

    // Smallest terms first.
    double head = 0.0;
    for (std::size_t n = direct_terms; n-- > 0;) {
        head += std::pow(static_cast<double>(n) + a, -s);
    }

    // B_{2k} / (2k)!
    static constexpr std::array<double, 6> kBernoulliOverFactorial = {
        1.0 / 6.0 / 2.0,
        -1.0 / 30.0 / 24.0,
        1.0 / 42.0 / 720.0,
        -1.0 / 30.0 / 40320.0,
        5.0 / 66.0 / 3628800.0,
        -691.0 / 2730.0 / 479001600.0,
    };

    const double x = static_cast<double>(direct_terms) + a;
    double tail = std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
    // rising = s (s+1) ... (s+2k-2), power = x^{-s-2k+1}
    double rising = s;
    double power = std::pow(x, -s - 1.0);
    for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
        tail += kBernoulliOverFactorial[k] * rising * power;
        rising *= (s + 2.0 * k + 1.0) * (s + 2.0 * k + 2.0);
        power /= x * x;
    }
    return head + tail;
}

double riemann_zeta(double s) { return hurwitz_zeta(s, 1.0, 100000); }

}  // namespace shelab
