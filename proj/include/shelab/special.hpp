#pragma once

#include <cstddef>

namespace shelab {

// Hurwitz zeta function sum_{n>=0} (n + a)^{-s} for s > 1, a > 0.
// The first `direct_terms` terms are summed explicitly and the remainder is
// closed with an Euler-Maclaurin tail through the B12 correction.
double hurwitz_zeta(double s, double a, std::size_t direct_terms = 32);

// Riemann zeta for s > 1: 1e5 direct terms plus Euler-Maclaurin tail.
double riemann_zeta(double s);

}  // namespace shelab
