#pragma once

#include <functional>

namespace shelab::detail {

// Adaptive Gauss-Kronrod (61-point) on a finite interval.
double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double tol = 1e-10, unsigned max_depth = 15, double* error = nullptr);

// Fixed 30-point Gauss-Legendre rule, no error control.
double integrate_gauss30(const std::function<double(double)>& f, double a, double b);

// Double-exponential quadrature for integrands with endpoint singularities.
double integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           double tol = 1e-14);

}  // namespace shelab::detail
