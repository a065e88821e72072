#include "quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace shelab::detail {

double integrate_gk(const std::function<double(double)>& f, double a, double b, double tol,
                    unsigned max_depth, double* error) {
    double err = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, a, b, max_depth, tol, &err);
    if (error != nullptr) *error = err;
    return value;
}

double integrate_gauss30(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss<double, 30>::integrate(f, a, b);
}

double integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           double tol) {
    static boost::math::quadrature::tanh_sinh<double> integrator;
    auto g = [&f](double x) { return f(x); };
    return integrator.integrate(g, a, b, tol);
}

}  // namespace shelab::detail
