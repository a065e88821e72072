#pragma once

#include <cstddef>
#include <vector>

namespace shelab {

/// Solution of m(t) = 1 + lambda^2 int_0^t (8 pi nu (t - s))^{-1/2} m(s) ds on a
/// uniform grid, by product trapezoid integration against piecewise-linear m.
struct VolterraOracle {
    double nu = 0.5;
    double lambda = 1.0;
    double h = 0.0;
    std::vector<double> m;  // m[i] = m(i h)

    double horizon() const { return h * static_cast<double>(m.size() - 1); }
    // Linear interpolation between grid values.
    double operator()(double t) const;
    // Least-squares slope of log m over the grid points in [t0, t1].
    double log_slope(double t0, double t1) const;
};

// Solves on a grid of step h and checks it against step h/2 at shared nodes;
// throws GridTooCoarse if they differ by more than 1e-4 relative.
VolterraOracle pam_second_moment_oracle(double nu, double lambda, double T, double h = 1e-3,
                                        bool check_refinement = true);

// Single solve without the refinement check.
VolterraOracle solve_pam_volterra(double nu, double lambda, double T, double h);

}  // namespace shelab
