#include "shelab/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shelab/errors.hpp"
#include "shelab/stats.hpp"

namespace shelab {

VolterraOracle solve_pam_volterra(double nu, double lambda, double T, double h) {
    if (!(nu > 0.0)) throw InvalidArgument("oracle needs nu > 0");
    if (!(lambda >= 0.0)) throw InvalidArgument("oracle needs lambda >= 0");
    if (!(T > 0.0) || !(h > 0.0)) throw InvalidArgument("oracle needs T > 0 and h > 0");
    const auto steps = static_cast<std::size_t>(std::ceil(T / h - 1e-9));
    VolterraOracle out;
    out.nu = nu;
    out.lambda = lambda;
    out.h = T / static_cast<double>(steps);
    const double hh = out.h;
    const double coupling = lambda * lambda / std::sqrt(8.0 * std::numbers::pi * nu);

    // Panel k covers lags u in [k h, (k+1) h]. For m linear on the panel, the
    // node at lag k h gets weight a[k] and the node at lag (k+1) h gets b[k].
    std::vector<double> a(steps), b(steps);
    const double sqrt_h = std::sqrt(hh);
    for (std::size_t k = 0; k < steps; ++k) {
        const double kd = static_cast<double>(k);
        const double i_half = 2.0 * sqrt_h * (std::sqrt(kd + 1.0) - std::sqrt(kd));  // int u^{-1/2}
        const double i_three = (2.0 / 3.0) * hh * sqrt_h * (std::pow(kd + 1.0, 1.5) - std::pow(kd, 1.5));
        a[k] = ((kd + 1.0) * hh * i_half - i_three) / hh;
        b[k] = (i_three - kd * hh * i_half) / hh;
    }
    // Node m_j (0 < j < n) collects b[n-1-j] + a[n-j]; m_0 gets b[n-1] alone.
    std::vector<double> w(steps, 0.0);
    for (std::size_t k = 1; k < steps; ++k) w[k] = b[k - 1] + a[k];
    out.m.assign(steps + 1, 1.0);
    const double* m = out.m.data();
    for (std::size_t n = 1; n <= steps; ++n) {
        double acc[4] = {0.0, 0.0, 0.0, 0.0};
        std::size_t j = 1;
        for (; j + 4 <= n; j += 4) {
            acc[0] += w[n - j] * m[j];
            acc[1] += w[n - j - 1] * m[j + 1];
            acc[2] += w[n - j - 2] * m[j + 2];
            acc[3] += w[n - j - 3] * m[j + 3];
        }
        for (; j < n; ++j) acc[0] += w[n - j] * m[j];
        const double total = b[n - 1] * m[0] + ((acc[0] + acc[1]) + (acc[2] + acc[3]));
        out.m[n] = (1.0 + coupling * total) / (1.0 - coupling * a[0]);
    }
    return out;
}

VolterraOracle pam_second_moment_oracle(double nu, double lambda, double T, double h, bool check_refinement) {
    VolterraOracle coarse = solve_pam_volterra(nu, lambda, T, h);
    if (!check_refinement) return coarse;
    const VolterraOracle fine = solve_pam_volterra(nu, lambda, T, coarse.h / 2.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < coarse.m.size(); ++i) {
        worst = std::max(worst, std::abs(fine.m[2 * i] - coarse.m[i]) / std::abs(fine.m[2 * i]));
    }
    if (worst > 1e-4) {
        throw GridTooCoarse("Volterra oracle changes by more than 1e-4 under grid halving");
    }
    return fine;
}

double VolterraOracle::operator()(double t) const {
    if (t <= 0.0) return m.front();
    const double pos = t / h;
    const auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= m.size()) return m.back();
    const double frac = pos - static_cast<double>(i);
    return m[i] + frac * (m[i + 1] - m[i]);
}

double VolterraOracle::log_slope(double t0, double t1) const {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double t = h * static_cast<double>(i);
        if (t >= t0 - 1e-12 && t <= t1 + 1e-12) {
            x.push_back(t);
            y.push_back(std::log(m[i]));
        }
    }
    return fit_line(x, y).slope;
}

}  // namespace shelab
