#include "shelab/walk_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "quadrature.hpp"
#include "shelab/errors.hpp"
#include "shelab/special.hpp"

namespace shelab {

namespace {

constexpr double kPi = std::numbers::pi;

// Least-squares fit of g = nu + C z^a for fixed a. Returns the residual sum
// of squares and writes nu and C.
double fit_two_term(std::span<const double> z, std::span<const double> g, double a, double& nu,
                    double& c) {
    const double n = static_cast<double>(z.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double x = std::pow(z[i], a);
        sx += x;
        sy += g[i];
        sxx += x * x;
        sxy += x * g[i];
    }
    const double det = n * sxx - sx * sx;
    if (det <= 0) {
        nu = sy / n;
        c = 0;
    } else {
        c = (n * sxy - sx * sy) / det;
        nu = (sy - c * sx) / n;
    }
    double rss = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double r = g[i] - nu - c * std::pow(z[i], a);
        rss += r * r;
    }
    return rss;
}

}  // namespace

double DislocationMeasure::mass(long j) const {
    const long aj = j < 0 ? -j : j;
    if (aj > radius()) return 0.0;
    return one_sided[static_cast<std::size_t>(aj)];
}

double DislocationMeasure::total_mass() const {
    double total = 0.0;
    for (int j = radius(); j >= 1; --j) total += 2.0 * one_sided[static_cast<std::size_t>(j)];
    return total + one_sided[0];
}

WalkModel make_simple_walk() {
    WalkModel model;
    model.alpha = 2.0;
    model.nu = 0.5;
    model.a = 2.0;
    model.family = "simple";
    model.measure.one_sided = {0.0, 0.5};
    model.measure.truncation_radius = 1;
    return model;
}

double stable_tail_viscosity(double alpha) {
    if (!(alpha > 1.0 && alpha < 2.0)) {
        throw InvalidArgument("stable_tail_viscosity requires 1 < alpha < 2");
    }
    const double s = alpha + 1.0;
    auto integrand = [s](double x) {
        if (x <= 0.0) return 0.0;
        const double h = std::sin(0.5 * x) / x;
        return 2.0 * h * h * std::pow(x, 2.0 - s);
    };
    // x^{1 - alpha} singularity at the origin.
    double total = detail::integrate_tanh_sinh(integrand, 0.0, 2.0 * kPi);

    // Remaining periods: the non-oscillatory part is exact, the cosine part
    // is integrated period by period and closed with its asymptotic series.
    constexpr int kPeriods = 400;
    const double x0 = 2.0 * kPi;
    const double x1 = 2.0 * kPi * kPeriods;
    double cosine_part = 0.0;
    for (int p = kPeriods - 1; p >= 1; --p) {
        const double lo = 2.0 * kPi * p;
        cosine_part += detail::integrate_gauss30(
            [s](double x) { return std::cos(x) * std::pow(x, -s); }, lo, lo + 2.0 * kPi);
    }
    // int_X^inf cos x x^{-s} dx for X a multiple of 2 pi.
    const double tail_cos = s * std::pow(x1, -s - 1.0) -
                            s * (s + 1) * (s + 2) * std::pow(x1, -s - 3.0) +
                            s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * std::pow(x1, -s - 5.0);
    const double power_part = std::pow(x0, 1.0 - s) / (s - 1.0);
    total += power_part - cosine_part - tail_cos;
    return total / riemann_zeta(s);
}

WalkModel make_stable_tail_walk(double alpha, int truncation_radius, std::size_t box_size,
                                TailMode mode, bool strict) {
    if (!(alpha > 1.0 && alpha < 2.0)) {
        throw InvalidArgument("stable-tail walk requires 1 < alpha < 2");
    }
    if (truncation_radius < 2) {
        throw InvalidArgument("stable-tail walk requires truncation_radius >= 2");
    }
    if (box_size < 2 * static_cast<std::size_t>(truncation_radius)) {
        throw InvalidArgument("stable-tail walk requires box_size >= 2 * truncation_radius");
    }
    const double s = alpha + 1.0;
    const double zeta = riemann_zeta(s);

    WalkModel model;
    model.alpha = alpha;
    model.nu = stable_tail_viscosity(alpha);
    model.a = 2.0 - alpha;
    model.family = "stable_tail";
    DislocationMeasure& m = model.measure;

    if (mode == TailMode::redistribute) {
        const auto radius = static_cast<std::size_t>(truncation_radius);
        m.one_sided.assign(radius + 1, 0.0);
        double kept = 0.0;
        for (std::size_t j = radius; j >= 1; --j) kept += std::pow(static_cast<double>(j), -s);
        const double kept_fraction = kept / zeta;
        if (strict && kept_fraction < 1.0 - 1e-9) {
            throw InvalidArgument("truncation radius holds less than 1 - 1e-9 of the jump mass");
        }
        for (std::size_t j = 1; j <= radius; ++j) {
            m.one_sided[j] = std::pow(static_cast<double>(j), -s) / (2.0 * kept);
        }
        m.truncation_radius = truncation_radius;
        m.removed_tail_mass = 1.0 - kept_fraction;
        m.box_size = box_size;
        return model;
    }

    if (box_size % 2 != 0) throw InvalidArgument("aliased walk requires an even box size");
    const std::size_t half = box_size / 2;
    const double n = static_cast<double>(box_size);
    const double scale = std::pow(n, -s) / (2.0 * zeta);
    m.one_sided.assign(half + 1, 0.0);
    m.one_sided[0] = 2.0 * scale * zeta;  // jumps by nonzero multiples of N
    for (std::size_t r = 1; r < half; ++r) {
        const double frac = static_cast<double>(r) / n;
        m.one_sided[r] = scale * (hurwitz_zeta(s, frac) + hurwitz_zeta(s, 1.0 - frac));
    }
    m.one_sided[half] = scale * hurwitz_zeta(s, 0.5);
    m.truncation_radius = static_cast<int>(half);
    m.aliased = true;
    m.box_size = box_size;
    if (strict && std::abs(m.total_mass() - 1.0) > 1e-9) {
        throw InvalidArgument("aliased jump law does not carry unit mass");
    }
    return model;
}

double char_fn(const WalkModel& model, double z) {
    const auto& q = model.measure.one_sided;
    double acc = 0.0;
    for (std::size_t j = q.size(); j-- > 1;) acc += 2.0 * q[j] * std::cos(static_cast<double>(j) * z);
    return acc + q[0];
}

double one_minus_char_fn(const WalkModel& model, double z) {
    const auto& q = model.measure.one_sided;
    double acc = 0.0;
    for (std::size_t j = q.size(); j-- > 1;) {
        const double h = std::sin(0.5 * static_cast<double>(j) * z);
        acc += 4.0 * q[j] * h * h;
    }
    return acc;
}

std::vector<double> one_minus_char_fn_torus(const WalkModel& model, std::size_t n) {
    if (n < 2) throw InvalidArgument("torus needs at least two sites");
    // sin^2(pi m / n) is n-periodic in m.
    std::vector<double> sin2(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double h = std::sin(kPi * static_cast<double>(m) / static_cast<double>(n));
        sin2[m] = h * h;
    }
    const auto& q = model.measure.one_sided;
    std::vector<double> out(n / 2 + 1, 0.0);
    for (std::size_t k = 1; k <= n / 2; ++k) {
        double acc = 0.0;
        for (std::size_t j = q.size(); j-- > 1;) acc += 4.0 * q[j] * sin2[(j * k) % n];
        out[k] = acc;
    }
    return out;
}

std::vector<double> default_assumption_grid() {
    std::vector<double> grid;
    constexpr int kFit = 64;
    for (int i = 0; i < kFit; ++i) {
        const double u = static_cast<double>(i) / (kFit - 1);
        grid.push_back(kFitWindowMin * std::pow(kFitWindowMax / kFitWindowMin, u));
    }
    constexpr int kUniform = 10001;
    for (int i = 0; i < kUniform; ++i) {
        grid.push_back(-kPi + 2.0 * kPi * static_cast<double>(i) / (kUniform - 1));
    }
    return grid;
}

AssumptionReport verify_assumption(const WalkModel& model, std::span<const double> z_grid) {
    if (z_grid.empty()) throw InvalidArgument("verify_assumption: empty grid");
    AssumptionReport report;
    report.grid_points = z_grid.size();
    report.grid_min = *std::min_element(z_grid.begin(), z_grid.end());
    report.grid_max = *std::max_element(z_grid.begin(), z_grid.end());
    report.truncation_tail_mass = model.measure.removed_tail_mass;
    if (report.grid_min > -kPi + 1e-9 || report.grid_max < kPi - 1e-9) {
        throw InvalidArgument("verify_assumption: grid must cover [-pi, pi]");
    }

    std::vector<double> zs;
    for (double z : z_grid) {
        if (z >= kFitWindowMin && z <= kFitWindowMax) zs.push_back(z);
    }
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
    if (zs.size() < 8) throw InvalidArgument("verify_assumption: need >= 8 points in [0.01, 0.3]");
    report.fit_points = zs.size();

    std::vector<double> g(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) {
        g[i] = one_minus_char_fn(model, zs[i]) / std::pow(zs[i], model.alpha);
    }

    // Coarse scan of the remainder exponent, then golden-section refinement.
    double best_a = 0.0, best_rss = std::numeric_limits<double>::infinity();
    double nu = 0, c = 0;
    for (int i = 1; i <= 240; ++i) {
        const double a = 0.025 * i;
        const double rss = fit_two_term(zs, g, a, nu, c);
        if (rss < best_rss) {
            best_rss = rss;
            best_a = a;
        }
    }
    double lo = std::max(1e-3, best_a - 0.025), hi = best_a + 0.025;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = fit_two_term(zs, g, x1, nu, c), f2 = fit_two_term(zs, g, x2, nu, c);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = fit_two_term(zs, g, x1, nu, c);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = fit_two_term(zs, g, x2, nu, c);
        }
    }
    report.a_hat = 0.5 * (lo + hi);
    fit_two_term(zs, g, report.a_hat, nu, c);
    report.nu_hat = nu;

    double misfit = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        misfit = std::max(misfit, std::abs(g[i] - nu - c * std::pow(zs[i], report.a_hat)));
        scale = std::max(scale, std::abs(g[i]));
    }
    report.fit_misfit = misfit / scale;

    report.max_unit_violation = -std::numeric_limits<double>::infinity();
    for (double z : z_grid) {
        if (std::abs(z) >= kFitWindowMin) {
            report.max_unit_violation = std::max(report.max_unit_violation, -one_minus_char_fn(model, z));
        }
    }

    if (!(report.nu_hat > 0.0) || !std::isfinite(report.a_hat)) {
        throw FitFailure("verify_assumption: fitted viscosity is not positive");
    }
    // The leading-order residual g(z) - nu_hat must be monotone in z.
    const double tol = 1e-9 * scale;
    int direction = 0;
    for (std::size_t i = 1; i < zs.size(); ++i) {
        const double step = g[i] - g[i - 1];
        if (std::abs(step) <= tol) continue;
        const int d = step > 0 ? 1 : -1;
        if (direction != 0 && d != direction) {
            throw FitFailure("verify_assumption: residual of the small-z law is not monotone");
        }
        direction = d;
    }
    if (report.fit_misfit > 1e-2) {
        throw FitFailure("verify_assumption: nu + C z^a does not describe 1 - mu_hat");
    }
    return report;
}

void check_box_compatible(const WalkModel& model, std::size_t n) {
    const auto r = static_cast<std::size_t>(model.measure.radius());
    if (model.measure.aliased) {
        if (n != model.measure.box_size) {
            throw InvalidArgument("aliased walk is tied to its box size");
        }
    } else if (n < 2 * r) {
        throw InvalidArgument("periodic box must hold at least 2 * truncation_radius sites");
    }
}

void generator_apply(const WalkModel& model, std::span<const double> field, std::span<double> out) {
    const std::size_t n = field.size();
    check_box_compatible(model, n);
    if (out.size() != n) throw InvalidArgument("generator_apply: output size mismatch");
    const auto& q = model.measure.one_sided;
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t j = 1; j < q.size(); ++j) {
        const double w = q[j];
        if (w == 0.0) continue;
        const std::size_t jm = j % n;
        for (std::size_t m = 0; m < n; ++m) {
            const std::size_t up = m + jm >= n ? m + jm - n : m + jm;
            const std::size_t down = m >= jm ? m - jm : m + n - jm;
            out[m] += w * (field[up] + field[down] - 2.0 * field[m]);
        }
    }
}

std::vector<double> generator_apply(const WalkModel& model, std::span<const double> field) {
    std::vector<double> out(field.size());
    generator_apply(model, field, out);
    return out;
}

}  // namespace shelab
