#include "shelab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "fft.hpp"
#include "quadrature.hpp"
#include "shelab/errors.hpp"

namespace shelab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxFolds = 1u << 16;

void require_kernel(const StableKernel& k) {
    if (!(k.alpha > 1.0 && k.alpha <= 2.0)) throw InvalidArgument("kernel alpha must lie in (1, 2]");
    if (!(k.nu > 0.0)) throw InvalidArgument("kernel nu must be positive");
}

void require_box(std::size_t n) {
    if (!detail::is_power_of_two(n) || n < 2) throw InvalidArgument("box size must be a power of two");
}

// Density of the unit symbol exp(-|z|^alpha) at u >= 0. Each piece spans at
// most half a period of cos(yu); the y^alpha kink at 0 gets geometric grading.
double unit_density(double alpha, double u) {
    const double y_max = std::pow(40.0, 1.0 / alpha);
    const double h = u > 0.0 ? std::min(0.5, kPi / u) : 0.5;
    auto f = [alpha, u](double y) { return std::cos(y * u) * std::exp(-std::pow(y, alpha)); };
    double acc = 0.0;
    double hi = h;
    for (int level = 0; level < 40; ++level) {
        acc += detail::integrate_gauss30(f, 0.5 * hi, hi);
        hi *= 0.5;
    }
    const auto pieces = static_cast<std::size_t>(std::ceil((y_max - h) / h));
    for (std::size_t i = pieces; i >= 1; --i) {
        const double lo = h * static_cast<double>(i);
        acc += detail::integrate_gauss30(f, lo, std::min(lo + h, y_max));
    }
    return acc / kPi;
}

// Table from a precomputed torus symbol 1 - mu_hat at k = 0 .. n/2.
DiscreteKernelTable table_from_symbol(std::span<const double> one_minus, double eps, double t,
                                      double rate, std::size_t n) {
    DiscreteKernelTable table;
    table.eps = eps;
    table.t = t;
    table.n = n;
    if (t == 0.0) {
        table.raw.assign(n, 0.0);
        table.raw[0] = 1.0;
        return table;
    }
    std::vector<double> spec(n / 2 + 1);
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] = std::exp(-t * rate * one_minus[k]);
    table.raw = detail::inverse_real_even(spec, n);
    return table;
}

double rate_of(const WalkModel& model, double eps, std::optional<double> rho) {
    return std::pow(eps, -rho.value_or(model.alpha));
}

double sup_abs_diff(const DiscreteKernelTable& table, std::span<const double> p, std::size_t* argmax) {
    double best = 0.0;
    std::size_t arg = 0;
    const double inv_eps = 1.0 / table.eps;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = std::abs(std::max(table.raw[i], 0.0) * inv_eps - p[i]);
        if (d > best) {
            best = d;
            arg = i;
        }
    }
    if (argmax) *argmax = arg;
    return best;
}

// (1/pi) int_0^pi g(z) dz for integrands peaked at the origin.
template <class F>
double peaked_frequency_integral(F&& g) {
    double acc = 0.0;
    double hi = kPi;
    // One 61-point panel is exact to rounding on flat pieces, where the
    // adaptive error estimate would otherwise recurse to full depth.
    auto piece = [&](double lo, double hi_) {
        double err = 0.0;
        const double v = detail::integrate_gk(g, lo, hi_, 1e-10, 0, &err);
        // The estimate has an absolute floor near 1e-15 whatever the width.
        if (err <= 1e-12 * std::abs(v) + 1e-14) return v;
        return detail::integrate_gk(g, lo, hi_, std::max(1e-10, 1e-13 / std::abs(v)), 15);
    };
    for (int level = 0; level < 40; ++level) {
        const double lo = hi * 0.5;
        acc += piece(lo, hi);
        hi = lo;
    }
    acc += piece(0.0, hi);
    return acc / kPi;
}

}  // namespace

double DiscreteKernelTable::at(long j) const {
    const long len = static_cast<long>(n);
    long idx = j % len;
    if (idx < 0) idx += len;
    return std::max(raw[static_cast<std::size_t>(idx)], 0.0);
}

std::vector<double> DiscreteKernelTable::values() const {
    std::vector<double> out(raw.size());
    std::transform(raw.begin(), raw.end(), out.begin(), [](double v) { return std::max(v, 0.0); });
    return out;
}

double DiscreteKernelTable::sum() const {
    double acc = 0.0;
    for (double v : raw) acc += std::max(v, 0.0);
    return acc;
}

double stable_density(const StableKernel& kernel, double t, double x) {
    require_kernel(kernel);
    if (!(t > 0.0)) throw InvalidArgument("stable_density requires t > 0");
    const double s = std::pow(kernel.nu * t, 1.0 / kernel.alpha);
    return unit_density(kernel.alpha, std::abs(x) / s) / s;
}

std::vector<double> stable_density_grid(const StableKernel& kernel, double t, double eps, std::size_t n) {
    require_kernel(kernel);
    require_box(n);
    if (!(t > 0.0)) throw InvalidArgument("stable_density_grid requires t > 0");
    if (!(eps > 0.0)) throw InvalidArgument("stable_density_grid requires eps > 0");
    const double dz = 2.0 * kPi / (static_cast<double>(n) * eps);
    const double nd = static_cast<double>(n);
    auto symbol = [&](double z) { return std::exp(-kernel.nu * t * std::pow(z, kernel.alpha)); };

    // Number of aliases folded in: the first omitted frequency must be negligible.
    std::size_t folds = 0;
    while (symbol(((static_cast<double>(folds) + 1.0) * nd - nd / 2.0) * dz) >= 1e-17) {
        if (++folds > kMaxFolds) {
            throw CutoffInsufficient("stable_density_grid: symbol not negligible within the fold limit");
        }
    }
    std::vector<double> spec(n / 2 + 1);
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const double kd = static_cast<double>(k);
        double acc = 0.0;
        for (std::size_t r = folds; r >= 1; --r) {
            const double rn = static_cast<double>(r) * nd;
            acc += symbol((rn + kd) * dz) + symbol((rn - kd) * dz);
        }
        spec[k] = acc + symbol(kd * dz);
    }
    auto out = detail::inverse_real_even(spec, n);
    for (double& v : out) v /= eps;
    return out;
}

DiscreteKernelTable discrete_transition(const WalkModel& model, double eps, double t, std::size_t n,
                                        std::optional<double> rho_exponent) {
    require_box(n);
    if (!(eps > 0.0)) throw InvalidArgument("discrete_transition requires eps > 0");
    if (!(t >= 0.0)) throw InvalidArgument("discrete_transition requires t >= 0");
    check_box_compatible(model, n);
    const auto one_minus = one_minus_char_fn_torus(model, n);
    return table_from_symbol(one_minus, eps, t, rate_of(model, eps, rho_exponent), n);
}

double L2Identity::relative_error() const { return std::abs(lhs - rhs) / rhs; }

L2Identity l2_kernel_identity(const StableKernel& kernel, double t) {
    require_kernel(kernel);
    if (!(t > 0.0)) throw InvalidArgument("l2_kernel_identity requires t > 0");
    const double alpha = kernel.alpha;
    const double s = std::pow(kernel.nu * t, 1.0 / alpha);
    auto f2 = [alpha](double u) {
        const double v = unit_density(alpha, u);
        return v * v;
    };
    constexpr double kCut = 60.0;
    const double breaks[] = {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, kCut};
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < std::size(breaks); ++i) {
        integral += detail::integrate_gk(f2, breaks[i], breaks[i + 1], 1e-11, 4);
    }
    if (alpha < 2.0) {
        // f(u) ~ c1 u^{-alpha-1} + c2 u^{-2 alpha-1} beyond the cut.
        const double c1 = boost::math::tgamma(alpha + 1.0) * std::sin(kPi * alpha / 2.0) / kPi;
        const double c2 = -boost::math::tgamma(2.0 * alpha + 1.0) * std::sin(kPi * alpha) / (2.0 * kPi);
        integral += c1 * c1 * std::pow(kCut, -2.0 * alpha - 1.0) / (2.0 * alpha + 1.0) +
                    2.0 * c1 * c2 * std::pow(kCut, -3.0 * alpha - 1.0) / (3.0 * alpha + 1.0) +
                    c2 * c2 * std::pow(kCut, -4.0 * alpha - 1.0) / (4.0 * alpha + 1.0);
    }
    L2Identity out;
    out.lhs = 2.0 * integral / s;
    out.rhs = stable_density(kernel, 2.0 * t, 0.0);
    return out;
}

KernelIdentityReport kernel_identity_report(const StableKernel& kernel, double t, double eps, std::size_t n) {
    if (!(t > 0.0)) throw InvalidArgument("kernel identities need t > 0");
    KernelIdentityReport r;
    r.alpha = kernel.alpha;
    r.nu = kernel.nu;
    r.t = t;
    const auto p = stable_density_grid(kernel, t, eps, n);
    const auto p2 = stable_density_grid(kernel, 2.0 * t, eps, n);
    double mass = 0.0;
    for (double v : p) mass += v;
    r.normalization_error = std::abs(eps * mass - 1.0);
    r.l2_relative_error = l2_kernel_identity(kernel, t).relative_error();
    const auto conv = detail::circular_convolve(p, p);
    for (std::size_t j = 0; j < n; ++j) {
        r.semigroup_sup_error = std::max(r.semigroup_sup_error, std::abs(eps * conv[j] - p2[j]));
    }
    r.gaussian_error = std::numeric_limits<double>::quiet_NaN();
    if (kernel.alpha == 2.0) {
        const double var2 = 4.0 * kernel.nu * t;
        r.gaussian_error = 0.0;
        for (double u : {0.0, 0.25, 0.5, 1.0, 2.0, 3.0, 5.0}) {
            const double x = u * std::sqrt(var2);
            const double g = std::exp(-x * x / var2) / std::sqrt(std::numbers::pi * var2);
            r.gaussian_error = std::max(r.gaussian_error, std::abs(stable_density(kernel, t, x) - g));
        }
    }
    return r;
}

std::string to_string(LcltRegime regime) {
    return regime == LcltRegime::small_t ? "small_t" : "large_t";
}

double lclt_r0(const WalkModel& model) {
    auto ok = [&](double w) {
        return one_minus_char_fn(model, w) >= 0.5 * model.nu * std::pow(w, model.alpha);
    };
    constexpr int kScan = 4096;
    double good = 0.0;
    for (int i = 1; i <= kScan; ++i) {
        const double w = kPi * i / kScan;
        if (!ok(w)) {
            double lo = good, hi = w;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (ok(mid) ? lo : hi) = mid;
            }
            return lo;
        }
        good = w;
    }
    return kPi;
}

double lclt_theta(const WalkModel& model, double r0) {
    constexpr int kGrid = 8192;
    double best = -1.0;
    for (int i = 0; i <= kGrid; ++i) {
        const double z = r0 + (kPi - r0) * i / kGrid;
        best = std::max(best, char_fn(model, z));
    }
    return best;
}

double lclt_large_t_shape(const WalkModel& model, double eps, double t) {
    const double a = model.a, alpha = model.alpha;
    const double log_eps = std::abs(std::log(eps));
    return std::pow(eps, a) * std::pow(log_eps, (a + alpha) / alpha) / std::pow(t, (a + 1.0) / alpha);
}

double calibrated_lclt_constant() {
    static const double value = [] {
        const WalkModel walk = make_simple_walk();
        double c = 0.0;
        for (double t : {0.25, 0.5, 1.0, 2.0}) {
            const auto report = lclt_sup_error(walk, 0.2, t, 256, LcltConstants{64.0, 1.0});
            c = std::max(c, report.sup_error / lclt_large_t_shape(walk, 0.2, t));
        }
        return c;
    }();
    return value;
}

LcltErrorReport lclt_sup_error(const WalkModel& model, double eps, double t, std::size_t n,
                               const LcltConstants& constants) {
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("lclt_sup_error requires 0 < eps < 1");
    if (!(t >= 0.0)) throw InvalidArgument("lclt_sup_error requires t >= 0");
    LcltErrorReport report;
    const double a = model.a, alpha = model.alpha;
    const double log_eps = std::abs(std::log(eps));
    report.K = constants.K;
    report.C = constants.C ? *constants.C : calibrated_lclt_constant();
    report.threshold = constants.K * std::pow(eps, alpha) * std::pow(log_eps, (a + alpha) / a);
    report.threshold_alt = constants.K * std::pow(eps, alpha) * std::pow(log_eps, (a + alpha) / alpha);
    report.r0 = lclt_r0(model);
    report.theta = lclt_theta(model, report.r0);

    if (t == 0.0) {
        report.regime = LcltRegime::small_t;
        report.sup_error = std::numeric_limits<double>::infinity();
        report.bound_value = std::numeric_limits<double>::infinity();
        report.bound_value_alt = report.bound_value;
        return report;
    }
    report.lambda = std::pow((10.0 + 2.0 * a) * log_eps / (model.nu * t), 1.0 / alpha);

    const auto table = discrete_transition(model, eps, t, n);
    const auto p = stable_density_grid(kernel_of(model), t, eps, n);
    report.sup_error = sup_abs_diff(table, p, &report.argmax);

    const std::size_t edge = n / 2;
    report.edge_discrete = std::max(table.raw[edge], 0.0) / eps;
    report.edge_continuum = p[edge];
    const bool negligible = report.edge_discrete < 1e-14 && report.edge_continuum < 1e-14;
    // Both kernels of an aliased walk are exact on the torus; their wrapped
    // tails cancel to within the edge difference.
    const bool cancelled = model.measure.aliased &&
                           std::abs(report.edge_discrete - report.edge_continuum) < 1e-3 * report.sup_error;
    if (!negligible && !cancelled) {
        throw BoundaryMassError("lclt_sup_error: kernel mass at the box edge is not negligible");
    }

    if (t >= report.threshold) {
        report.regime = LcltRegime::large_t;
        report.bound_value = report.C * lclt_large_t_shape(model, eps, t);
        report.bound_value_alt = report.C * std::pow(eps, a) * std::pow(log_eps, (a + alpha) / a) /
                                 std::pow(t, (a + 1.0) / alpha);
    } else {
        report.regime = LcltRegime::small_t;
        report.bound_value = report.C * (std::pow(t, -1.0 / alpha) + 1.0 / eps);
        report.bound_value_alt = report.bound_value;
    }
    return report;
}

std::size_t default_box_sites(const WalkModel& model, double eps, double width) {
    if (model.measure.aliased) return model.measure.box_size;
    std::size_t n = 2;
    while (static_cast<double>(n) * eps < width ||
           n < 2 * static_cast<std::size_t>(model.measure.radius())) {
        n *= 2;
    }
    return n;
}

double kernel_l2_difference(const WalkModel& model, double eps, double T, std::size_t n) {
    const double t0 = std::pow(eps, model.alpha);
    if (!(T > t0)) throw InvalidArgument("kernel_l2_difference requires T > eps^alpha");
    if (n == 0) n = default_box_sites(model, eps);
    require_box(n);
    check_box_compatible(model, n);
    const auto one_minus = one_minus_char_fn_torus(model, n);
    const double rate = rate_of(model, eps, std::nullopt);
    constexpr int kNodes = 64;
    const double du = std::log(T / t0) / (kNodes - 1);
    double acc = 0.0;
    for (int i = 0; i < kNodes; ++i) {
        const double t = t0 * std::exp(du * i);
        const auto table = table_from_symbol(one_minus, eps, t, rate, n);
        const auto p = stable_density_grid(kernel_of(model), t, eps, n);
        double sq = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = std::max(table.raw[j], 0.0) / eps - p[j];
            sq += d * d;
        }
        const double weight = (i == 0 || i == kNodes - 1) ? 0.5 : 1.0;
        acc += weight * eps * sq * t;
    }
    return acc * du;
}

double sum_squared_transition(const WalkModel& model, double eps, double s) {
    if (!(s >= 0.0)) throw InvalidArgument("sum_squared_transition requires s >= 0");
    const double rate = std::pow(eps, -model.alpha);
    return peaked_frequency_integral(
        [&](double z) { return std::exp(-2.0 * s * rate * one_minus_char_fn(model, z)); });
}

double green_function_bound(const WalkModel& model, double eps, double t) {
    if (!(t >= 0.0)) throw InvalidArgument("green_function_bound requires t >= 0");
    if (!(eps > 0.0)) throw InvalidArgument("green_function_bound requires eps > 0");
    if (t == 0.0) return 0.0;
    const double rate = std::pow(eps, -model.alpha);
    auto g = [&](double z) {
        const double lam = rate * one_minus_char_fn(model, z);
        if (lam <= 0.0) return t;
        return -std::expm1(-2.0 * t * lam) / (2.0 * lam);
    };
    return peaked_frequency_integral(g) / eps;
}

}  // namespace shelab
