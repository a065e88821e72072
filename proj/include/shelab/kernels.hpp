#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "shelab/walk_models.hpp"

namespace shelab {

/// Symmetric alpha-stable heat kernel with symbol exp(-nu t |z|^alpha).
struct StableKernel {
    double alpha = 2.0;
    double nu = 0.5;
};

inline StableKernel kernel_of(const WalkModel& model) { return {model.alpha, model.nu}; }

/// P_t^(eps)(j eps) on a periodic box of n sites.
///
/// Site j is stored at index j mod n, so indices n/2 .. n-1 hold the
/// negative offsets. Entries are kept as computed; reads clamp tiny negative
/// transform residue to zero.
struct DiscreteKernelTable {
    double eps = 1.0;
    double t = 0.0;
    std::size_t n = 0;
    std::vector<double> raw;

    double at(long j) const;
    std::vector<double> values() const;
    double sum() const;
};

// Offset represented by storage index i on a box of n sites.
inline long site_offset(std::size_t i, std::size_t n) {
    return i < n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
}

// p_t(x) by quadrature of (1/pi) int_0^inf cos(zx) exp(-nu t z^alpha) dz.
double stable_density(const StableKernel& kernel, double t, double x);

// Box-periodized p_t sampled at x = j eps, j stored mod n. The symbol is
// folded over all aliases of each torus frequency, so the samples equal
// sum_m p_t(j eps + m n eps) and eps * sum = 1 up to rounding.
std::vector<double> stable_density_grid(const StableKernel& kernel, double t, double eps, std::size_t n);

// Torus Fourier inversion of exp(-t eps^-rho (1 - mu_hat)). rho defaults to alpha.
DiscreteKernelTable discrete_transition(const WalkModel& model, double eps, double t, std::size_t n,
                                        std::optional<double> rho_exponent = std::nullopt);

struct L2Identity {
    double lhs = 0.0;  // int p_t(y)^2 dy
    double rhs = 0.0;  // p_{2t}(0)
    double relative_error() const;
};

L2Identity l2_kernel_identity(const StableKernel& kernel, double t);

/// Identity checks for p_t on the grid eps Z of n sites.
struct KernelIdentityReport {
    double alpha = 0.0;
    double nu = 0.0;
    double t = 0.0;
    double normalization_error = 0.0;  // |eps sum p_t - 1|
    double l2_relative_error = 0.0;
    double semigroup_sup_error = 0.0;  // sup |eps (p_t * p_t) - p_2t|
    // sup |p_t(x) - Gaussian| over a few x for alpha = 2, NaN otherwise.
    double gaussian_error = 0.0;
};

KernelIdentityReport kernel_identity_report(const StableKernel& kernel, double t, double eps, std::size_t n);

enum class LcltRegime { small_t, large_t };
std::string to_string(LcltRegime regime);

struct LcltConstants {
    double K = 64.0;
    // Multiplicative constant; defaults to the value calibrated on the simple walk.
    std::optional<double> C;
};

struct LcltErrorReport {
    double sup_error = 0.0;
    double bound_value = 0.0;
    // Large-t bound with the |ln eps| exponent (a + alpha)/a instead of (a + alpha)/alpha.
    double bound_value_alt = 0.0;
    double lambda = 0.0;
    double r0 = 0.0;
    double theta = 0.0;
    // K eps^alpha |ln eps|^((a+alpha)/a), and the variant with (a+alpha)/alpha.
    double threshold = 0.0;
    double threshold_alt = 0.0;
    double K = 0.0;
    double C = 0.0;
    double edge_discrete = 0.0;
    double edge_continuum = 0.0;
    LcltRegime regime = LcltRegime::small_t;
    std::size_t argmax = 0;
};

LcltErrorReport lclt_sup_error(const WalkModel& model, double eps, double t, std::size_t n,
                               const LcltConstants& constants = {});

// Shape of the large-t bound without C: eps^a |ln eps|^((a+alpha)/alpha) / t^((a+1)/alpha).
double lclt_large_t_shape(const WalkModel& model, double eps, double t);

// C = max over t in {0.25, 0.5, 1, 2} of sup_error / shape for the simple walk at eps = 0.2.
double calibrated_lclt_constant();

// Largest r0 in (0, pi] with 1 - mu_hat(w) >= nu |w|^alpha / 2 on |w| <= r0.
double lclt_r0(const WalkModel& model);
// sup of mu_hat over r0 <= |z| <= pi on a grid.
double lclt_theta(const WalkModel& model, double r0);

// int_{eps^alpha}^T dt eps sum_j |P_t(j eps)/eps - p_t(j eps)|^2 with 64
// log-spaced time nodes. n = 0 picks a box: the aliased box size, otherwise the
// smallest power of two with n eps >= 64.
double kernel_l2_difference(const WalkModel& model, double eps, double T, std::size_t n = 0);

// sum_j P_s(j eps)^2 on eps Z, as (1/pi) int_0^pi exp(-2 s eps^-alpha (1 - mu_hat)).
double sum_squared_transition(const WalkModel& model, double eps, double s);

// eps^-1 int_0^t sum_j P_s(j eps)^2 ds in the same frequency form.
double green_function_bound(const WalkModel& model, double eps, double t);

// n * eps >= width with n a power of two and at least 2 * radius.
std::size_t default_box_sites(const WalkModel& model, double eps, double width = 64.0);

}  // namespace shelab
