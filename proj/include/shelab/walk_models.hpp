#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace shelab {

// How the infinite tail of a heavy-tailed jump law is handled.
enum class TailMode {
    // Drop atoms beyond the truncation radius and rescale the kept atoms.
    redistribute,
    // Project the full law onto the periodic box Z/NZ (q_N(r) = sum_k q(r + kN)).
    // The characteristic function at torus frequencies is then exact.
    alias,
};

/// Symmetric jump law q on Z of a rate-one continuous-time random walk.
///
/// Only the non-negative offsets are stored: `one_sided[j] = q(j) = q(-j)`.
/// For an aliased measure the radius is box_size / 2 and the residue N/2,
/// which is its own mirror image on the torus, carries 2 * one_sided[N/2].
struct DislocationMeasure {
    std::vector<double> one_sided;
    int truncation_radius = 0;
    bool aliased = false;
    std::size_t box_size = 0;
    // Mass beyond the truncation radius that was redistributed (0 when aliased).
    double removed_tail_mass = 0.0;

    int radius() const { return static_cast<int>(one_sided.size()) - 1; }
    double mass(long j) const;
    double total_mass() const;
};

/// A walk satisfying 1 - mu_hat(z) = nu |z|^alpha + O(|z|^(alpha + a)).
struct WalkModel {
    double alpha = 2.0;
    double nu = 0.5;
    double a = 2.0;
    DislocationMeasure measure;
    std::string family;  // "simple" or "stable_tail"
};

WalkModel make_simple_walk();

// Jump law q(j) proportional to |j|^{-(alpha+1)}. Throws InvalidArgument for
// alpha outside (1, 2), radius < 2, box_size < 2 * radius, or (strict mode)
// a truncation that keeps less than 1 - 1e-9 of the mass.
WalkModel make_stable_tail_walk(double alpha, int truncation_radius, std::size_t box_size,
                                TailMode mode = TailMode::redistribute, bool strict = false);

// (1/zeta(alpha+1)) * int_0^inf (1 - cos x) / x^(alpha+1) dx by quadrature.
double stable_tail_viscosity(double alpha);

// mu_hat(z) = sum_j q(j) cos(j z).
double char_fn(const WalkModel& model, double z);

// 1 - mu_hat(z), evaluated as sum_j 4 q(j) sin^2(j z / 2) so that small z
// does not lose digits to cancellation.
double one_minus_char_fn(const WalkModel& model, double z);

// 1 - mu_hat(2 pi k / n) for k = 0 .. n/2.
std::vector<double> one_minus_char_fn_torus(const WalkModel& model, std::size_t n);

struct AssumptionReport {
    double nu_hat = 0.0;
    double a_hat = 0.0;
    // max of mu_hat(z) - 1 over grid points with |z| >= fit_window_min.
    double max_unit_violation = 0.0;
    // Relative misfit of nu + C z^a over the fit window.
    double fit_misfit = 0.0;
    double truncation_tail_mass = 0.0;
    std::size_t grid_points = 0;
    std::size_t fit_points = 0;
    double grid_min = 0.0;
    double grid_max = 0.0;
};

inline constexpr double kFitWindowMin = 0.01;
inline constexpr double kFitWindowMax = 0.3;

// 64 log-spaced points on [0.01, 0.3] plus 10001 uniform points on [-pi, pi].
std::vector<double> default_assumption_grid();

// Fits nu and the remainder exponent a on z in [0.01, 0.3] and checks that
// mu_hat < 1 away from the origin. Throws FitFailure if the residual of the
// leading-order law is not monotone, nu_hat <= 0, or the two-term law misfits.
AssumptionReport verify_assumption(const WalkModel& model, std::span<const double> z_grid);

// (L f)(m) = sum_n q(n - m) [f(n) - f(m)] on the periodic box of field.size() sites.
std::vector<double> generator_apply(const WalkModel& model, std::span<const double> field);
void generator_apply(const WalkModel& model, std::span<const double> field, std::span<double> out);

// Throws InvalidArgument unless the walk can live on a periodic box of n sites.
void check_box_compatible(const WalkModel& model, std::size_t n);

}  // namespace shelab
