#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "shelab/simulator.hpp"
#include "shelab/stats.hpp"
#include "shelab/volterra.hpp"

namespace shelab {

/// prod_i U(x_i)^power, optionally averaged over every translation of the box.
struct MomentSpec {
    std::vector<long> points{0};
    int power = 1;
    bool translation_average = false;

    double value(std::span<const double> field) const;
    std::string label() const;
};

struct MomentReport {
    MomentSpec spec;
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t replicas = 0;
    std::size_t aborted = 0;
    // Per replica, NaN where the trajectory aborted.
    std::vector<double> samples;
};

struct ReplicaOutcome {
    bool aborted = false;
    double abort_time = 0.0;
    double negative_fraction = 0.0;
    std::vector<double> stats;
};

using Observer = std::function<std::vector<double>(const SimulationResult&)>;

// Simulates replicas first_replica .. first_replica + count - 1 in parallel and
// keeps observe(result) per replica, in replica order.
std::vector<ReplicaOutcome> run_replicas(const SheConfig& config, std::size_t count, const Observer& observe,
                                         std::uint32_t first_replica = 0);

// Fails when more than 1% of trajectories aborted.
void check_abort_budget(std::size_t aborted, std::size_t total);

std::vector<MomentReport> estimate_moments(const SheConfig& config, const std::vector<MomentSpec>& specs,
                                           std::size_t replicas);
MomentReport estimate_moment(const SheConfig& config, const MomentSpec& spec, std::size_t replicas);

// Moment estimate from per-replica samples (NaN entries are aborts).
MomentReport summarize_moment(const MomentSpec& spec, std::vector<double> samples);

struct ComparisonReport {
    MomentReport lower;  // sigma
    MomentReport upper;  // sigma_bar
    double paired_difference = 0.0;  // upper - lower
    double paired_std_error = 0.0;
    bool ordered = false;    // lower <= upper + 2 paired_std_error
    bool strict = false;     // upper - lower > 2 paired_std_error
    bool identical = false;  // bitwise equal samples
    double realized_min = 0.0;
    double realized_max = 0.0;
};

// Common random numbers: both runs use the same seed and replica keys.
ComparisonReport compare_moments(const SheConfig& config, const SigmaSpec& sigma, const SigmaSpec& sigma_bar,
                                 const MomentSpec& spec, std::size_t replicas);

struct RatePair {
    double eps_coarse = 0.0;
    double eps_fine = 0.0;
    std::vector<double> sup_differences;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    std::size_t aborted = 0;
};

struct RateReport {
    std::vector<double> ladder;
    std::vector<RatePair> pairs;
    // U_T(0) mean and second moment per ladder level.
    std::vector<Estimate> level_mean;
    std::vector<Estimate> level_second_moment;
    double fitted_slope = 0.0;
    double rho_target = 0.0;
    double holder_eta = 0.0;
    std::size_t snapshots = 0;
    bool vacuous = false;
    bool pass = false;
    std::string approximation;
};

RateReport convergence_rate(const SheConfig& base, const std::vector<double>& ladder, double rho,
                            std::size_t replicas);

struct TemporalReport {
    double eps = 0.0;
    double s = 0.0;
    std::vector<double> gaps;
    // Site- and replica-averaged E|U_{s+g} - U_s|^2 per gap.
    std::vector<Estimate> mean_square;
    double exponent = 0.0;
    std::size_t aborted = 0;
};

TemporalReport temporal_increment_scaling(const SheConfig& config, double s, const std::vector<double>& gaps,
                                          std::size_t replicas);

struct HolderReport {
    std::vector<TemporalReport> levels;
    // Geometric mean over gaps of level(eps_2) / level(eps_1), expected eps_1 / eps_2.
    double level_ratio = 0.0;
    double expected_ratio = 0.0;
    bool exponent_pass = false;
    bool level_pass = false;
};

// Runs temporal_increment_scaling at each eps (same box width and dt).
HolderReport holder_study(const SheConfig& config, const std::vector<double>& eps_values, double s,
                          const std::vector<double>& gaps, std::size_t replicas);

struct LyapunovReport {
    int k = 2;
    double t0 = 0.0;
    double t1 = 0.0;
    std::vector<double> times;
    std::vector<double> log_moments;
    double mc_slope = 0.0;
    double mc_std_error = 0.0;
    // NaN unless k = 2 and sigma is linear.
    double oracle_slope = 0.0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    double tolerance = 0.15;
    bool pass = false;
    std::size_t aborted = 0;
};

// lower = L^4 k (k^2 - 1) / (48 nu), upper = Lip^4 k^3 / nu.
double lyapunov_lower_bound(const SigmaSpec& sigma, int k, double nu);
double lyapunov_upper_bound(const SigmaSpec& sigma, int k, double nu);

LyapunovReport lyapunov_estimate(const SheConfig& config, int k, double t0, double t1, std::size_t replicas,
                                 std::size_t time_points = 11);

}  // namespace shelab
