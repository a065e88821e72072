#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shelab/kernels.hpp"
#include "shelab/noise.hpp"
#include "shelab/sigma.hpp"
#include "shelab/walk_models.hpp"

namespace shelab {

enum class Scheme { euler, splitstep };

Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme scheme);

inline constexpr double kDefaultBoxWidth = 20.0;

/// Lattice system on a periodic box. Zero-valued dt and n mean "use the default".
struct SheConfig {
    WalkModel walk = make_simple_walk();
    double eps = 0.05;
    double dt = 0.0;
    double T = 1.0;
    std::size_t n = 0;
    SigmaSpec sigma;
    Scheme scheme = Scheme::splitstep;
    std::uint64_t seed = 0;
    std::uint32_t replica = 0;
    // Speed-up exponent of the walk clock; the natural choice is alpha.
    std::optional<double> rho_exponent;
    std::vector<double> snapshot_times;

    double rho() const { return rho_exponent.value_or(walk.alpha); }
    // min(eps^rho / 4, 1e-3).
    double default_dt() const;
    // Smallest power of two with n eps >= 20 and n >= 2 * radius, or the aliased box.
    std::size_t default_sites() const;
};

/// The same config with every default filled in and the time step shrunk so
/// that an integer number of steps reaches T.
struct ResolvedConfig {
    SheConfig config;
    std::size_t steps = 0;
};

ResolvedConfig resolve(const SheConfig& config);

struct FieldState {
    double t = 0.0;
    std::vector<double> values;
};

FieldState initial_state(std::size_t n);

/// Stepper with its convolution taps and scratch buffers. One per thread.
class Integrator {
public:
    explicit Integrator(const SheConfig& config);

    const SheConfig& config() const { return config_; }
    std::size_t sites() const { return n_; }
    double dt() const { return config_.dt; }
    std::size_t steps() const { return steps_; }
    SheetGrid sheet() const;

    // Advances one step with increments of variance dt. Throws SimulationAborted
    // on non-finite or overflowing values.
    void step(FieldState& state, std::span<const double> noise);
    // Replaces the splitstep heat taps with a precomputed table for the same dt.
    void use_heat_table(const DiscreteKernelTable& table);
    // Number of negative sites after the most recent step.
    std::size_t last_negative_count() const { return last_negatives_; }

private:
    void set_weights(const DiscreteKernelTable& table);

    SheConfig config_;
    std::size_t n_ = 0;
    std::size_t steps_ = 0;
    double rate_ = 0.0;
    double noise_scale_ = 0.0;
    std::size_t half_width_ = 0;
    // Weight of f(m - j) and f(m + j) for j = 1 .. half_width: splitstep heat
    // taps, or jump masses (scaled by dt * rate) for euler.
    std::vector<double> w_minus_;
    std::vector<double> w_plus_;
    double scale_ = 1.0;
    std::vector<double> padded_;
    std::vector<double> scratch_;
    std::size_t last_negatives_ = 0;
};

FieldState step_euler(const FieldState& state, const SheConfig& config, const NoiseIncrement& noise);
FieldState step_splitstep(const FieldState& state, const SheConfig& config, const NoiseIncrement& noise,
                          const DiscreteKernelTable& heat_table);

struct SimulationResult {
    FieldState final_state;
    std::vector<FieldState> snapshots;
    double dt = 0.0;
    std::size_t steps = 0;
    std::size_t negative_site_steps = 0;
    double negative_fraction = 0.0;
};

// Runs from U = 1 to T with noise keyed by (seed, replica).
SimulationResult simulate(const SheConfig& config);

struct CoupledResult {
    FieldState fine;
    FieldState coarse;
    // sup over coarse sites and snapshot times of |U_coarse(j) - U_fine(2j)|.
    double sup_difference = 0.0;
    std::size_t snapshots = 0;
    std::size_t ratio = 0;
};

inline constexpr std::size_t kDefaultCoupledSnapshots = 50;

// Coarse eps must be twice the fine eps; the coarse box has half the fine sites.
// Snapshots default to 50 equally spaced times; they are rounded to coarse steps.
CoupledResult simulate_coupled(const SheConfig& fine, const SheConfig& coarse);

}  // namespace shelab
