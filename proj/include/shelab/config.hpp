#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shelab/sigma.hpp"
#include "shelab/simulator.hpp"
#include "shelab/walk_models.hpp"

namespace shelab {

/// Everything a CLI run needs. Zero dt and box_sites mean "default".
struct RunConfig {
    std::string walk = "simple";
    double alpha = 2.0;
    int truncation_radius = 256;
    TailMode tail_mode = TailMode::redistribute;

    double eps = 0.05;
    double dt = 0.0;
    double T = 1.0;
    std::size_t box_sites = 0;
    SigmaKind sigma_kind = SigmaKind::linear;
    double sigma_lambda = 1.0;
    double sigma_clip = 1.0;
    Scheme scheme = Scheme::splitstep;
    std::uint64_t seed = 1;
    std::size_t replicas = 200;
    std::vector<double> snapshot_times;
    std::optional<double> rho_exponent;
    std::string out = "shelab-out";

    std::vector<long> moment_points{0};
    int moment_power = 1;
    bool moment_translation_average = false;

    SigmaKind sigma_bar_kind = SigmaKind::abs_linear;
    double sigma_bar_lambda = 1.0;
    double sigma_bar_clip = 1.0;

    std::vector<double> ladder{0.1, 0.05, 0.025};
    double rate_rho = 0.5;

    int lyapunov_k = 2;
    double lyapunov_t0 = 1.0;
    double lyapunov_t1 = 2.0;
    std::size_t lyapunov_points = 11;

    std::vector<double> holder_eps{0.1, 0.05};
    double holder_s = 0.2;
    std::vector<double> holder_gaps{2.5e-5, 5e-5, 1e-4, 2.5e-4};

    std::vector<double> kernel_alpha{1.2, 1.5, 2.0};
    std::vector<double> kernel_nu{0.5, 1.0};
    std::vector<double> kernel_t{0.1, 1.0};
    double kernel_eps = 0.01;
    std::size_t kernel_box_sites = 8192;

    std::vector<double> lclt_eps{0.2, 0.1, 0.05, 0.025};
    std::vector<double> lclt_t{0.5, 1.0};

    std::vector<double> green_eps{0.2, 0.1, 0.05};
    std::size_t green_samples = 100;

    bool operator==(const RunConfig&) const = default;
};

// Flat "key = value" lines; '#' starts a comment. Lists are written [a, b, c].
// Unknown or repeated keys throw ConfigError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

// Sets one key from its textual value, with the same checks as parse_config.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);

// Every key with its current value, in a fixed order. Re-parses to an equal config.
std::string echo_config(const RunConfig& config);
std::vector<std::string> config_keys();

// Builds the walk; stable_tail walks are made at truncation_radius (redistribute)
// or on a box of box_sites sites (alias).
WalkModel make_walk(const RunConfig& config);
SheConfig to_she_config(const RunConfig& config);
SigmaSpec sigma_of(const RunConfig& config);
SigmaSpec sigma_bar_of(const RunConfig& config);

}  // namespace shelab
