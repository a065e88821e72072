#include "shelab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include <fmt/format.h>

#include "shelab/errors.hpp"
#include "shelab/experiments.hpp"
#include "shelab/kernels.hpp"
#include "shelab/volterra.hpp"

namespace shelab {

namespace {

using Cells = std::vector<CsvCell>;

long long as_ll(std::size_t v) { return static_cast<long long>(v); }

void add_resolved(SummaryRecord& s, const SheConfig& she) {
    const auto r = resolve(she);
    s.add("resolved.dt", r.config.dt);
    s.add("resolved.steps", as_ll(r.steps));
    s.add("resolved.box_sites", as_ll(r.config.n));
    s.add("resolved.box_width", static_cast<double>(r.config.n) * r.config.eps);
    s.add("resolved.nu", r.config.walk.nu);
    s.add("resolved.rho", r.config.rho());
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        v[i] = lo * std::pow(hi / lo, u);
    }
    return v;
}

RunOutput kernel_check(const RunConfig& config) {
    RunOutput out;
    CsvTable table{{"alpha", "nu", "t", "normalization_error", "l2_relative_error", "semigroup_sup_error",
                    "gaussian_error", "pass"}, {}};
    bool all = true;
    for (double alpha : config.kernel_alpha) {
        for (double nu : config.kernel_nu) {
            for (double t : config.kernel_t) {
                const auto r = kernel_identity_report({alpha, nu}, t, config.kernel_eps, config.kernel_box_sites);
                const bool ok = r.normalization_error < 1e-6 && r.l2_relative_error < 1e-6 &&
                                r.semigroup_sup_error < 1e-5 && (std::isnan(r.gaussian_error) || r.gaussian_error < 1e-10);
                all = all && ok;
                table.add(Cells{alpha, nu, t, r.normalization_error, r.l2_relative_error, r.semigroup_sup_error,
                                r.gaussian_error, std::string(ok ? "true" : "false")});
            }
        }
    }
    // Return probability of the simple walk against e^{-1} I_0(1).
    const auto walk = make_simple_walk();
    const double p0 = discrete_transition(walk, 1.0, 1.0, 1024).at(0);
    double bessel = 0.0, term = 1.0;
    for (int k = 0; k < 40; ++k) {
        if (k > 0) term *= 0.25 / (static_cast<double>(k) * k);
        bessel += term;
    }
    const double oracle = std::exp(-1.0) * bessel;
    const bool bessel_ok = std::abs(p0 - oracle) < 1e-8;
    out.summary.add("cases", as_ll(table.rows.size()));
    out.summary.add("identities_pass", all);
    out.summary.add("return_probability", p0);
    out.summary.add("return_probability_oracle", oracle);
    out.summary.add("return_probability_pass", bessel_ok);
    out.pass = all && bessel_ok;
    out.tables["kernel_check"] = std::move(table);
    return out;
}

std::pair<double, double> lclt_ratio_window(const WalkModel& walk) {
    return walk.a >= 2.0 ? std::pair{3.0, 5.0} : std::pair{1.2, 1.8};
}

RunOutput lclt(const RunConfig& config) {
    RunOutput out;
    const auto walk = make_walk(config);
    CsvTable table{{"t", "eps", "box_sites", "sup_error", "bound_value", "bound_value_alt", "regime", "threshold",
                    "threshold_alt", "C", "ratio"}, {}};
    const auto [lo, hi] = lclt_ratio_window(walk);
    bool pass = true;
    for (double t : config.lclt_t) {
        double prev = std::numeric_limits<double>::quiet_NaN();
        for (double eps : config.lclt_eps) {
            const std::size_t n = config.box_sites ? config.box_sites : default_box_sites(walk, eps);
            const auto r = lclt_sup_error(walk, eps, t, n);
            const double ratio = prev / r.sup_error;
            if (!std::isnan(prev)) pass = pass && r.sup_error < prev && ratio >= lo && ratio <= hi;
            table.add(Cells{t, eps, as_ll(n), r.sup_error, r.bound_value, r.bound_value_alt, to_string(r.regime),
                            r.threshold, r.threshold_alt, r.C, ratio});
            prev = r.sup_error;
        }
    }
    out.summary.add("walk", walk.family);
    out.summary.add("alpha", walk.alpha);
    out.summary.add("a", walk.a);
    out.summary.add("ratio_window_low", lo);
    out.summary.add("ratio_window_high", hi);
    out.pass = pass;
    out.tables["lclt"] = std::move(table);
    return out;
}

RunOutput green_bound(const RunConfig& config) {
    RunOutput out;
    const auto walk = make_walk(config);
    CsvTable sums{{"eps", "s", "sum_squared"}, {}};
    CsvTable bounds{{"eps", "T", "green_bound"}, {}};
    double max_sum = 0.0, gmin = std::numeric_limits<double>::infinity(), gmax = 0.0;
    for (double eps : config.green_eps) {
        for (double s : log_spaced(1e-4, config.T, config.green_samples)) {
            const double v = sum_squared_transition(walk, eps, s);
            max_sum = std::max(max_sum, v);
            sums.add(Cells{eps, s, v});
        }
        const double g = green_function_bound(walk, eps, config.T);
        gmin = std::min(gmin, g);
        gmax = std::max(gmax, g);
        bounds.add(Cells{eps, config.T, g});
    }
    out.summary.add("max_sum_squared", max_sum);
    out.summary.add("green_bound_spread", gmax / gmin);
    out.pass = max_sum <= 1.0 + 1e-12 && gmax / gmin < 2.0;
    out.tables["sum_squared"] = std::move(sums);
    out.tables["green_bound"] = std::move(bounds);
    return out;
}

RunOutput simulate_cmd(const RunConfig& config) {
    RunOutput out;
    const auto she = to_she_config(config);
    add_resolved(out.summary, she);
    const auto first = simulate(she);
    CsvTable field{{"t", "j", "x", "value"}, {}};
    auto dump = [&](const FieldState& s) {
        const std::size_t n = s.values.size();
        for (std::size_t i = 0; i < n; ++i) {
            const long j = site_offset(i, n);
            field.add(Cells{s.t, static_cast<long long>(j), static_cast<double>(j) * she.eps, s.values[i]});
        }
    };
    for (const auto& s : first.snapshots) dump(s);
    if (first.snapshots.empty() || first.snapshots.back().t != first.final_state.t) dump(first.final_state);
    out.tables["field"] = std::move(field);
    out.summary.add("negative_fraction", first.negative_fraction);
    out.pass = true;
    if (config.replicas < 100) {
        out.summary.add("moments", "skipped (fewer than 100 replicas)");
        return out;
    }
    const MomentSpec spec{config.moment_points, config.moment_power, config.moment_translation_average};
    const auto outcomes = run_replicas(she, config.replicas, [&](const SimulationResult& r) {
        const double u = r.final_state.values[0];
        return std::vector<double>{u, u * u, spec.value(r.final_state.values)};
    });
    CsvTable moments{{"replica", "aborted", "u0", "u0_squared", "moment"}, {}};
    std::vector<double> m1, m2, mk;
    std::size_t aborted = 0;
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
        const auto& o = outcomes[r];
        const double nan = std::numeric_limits<double>::quiet_NaN();
        moments.add(Cells{as_ll(r), static_cast<long long>(o.aborted), o.aborted ? nan : o.stats[0],
                          o.aborted ? nan : o.stats[1], o.aborted ? nan : o.stats[2]});
        if (o.aborted) {
            ++aborted;
            continue;
        }
        m1.push_back(o.stats[0]);
        m2.push_back(o.stats[1]);
        mk.push_back(o.stats[2]);
    }
    check_abort_budget(aborted, config.replicas);
    const auto e1 = jackknife_mean(m1), e2 = jackknife_mean(m2), ek = jackknife_mean(mk);
    out.summary.add("replicas", as_ll(config.replicas));
    out.summary.add("aborted", as_ll(aborted));
    out.summary.add("mean_u0", e1.mean);
    out.summary.add("mean_u0_std_error", e1.std_error);
    out.summary.add("second_moment_u0", e2.mean);
    out.summary.add("second_moment_u0_std_error", e2.std_error);
    out.summary.add("moment_label", spec.label());
    out.summary.add("moment", ek.mean);
    out.summary.add("moment_std_error", ek.std_error);
    const bool mean_one = e1.mean == 1.0 || std::abs(e1.mean - 1.0) < 3.0 * e1.std_error;
    out.summary.add("mean_one_pass", mean_one);
    if (she.walk.alpha == 2.0 && she.sigma.kind == SigmaKind::linear && she.T > 0.0) {
        const auto oracle = pam_second_moment_oracle(she.walk.nu, she.sigma.lambda, she.T);
        out.summary.add("oracle_second_moment", oracle(she.T));
        out.summary.add("oracle_relative_error", (e2.mean - oracle(she.T)) / oracle(she.T));
    }
    out.pass = mean_one;
    out.tables["moments"] = std::move(moments);
    return out;
}

RunOutput converge(const RunConfig& config) {
    RunOutput out;
    const auto she = to_she_config(config);
    const auto r = convergence_rate(she, config.ladder, config.rate_rho, config.replicas);
    CsvTable table{{"eps_coarse", "eps_fine", "index", "sup_difference"}, {}};
    CsvTable levels{{"eps", "mean_u0", "mean_u0_std_error", "second_moment_u0", "second_moment_u0_std_error"}, {}};
    for (std::size_t p = 0; p < r.pairs.size(); ++p) {
        const auto& pair = r.pairs[p];
        for (std::size_t i = 0; i < pair.sup_differences.size(); ++i) {
            table.add(Cells{pair.eps_coarse, pair.eps_fine, as_ll(i), pair.sup_differences[i]});
        }
        out.summary.add(fmt::format("pair{}.eps_coarse", p), pair.eps_coarse);
        out.summary.add(fmt::format("pair{}.q25", p), pair.q25);
        out.summary.add(fmt::format("pair{}.median", p), pair.median);
        out.summary.add(fmt::format("pair{}.q75", p), pair.q75);
        out.summary.add(fmt::format("pair{}.aborted", p), as_ll(pair.aborted));
    }
    for (std::size_t i = 0; i < r.ladder.size(); ++i) {
        levels.add(Cells{r.ladder[i], r.level_mean[i].mean, r.level_mean[i].std_error,
                         r.level_second_moment[i].mean, r.level_second_moment[i].std_error});
    }
    out.summary.add("fitted_slope", r.fitted_slope);
    out.summary.add("rho_target", r.rho_target);
    out.summary.add("slope_threshold", r.rho_target / 2.0);
    out.summary.add("holder_eta", r.holder_eta);
    out.summary.add("snapshots", as_ll(r.snapshots));
    out.summary.add("vacuous", r.vacuous);
    out.summary.add("approximation", r.approximation);
    out.pass = r.pass;
    out.tables["converge"] = std::move(table);
    out.tables["levels"] = std::move(levels);
    return out;
}

RunOutput compare_cmd(const RunConfig& config) {
    RunOutput out;
    const auto she = to_she_config(config);
    const MomentSpec spec{config.moment_points, config.moment_power, config.moment_translation_average};
    const auto r = compare_moments(she, sigma_of(config), sigma_bar_of(config), spec, config.replicas);
    CsvTable table{{"replica", "lower", "upper", "difference"}, {}};
    for (std::size_t i = 0; i < r.lower.samples.size(); ++i) {
        table.add(Cells{as_ll(i), r.lower.samples[i], r.upper.samples[i], r.upper.samples[i] - r.lower.samples[i]});
    }
    out.summary.add("moment_label", spec.label());
    out.summary.add("lower_estimate", r.lower.estimate);
    out.summary.add("lower_std_error", r.lower.std_error);
    out.summary.add("upper_estimate", r.upper.estimate);
    out.summary.add("upper_std_error", r.upper.std_error);
    out.summary.add("paired_difference", r.paired_difference);
    out.summary.add("paired_std_error", r.paired_std_error);
    out.summary.add("ordered", r.ordered);
    out.summary.add("strict", r.strict);
    out.summary.add("identical", r.identical);
    out.summary.add("realized_min", r.realized_min);
    out.summary.add("realized_max", r.realized_max);
    out.pass = r.ordered;
    out.tables["compare_moments"] = std::move(table);
    return out;
}

RunOutput lyapunov_cmd(const RunConfig& config) {
    RunOutput out;
    auto she = to_she_config(config);
    she.T = config.lyapunov_t1;
    const auto r =
        lyapunov_estimate(she, config.lyapunov_k, config.lyapunov_t0, config.lyapunov_t1, config.replicas,
                          config.lyapunov_points);
    CsvTable table{{"t", "log_moment"}, {}};
    for (std::size_t i = 0; i < r.times.size(); ++i) table.add(Cells{r.times[i], r.log_moments[i]});
    out.summary.add("k", static_cast<long long>(r.k));
    out.summary.add("t0", r.t0);
    out.summary.add("t1", r.t1);
    out.summary.add("mc_slope", r.mc_slope);
    out.summary.add("mc_std_error", r.mc_std_error);
    out.summary.add("oracle_slope", r.oracle_slope);
    out.summary.add("lower_bound", r.lower_bound);
    out.summary.add("upper_bound", r.upper_bound);
    out.summary.add("tolerance", r.tolerance);
    out.summary.add("aborted", as_ll(r.aborted));
    out.pass = r.pass;
    out.tables["lyapunov"] = std::move(table);
    return out;
}

RunOutput holder_cmd(const RunConfig& config) {
    RunOutput out;
    const auto she = to_she_config(config);
    const auto r = holder_study(she, config.holder_eps, config.holder_s, config.holder_gaps, config.replicas);
    CsvTable table{{"eps", "gap", "mean_square", "std_error"}, {}};
    for (const auto& level : r.levels) {
        for (std::size_t g = 0; g < level.gaps.size(); ++g) {
            table.add(Cells{level.eps, level.gaps[g], level.mean_square[g].mean, level.mean_square[g].std_error});
        }
        out.summary.add(fmt::format("exponent.eps_{:g}", level.eps), level.exponent);
    }
    out.summary.add("level_ratio", r.level_ratio);
    out.summary.add("expected_ratio", r.expected_ratio);
    out.summary.add("exponent_pass", r.exponent_pass);
    out.summary.add("level_pass", r.level_pass);
    out.pass = r.exponent_pass && r.level_pass;
    out.tables["holder"] = std::move(table);
    return out;
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = {"kernel-check", "lclt",          "green-bound", "simulate",
                                                   "converge",     "compare-moments", "lyapunov",  "holder"};
    return names;
}

RunOutput execute(const std::string& subcommand, const RunConfig& config) {
    if (subcommand == "kernel-check") return kernel_check(config);
    if (subcommand == "lclt") return lclt(config);
    if (subcommand == "green-bound") return green_bound(config);
    if (subcommand == "simulate") return simulate_cmd(config);
    if (subcommand == "converge") return converge(config);
    if (subcommand == "compare-moments") return compare_cmd(config);
    if (subcommand == "lyapunov") return lyapunov_cmd(config);
    if (subcommand == "holder") return holder_cmd(config);
    throw ConfigError(fmt::format("unknown subcommand '{}'", subcommand));
}

void write_outputs(const RunConfig& config, const std::string& subcommand, const RunOutput& output) {
    const std::filesystem::path dir = config.out;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
    write_text(echo_config(config), dir / "config.txt");
    SummaryRecord summary;
    summary.add("subcommand", subcommand);
    summary.add("seed", std::to_string(config.seed));
    summary.entries.insert(summary.entries.end(), output.summary.entries.begin(), output.summary.entries.end());
    summary.add("verdict", std::string(output.pass ? "pass" : "fail"));
    std::string text = summary.text();
    text += "\n# resolved config\n" + echo_config(config);
    write_text(text, dir / "summary.txt");
    for (const auto& [stem, table] : output.tables) write_csv(table, dir / (stem + ".csv"));
}

int run(const std::string& subcommand, const RunConfig& config, std::ostream& log) {
    try {
        const auto output = execute(subcommand, config);
        write_outputs(config, subcommand, output);
        log << fmt::format("{}: {} ({})", subcommand, output.pass ? "pass" : "fail", config.out) << '\n';
        return output.pass ? kExitPass : kExitVerdictFailed;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitError;
    }
}

int cli_main(int argc, char** argv) {
    CLI::App app{"Lattice stochastic heat equation experiments"};
    app.require_subcommand(1);
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replicas;
    std::optional<std::string> out;
    std::vector<std::string> sets;
    for (const auto& name : subcommands()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "flat key = value config file");
        sub->add_option("--seed", seed, "master seed");
        sub->add_option("--replicas", replicas, "replica count");
        sub->add_option("--out", out, "output directory");
        sub->add_option("--set", sets, "extra key=value override (repeatable)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitPass : kExitError;
    }
    const std::string subcommand = app.get_subcommands().front()->get_name();
    RunConfig config;
    try {
        if (!config_path.empty()) config = load_config(config_path);
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError(fmt::format("--set expects key=value, got '{}'", s));
            set_config_value(config, s.substr(0, eq), s.substr(eq + 1));
        }
        if (seed) config.seed = *seed;
        if (replicas) config.replicas = *replicas;
        if (out) config.out = *out;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return run(subcommand, config, std::cout);
}

}  // namespace shelab
