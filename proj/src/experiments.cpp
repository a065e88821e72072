#include "shelab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include <fmt/format.h>

#include "shelab/errors.hpp"
#include "shelab/parallel.hpp"

namespace shelab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double wrapped(std::span<const double> field, long site) {
    const long n = static_cast<long>(field.size());
    long i = site % n;
    if (i < 0) i += n;
    return field[static_cast<std::size_t>(i)];
}

double int_pow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

std::size_t box_for(const SheConfig& base, double eps) {
    const double width = base.n ? static_cast<double>(base.n) * base.eps : kDefaultBoxWidth;
    return default_box_sites(base.walk, eps, width * (1.0 - 1e-12));
}

}  // namespace

double MomentSpec::value(std::span<const double> field) const {
    if (field.empty()) throw InvalidArgument("moment of an empty field");
    auto at_shift = [&](long shift) {
        double prod = 1.0;
        for (long x : points) prod *= int_pow(wrapped(field, x + shift), power);
        return prod;
    };
    if (!translation_average) return at_shift(0);
    std::vector<double> terms(field.size());
    for (std::size_t s = 0; s < field.size(); ++s) terms[s] = at_shift(static_cast<long>(s));
    return pairwise_sum(terms) / static_cast<double>(field.size());
}

std::string MomentSpec::label() const {
    std::string sites;
    for (std::size_t i = 0; i < points.size(); ++i) sites += (i ? ";" : "") + std::to_string(points[i]);
    return fmt::format("prod[{}]^{}{}", sites, power, translation_average ? " (translation average)" : "");
}

std::vector<ReplicaOutcome> run_replicas(const SheConfig& config, std::size_t count, const Observer& observe,
                                         std::uint32_t first_replica) {
    std::vector<ReplicaOutcome> out(count);
    parallel_for(count, [&](std::size_t i) {
        SheConfig c = config;
        c.replica = first_replica + static_cast<std::uint32_t>(i);
        try {
            const auto result = simulate(c);
            out[i].stats = observe(result);
            out[i].negative_fraction = result.negative_fraction;
        } catch (const SimulationAborted& e) {
            out[i].aborted = true;
            out[i].abort_time = e.time();
        }
    });
    return out;
}

void check_abort_budget(std::size_t aborted, std::size_t total) {
    if (total > 0 && static_cast<double>(aborted) > 0.01 * static_cast<double>(total)) {
        throw Error(fmt::format("{} of {} trajectories aborted (limit 1%)", aborted, total));
    }
}

MomentReport summarize_moment(const MomentSpec& spec, std::vector<double> samples) {
    MomentReport report;
    report.spec = spec;
    report.replicas = samples.size();
    std::vector<double> kept;
    kept.reserve(samples.size());
    for (double v : samples) {
        if (std::isnan(v)) {
            ++report.aborted;
        } else {
            kept.push_back(v);
        }
    }
    if (kept.size() >= 1) {
        const auto e = jackknife_mean(kept);
        report.estimate = e.mean;
        report.std_error = e.std_error;
    }
    report.samples = std::move(samples);
    return report;
}

std::vector<MomentReport> estimate_moments(const SheConfig& config, const std::vector<MomentSpec>& specs,
                                           std::size_t replicas) {
    if (replicas < 100) throw InvalidArgument("moment estimates need at least 100 replicas");
    const auto outcomes = run_replicas(config, replicas, [&](const SimulationResult& r) {
        std::vector<double> v;
        for (const auto& s : specs) v.push_back(s.value(r.final_state.values));
        return v;
    });
    std::size_t aborted = 0;
    for (const auto& o : outcomes) aborted += o.aborted;
    check_abort_budget(aborted, replicas);
    std::vector<MomentReport> reports;
    for (std::size_t k = 0; k < specs.size(); ++k) {
        std::vector<double> samples(replicas);
        for (std::size_t r = 0; r < replicas; ++r) {
            samples[r] = outcomes[r].aborted ? kNaN : outcomes[r].stats[k];
        }
        reports.push_back(summarize_moment(specs[k], std::move(samples)));
    }
    return reports;
}

MomentReport estimate_moment(const SheConfig& config, const MomentSpec& spec, std::size_t replicas) {
    return estimate_moments(config, {spec}, replicas).front();
}

ComparisonReport compare_moments(const SheConfig& config, const SigmaSpec& sigma, const SigmaSpec& sigma_bar,
                                 const MomentSpec& spec, std::size_t replicas) {
    if (replicas < 100) throw InvalidArgument("moment comparison needs at least 100 replicas");
    if (!sigma.fixes_zero() || !sigma_bar.fixes_zero()) {
        throw PreconditionViolation("moment comparison needs sigma(0) = sigma_bar(0) = 0");
    }
    // Per replica: moment, min and max of the realized field, and whether
    // 0 <= sigma <= sigma_bar held at every realized value.
    auto observer = [&](const SimulationResult& r) {
        const auto& f = r.final_state.values;
        double lo = f.front(), hi = f.front();
        double ok = 1.0;
        for (double z : f) {
            lo = std::min(lo, z);
            hi = std::max(hi, z);
            const double a = sigma(z), b = sigma_bar(z);
            if (a < 0.0 || a > b) ok = 0.0;
        }
        return std::vector<double>{spec.value(f), lo, hi, ok};
    };
    SheConfig lower_cfg = config, upper_cfg = config;
    lower_cfg.sigma = sigma;
    upper_cfg.sigma = sigma_bar;
    const auto a = run_replicas(lower_cfg, replicas, observer);
    const auto b = run_replicas(upper_cfg, replicas, observer);

    ComparisonReport report;
    report.realized_min = std::numeric_limits<double>::infinity();
    report.realized_max = -std::numeric_limits<double>::infinity();
    std::vector<double> sa(replicas), sb(replicas), diff;
    std::size_t aborted = 0;
    for (std::size_t r = 0; r < replicas; ++r) {
        const bool bad = a[r].aborted || b[r].aborted;
        aborted += bad;
        sa[r] = a[r].aborted ? kNaN : a[r].stats[0];
        sb[r] = b[r].aborted ? kNaN : b[r].stats[0];
        if (bad) continue;
        for (const auto* o : {&a[r], &b[r]}) {
            report.realized_min = std::min(report.realized_min, o->stats[1]);
            report.realized_max = std::max(report.realized_max, o->stats[2]);
            if (o->stats[3] == 0.0) {
                throw PreconditionViolation(fmt::format(
                    "0 <= sigma <= sigma_bar fails on realized values (replica {})", r));
            }
        }
        diff.push_back(sb[r] - sa[r]);
    }
    check_abort_budget(aborted, replicas);
    report.identical = std::equal(sa.begin(), sa.end(), sb.begin(), [](double x, double y) {
        return std::memcmp(&x, &y, sizeof(double)) == 0;
    });
    report.lower = summarize_moment(spec, std::move(sa));
    report.upper = summarize_moment(spec, std::move(sb));
    const auto d = jackknife_mean(diff);
    report.paired_difference = d.mean;
    report.paired_std_error = d.std_error;
    report.ordered = report.lower.estimate <= report.upper.estimate + 2.0 * d.std_error;
    report.strict = d.mean > 2.0 * d.std_error;
    return report;
}

RateReport convergence_rate(const SheConfig& base, const std::vector<double>& ladder, double rho,
                            std::size_t replicas) {
    if (ladder.size() < 3) throw InvalidArgument("convergence ladder needs at least three levels");
    for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
        if (std::abs(ladder[i] / ladder[i + 1] - 2.0) > 1e-9) {
            throw InvalidArgument("convergence ladder levels must halve eps");
        }
    }
    if (!(rho > 0.0 && rho < base.walk.alpha - 1.0)) throw InvalidArgument("rho must lie in (0, alpha - 1)");
    if (replicas < 2) throw InvalidArgument("convergence_rate needs at least two replicas");
    if (base.walk.measure.aliased) throw InvalidArgument("convergence_rate needs a walk without a fixed box");

    RateReport report;
    report.ladder = ladder;
    report.rho_target = rho;
    report.holder_eta = (base.walk.alpha - 1.0) / (2.0 * base.walk.alpha);
    report.approximation = fmt::format("sup over t replaced by max over {} snapshot times; "
                                       "continuum u replaced by the eps/2 lattice under a shared sheet",
                                       base.snapshot_times.empty() ? kDefaultCoupledSnapshots
                                                                   : base.snapshot_times.size());
    std::vector<std::vector<double>> level_u(ladder.size(), std::vector<double>(replicas, kNaN));
    for (std::size_t p = 0; p + 1 < ladder.size(); ++p) {
        SheConfig coarse = base, fine = base;
        coarse.eps = ladder[p];
        fine.eps = ladder[p + 1];
        coarse.n = box_for(base, coarse.eps);
        fine.n = 2 * coarse.n;
        coarse.dt = base.dt;
        fine.dt = 0.0;
        RatePair pair;
        pair.eps_coarse = coarse.eps;
        pair.eps_fine = fine.eps;
        std::vector<double> sup(replicas, kNaN), uc(replicas, kNaN), uf(replicas, kNaN);
        std::vector<std::size_t> snaps(replicas, 0);
        parallel_for(replicas, [&](std::size_t r) {
            SheConfig c = coarse, f = fine;
            c.replica = f.replica = static_cast<std::uint32_t>(r);
            try {
                const auto res = simulate_coupled(f, c);
                sup[r] = res.sup_difference;
                uc[r] = res.coarse.values[0];
                uf[r] = res.fine.values[0];
                snaps[r] = res.snapshots;
            } catch (const SimulationAborted&) {
            }
        });
        for (std::size_t r = 0; r < replicas; ++r) {
            if (std::isnan(sup[r])) {
                ++pair.aborted;
            } else {
                pair.sup_differences.push_back(sup[r]);
                report.snapshots = snaps[r];
            }
        }
        check_abort_budget(pair.aborted, replicas);
        pair.q25 = quantile(pair.sup_differences, 0.25);
        pair.median = quantile(pair.sup_differences, 0.5);
        pair.q75 = quantile(pair.sup_differences, 0.75);
        report.pairs.push_back(std::move(pair));
        if (p == 0) level_u[p] = uc;
        level_u[p + 1] = uf;
    }
    for (const auto& u : level_u) {
        std::vector<double> m1, m2;
        for (double v : u) {
            if (std::isnan(v)) continue;
            m1.push_back(v);
            m2.push_back(v * v);
        }
        report.level_mean.push_back(jackknife_mean(m1));
        report.level_second_moment.push_back(jackknife_mean(m2));
    }

    const bool all_zero = std::all_of(report.pairs.begin(), report.pairs.end(),
                                      [](const RatePair& p) { return p.q75 == 0.0; });
    if (all_zero) {
        report.vacuous = true;
        report.fitted_slope = kNaN;
        report.pass = true;
        return report;
    }
    std::vector<double> x, y;
    for (const auto& p : report.pairs) {
        x.push_back(std::log2(p.eps_coarse));
        y.push_back(std::log2(p.median));
    }
    report.fitted_slope = fit_line(x, y).slope;
    report.pass = std::isfinite(report.fitted_slope) && report.fitted_slope >= rho / 2.0;
    return report;
}

TemporalReport temporal_increment_scaling(const SheConfig& config, double s, const std::vector<double>& gaps,
                                          std::size_t replicas) {
    if (gaps.size() < 2) throw InvalidArgument("temporal scaling needs at least two gaps");
    if (replicas < 2) throw InvalidArgument("temporal scaling needs at least two replicas");
    SheConfig c = config;
    const double max_gap = *std::max_element(gaps.begin(), gaps.end());
    c.T = s + max_gap;
    if (c.dt == 0.0) c.dt = c.default_dt();
    const double dt = c.dt;
    auto on_grid = [dt](double t) { return std::abs(t / dt - std::round(t / dt)) < 1e-6; };
    if (!on_grid(s)) throw InvalidArgument("temporal scaling start time must be a multiple of dt");
    for (double g : gaps) {
        if (g < dt * (1.0 - 1e-9)) throw InvalidArgument("every gap must be at least dt");
        if (!on_grid(g)) throw InvalidArgument("every gap must be a multiple of dt");
    }
    // Keep dt exact: T must be an integer number of steps.
    c.T = dt * std::round(c.T / dt);
    c.snapshot_times = {s};
    for (double g : gaps) c.snapshot_times.push_back(s + g);

    std::vector<double> sorted_gaps = gaps;
    std::sort(sorted_gaps.begin(), sorted_gaps.end());
    const auto outcomes = run_replicas(c, replicas, [&](const SimulationResult& r) {
        // Snapshots come back sorted by time; the first is U_s.
        const auto& base = r.snapshots.front().values;
        std::vector<double> out;
        for (std::size_t g = 0; g < sorted_gaps.size(); ++g) {
            const auto& later = r.snapshots[g + 1].values;
            std::vector<double> sq(base.size());
            for (std::size_t j = 0; j < base.size(); ++j) sq[j] = (later[j] - base[j]) * (later[j] - base[j]);
            out.push_back(pairwise_sum(sq) / static_cast<double>(sq.size()));
        }
        return out;
    });
    TemporalReport report;
    report.eps = c.eps;
    report.s = s;
    report.gaps = sorted_gaps;
    for (const auto& o : outcomes) report.aborted += o.aborted;
    check_abort_budget(report.aborted, replicas);
    std::vector<double> lx, ly;
    for (std::size_t g = 0; g < sorted_gaps.size(); ++g) {
        std::vector<double> v;
        for (const auto& o : outcomes) {
            if (!o.aborted) v.push_back(o.stats[g]);
        }
        report.mean_square.push_back(jackknife_mean(v));
        lx.push_back(std::log(sorted_gaps[g]));
        ly.push_back(std::log(report.mean_square.back().mean));
    }
    report.exponent = fit_line(lx, ly).slope;
    return report;
}

HolderReport holder_study(const SheConfig& config, const std::vector<double>& eps_values, double s,
                          const std::vector<double>& gaps, std::size_t replicas) {
    if (eps_values.size() != 2) throw InvalidArgument("holder study compares exactly two eps values");
    HolderReport report;
    for (double eps : eps_values) {
        SheConfig c = config;
        c.eps = eps;
        c.n = box_for(config, eps);
        report.levels.push_back(temporal_increment_scaling(c, s, gaps, replicas));
    }
    double log_ratio = 0.0;
    const auto& a = report.levels[0];
    const auto& b = report.levels[1];
    for (std::size_t g = 0; g < a.gaps.size(); ++g) {
        log_ratio += std::log(b.mean_square[g].mean / a.mean_square[g].mean);
    }
    report.level_ratio = std::exp(log_ratio / static_cast<double>(a.gaps.size()));
    report.expected_ratio = eps_values[0] / eps_values[1];
    report.exponent_pass = std::all_of(report.levels.begin(), report.levels.end(), [](const TemporalReport& t) {
        return t.exponent >= 0.8 && t.exponent <= 1.2;
    });
    const double rel = report.level_ratio / report.expected_ratio;
    report.level_pass = rel >= 0.5 && rel <= 2.0;
    return report;
}

double lyapunov_lower_bound(const SigmaSpec& sigma, int k, double nu) {
    const double l = sigma.l_lower();
    const double kd = k;
    return l * l * l * l * kd * (kd * kd - 1.0) / (48.0 * nu);
}

double lyapunov_upper_bound(const SigmaSpec& sigma, int k, double nu) {
    const double l = sigma.lip();
    const double kd = k;
    return l * l * l * l * kd * kd * kd / nu;
}

LyapunovReport lyapunov_estimate(const SheConfig& config, int k, double t0, double t1, std::size_t replicas,
                                 std::size_t time_points) {
    if (k < 2) throw InvalidArgument("Lyapunov estimate needs k >= 2");
    if (config.walk.alpha != 2.0) throw InvalidArgument("Lyapunov estimate needs alpha = 2");
    if (!(t0 >= 0.0 && t1 > t0)) throw InvalidArgument("Lyapunov window must satisfy 0 <= t0 < t1");
    if (t1 > config.T * (1.0 + 1e-12)) throw InvalidArgument("Lyapunov window exceeds the simulated horizon");
    if (time_points < 2) throw InvalidArgument("Lyapunov fit needs at least two times");
    if (replicas < 2) throw InvalidArgument("Lyapunov estimate needs at least two replicas");

    LyapunovReport report;
    report.k = k;
    report.t0 = t0;
    report.t1 = t1;
    const double nu = config.walk.nu;
    report.lower_bound = lyapunov_lower_bound(config.sigma, k, nu);
    report.upper_bound = lyapunov_upper_bound(config.sigma, k, nu);

    SheConfig c = config;
    c.T = t1;
    c.snapshot_times.clear();
    for (std::size_t i = 0; i < time_points; ++i) {
        c.snapshot_times.push_back(t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(time_points - 1));
    }
    const auto resolved = resolve(c);
    // Snapshot times after rounding to the step grid.
    for (double t : c.snapshot_times) {
        report.times.push_back(resolved.config.dt * std::round(t / resolved.config.dt));
    }
    const MomentSpec power{{0}, k, true};
    const auto outcomes = run_replicas(c, replicas, [&](const SimulationResult& r) {
        std::vector<double> v;
        for (const auto& snap : r.snapshots) v.push_back(power.value(snap.values));
        return v;
    });
    std::vector<std::vector<double>> samples;
    for (const auto& o : outcomes) {
        if (o.aborted) {
            ++report.aborted;
        } else {
            samples.push_back(o.stats);
        }
    }
    check_abort_budget(report.aborted, replicas);
    const auto fit = log_mean_slope(report.times, samples);
    report.mc_slope = fit.slope;
    report.mc_std_error = fit.std_error;
    report.log_moments = fit.log_means;

    report.oracle_slope = kNaN;
    if (k == 2 && config.sigma.kind == SigmaKind::linear) {
        const auto oracle = pam_second_moment_oracle(nu, config.sigma.lambda, t1);
        std::vector<double> y;
        for (double t : report.times) y.push_back(std::log(oracle(t)));
        report.oracle_slope = fit_line(report.times, y).slope;
    }
    if (1.96 * report.mc_std_error > 0.5 * std::abs(report.mc_slope)) {
        throw WindowTooShort(fmt::format("slope {:.4g} has standard error {:.4g}; window too short",
                                         report.mc_slope, report.mc_std_error));
    }
    report.pass = report.lower_bound * (1.0 - report.tolerance) <= report.mc_slope;
    return report;
}

}  // namespace shelab
