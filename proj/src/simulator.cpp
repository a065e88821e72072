#include "shelab/simulator.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fft.hpp"
#include "shelab/errors.hpp"

namespace shelab {

namespace {

constexpr double kOverflow = 1e150;
// Above the round-off floor of the inverse transform.
constexpr double kTapFloor = 1e-15;

template <class Sigma>
bool add_noise(std::span<const double> base, std::span<const double> sigma_at,
               std::span<const double> noise, double scale, Sigma sigma, std::span<double> out,
               std::size_t& negatives) {
    bool bad = false;
    std::size_t neg = 0;
    for (std::size_t m = 0; m < out.size(); ++m) {
        const double v = base[m] + scale * sigma(sigma_at[m]) * noise[m];
        out[m] = v;
        bad |= !(std::abs(v) <= kOverflow);
        neg += v < 0.0;
    }
    negatives = neg;
    return bad;
}

std::vector<std::size_t> snapshot_steps(const std::vector<double>& times, double dt, std::size_t steps) {
    std::vector<std::size_t> out;
    for (double t : times) {
        if (!(t >= 0.0)) throw InvalidArgument("snapshot times must be non-negative");
        const auto k = static_cast<std::size_t>(std::llround(t / dt));
        out.push_back(std::min(k, steps));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

Scheme parse_scheme(const std::string& name) {
    if (name == "euler") return Scheme::euler;
    if (name == "splitstep") return Scheme::splitstep;
    throw InvalidArgument("unknown scheme '" + name + "'");
}

std::string to_string(Scheme scheme) { return scheme == Scheme::euler ? "euler" : "splitstep"; }

double SheConfig::default_dt() const { return std::min(std::pow(eps, rho()) / 4.0, 1e-3); }

std::size_t SheConfig::default_sites() const { return default_box_sites(walk, eps, kDefaultBoxWidth); }

ResolvedConfig resolve(const SheConfig& input) {
    ResolvedConfig out;
    SheConfig& c = out.config;
    c = input;
    if (!(c.walk.alpha > 1.0 && c.walk.alpha <= 2.0)) throw InvalidArgument("walk alpha must lie in (1, 2]");
    if (!(c.eps > 0.0)) throw InvalidArgument("eps must be positive");
    if (!(c.T >= 0.0) || !std::isfinite(c.T)) throw InvalidArgument("T must be finite and non-negative");
    if (c.dt < 0.0) throw InvalidArgument("dt must be positive");
    if (c.rho_exponent && !(*c.rho_exponent > 0.0)) throw InvalidArgument("rho_exponent must be positive");
    c.sigma.validate();
    if (c.n == 0) c.n = c.default_sites();
    check_box_compatible(c.walk, c.n);
    if (c.scheme == Scheme::splitstep && !detail::is_power_of_two(c.n)) {
        throw InvalidArgument("splitstep needs a power-of-two box");
    }
    const double requested = c.dt > 0.0 ? c.dt : c.default_dt();
    if (c.T > 0.0) {
        out.steps = static_cast<std::size_t>(std::ceil(c.T / requested - 1e-9));
        c.dt = c.T / static_cast<double>(out.steps);
    } else {
        c.dt = requested;
    }
    if (c.scheme == Scheme::euler && c.dt > std::pow(c.eps, c.rho()) / 4.0 * (1.0 + 1e-12)) {
        throw InvalidArgument(fmt::format("euler needs dt <= eps^rho / 4 = {:.6g}", std::pow(c.eps, c.rho()) / 4.0));
    }
    for (double t : c.snapshot_times) {
        if (!(t >= 0.0 && t <= c.T * (1.0 + 1e-12))) throw InvalidArgument("snapshot time outside [0, T]");
    }
    return out;
}

FieldState initial_state(std::size_t n) { return FieldState{0.0, std::vector<double>(n, 1.0)}; }

Integrator::Integrator(const SheConfig& input) {
    auto resolved = resolve(input);
    config_ = std::move(resolved.config);
    steps_ = resolved.steps;
    n_ = config_.n;
    rate_ = std::pow(config_.eps, -config_.rho());
    noise_scale_ = 1.0 / std::sqrt(config_.eps);
    scratch_.resize(n_);

    if (config_.scheme == Scheme::euler) {
        const auto& q = config_.walk.measure.one_sided;
        half_width_ = q.size() - 1;
        w_minus_.assign(half_width_ + 1, 0.0);
        w_plus_.assign(half_width_ + 1, 0.0);
        for (std::size_t j = 1; j <= half_width_; ++j) w_minus_[j] = w_plus_[j] = q[j];
        scale_ = config_.dt * rate_;
    } else {
        set_weights(discrete_transition(config_.walk, config_.eps, config_.dt, n_, config_.rho()));
    }
}

void Integrator::set_weights(const DiscreteKernelTable& table) {
    const long half = static_cast<long>(n_ / 2);
    long width = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        if (table.raw[i] >= kTapFloor) width = std::max(width, std::labs(site_offset(i, n_)));
    }
    half_width_ = static_cast<std::size_t>(width);
    w_minus_.assign(half_width_ + 1, 0.0);
    w_plus_.assign(half_width_ + 1, 0.0);
    for (long j = 1; j <= width; ++j) {
        w_minus_[j] = table.at(j);
        // Offset n/2 is a single site on the torus.
        w_plus_[j] = j == half ? 0.0 : table.at(-j);
    }
    scale_ = 1.0;
}

void Integrator::use_heat_table(const DiscreteKernelTable& table) {
    if (config_.scheme != Scheme::splitstep) throw InvalidArgument("heat table only applies to splitstep");
    if (table.n != n_ || std::abs(table.eps - config_.eps) > 1e-12 * config_.eps ||
        std::abs(table.t - config_.dt) > 1e-12 * config_.dt) {
        throw InvalidArgument("heat table does not match the box, eps, and dt");
    }
    set_weights(table);
}

SheetGrid Integrator::sheet() const {
    return SheetGrid{config_.eps, config_.dt, n_, config_.seed, config_.replica};
}

void Integrator::step(FieldState& state, std::span<const double> noise) {
    auto& f = state.values;
    if (f.size() != n_ || noise.size() != n_) throw InvalidArgument("step: field or noise size mismatch");
    const std::size_t J = half_width_;
    // J <= n/2, so each halo is one contiguous piece of the field.
    padded_.resize(n_ + 2 * J);
    std::copy(f.end() - static_cast<long>(J), f.end(), padded_.begin());
    std::copy(f.begin(), f.end(), padded_.begin() + static_cast<long>(J));
    std::copy(f.begin(), f.begin() + static_cast<long>(J), padded_.begin() + static_cast<long>(J + n_));
    // h(m) = f(m) + scale * sum_j [w-(j) (f(m-j) - f(m)) + w+(j) (f(m+j) - f(m))],
    // which keeps constant fields exactly constant.
    double* h = scratch_.data();
    std::fill(scratch_.begin(), scratch_.end(), 0.0);
    const double* pad = padded_.data() + J;
    const double* fm = f.data();
    for (std::size_t j = 1; j <= J; ++j) {
        const double wm = w_minus_[j], wp = w_plus_[j];
        if (wm == 0.0 && wp == 0.0) continue;
        const double* left = pad - j;
        const double* right = pad + j;
        for (std::size_t m = 0; m < n_; ++m) {
            h[m] += wm * (left[m] - fm[m]) + wp * (right[m] - fm[m]);
        }
    }
    for (std::size_t m = 0; m < n_; ++m) h[m] = fm[m] + scale_ * h[m];

    // Splitstep evaluates sigma after the heat step, euler before the drift.
    const std::span<const double> sigma_at =
        config_.scheme == Scheme::splitstep ? std::span<const double>(scratch_) : std::span<const double>(f);
    std::vector<double>& out = padded_;  // reuse as output buffer
    out.resize(n_);
    bool bad = false;
    const SigmaSpec& s = config_.sigma;
    switch (s.kind) {
        case SigmaKind::linear:
            bad = add_noise(scratch_, sigma_at, noise, noise_scale_, [l = s.lambda](double z) { return l * z; },
                            out, last_negatives_);
            break;
        case SigmaKind::abs_linear:
            bad = add_noise(scratch_, sigma_at, noise, noise_scale_,
                            [l = s.lambda](double z) { return l * std::abs(z); }, out, last_negatives_);
            break;
        default:
            bad = add_noise(scratch_, sigma_at, noise, noise_scale_, [&s](double z) { return s(z); }, out,
                            last_negatives_);
            break;
    }
    const double t_next = state.t + config_.dt;
    if (bad) {
        throw SimulationAborted(fmt::format("field left the finite range near t = {:.6g}", t_next), t_next);
    }
    f.swap(out);
    state.t = t_next;
}

FieldState step_euler(const FieldState& state, const SheConfig& config, const NoiseIncrement& noise) {
    SheConfig c = config;
    c.scheme = Scheme::euler;
    c.dt = config.dt > 0.0 ? config.dt : config.default_dt();
    c.T = c.dt;
    c.n = state.values.size();
    c.snapshot_times.clear();
    Integrator integrator(c);
    FieldState next = state;
    integrator.step(next, noise.values);
    return next;
}

FieldState step_splitstep(const FieldState& state, const SheConfig& config, const NoiseIncrement& noise,
                          const DiscreteKernelTable& heat_table) {
    SheConfig c = config;
    c.scheme = Scheme::splitstep;
    c.dt = heat_table.t;
    c.T = c.dt;
    c.n = state.values.size();
    c.snapshot_times.clear();
    if (!(c.dt > 0.0)) throw InvalidArgument("heat table must be computed for dt > 0");
    Integrator integrator(c);
    integrator.use_heat_table(heat_table);
    FieldState next = state;
    integrator.step(next, noise.values);
    return next;
}

SimulationResult simulate(const SheConfig& config) {
    Integrator integrator(config);
    const auto& c = integrator.config();
    SimulationResult result;
    result.dt = c.dt;
    result.steps = integrator.steps();
    const auto snaps = snapshot_steps(c.snapshot_times, c.dt, result.steps);
    auto snap = snaps.begin();

    FieldState state = initial_state(integrator.sites());
    if (snap != snaps.end() && *snap == 0) {
        result.snapshots.push_back(state);
        ++snap;
    }
    const SheetGrid grid = integrator.sheet();
    std::vector<double> noise(integrator.sites());
    for (std::size_t k = 0; k < result.steps; ++k) {
        sample_increments(grid, k, noise);
        integrator.step(state, noise);
        state.t = static_cast<double>(k + 1) * c.dt;
        result.negative_site_steps += integrator.last_negative_count();
        if (snap != snaps.end() && *snap == k + 1) {
            result.snapshots.push_back(state);
            ++snap;
        }
    }
    const double total = static_cast<double>(result.steps) * static_cast<double>(integrator.sites());
    result.negative_fraction = total > 0 ? static_cast<double>(result.negative_site_steps) / total : 0.0;
    result.final_state = std::move(state);
    return result;
}

CoupledResult simulate_coupled(const SheConfig& fine_in, const SheConfig& coarse_in) {
    SheConfig coarse_cfg = coarse_in;
    if (std::abs(coarse_cfg.eps - 2.0 * fine_in.eps) > 1e-12 * coarse_cfg.eps) {
        throw InvalidArgument("coupled runs need coarse eps = 2 * fine eps");
    }
    if (fine_in.T != coarse_in.T) throw InvalidArgument("coupled runs need the same horizon");
    if (fine_in.seed != coarse_in.seed || fine_in.replica != coarse_in.replica) {
        throw InvalidArgument("coupled runs need the same seed and replica");
    }
    const auto coarse_resolved = resolve(coarse_cfg);
    coarse_cfg = coarse_resolved.config;

    SheConfig fine_cfg = fine_in;
    if (fine_cfg.n == 0) fine_cfg.n = 2 * coarse_cfg.n;
    if (fine_cfg.dt == 0.0) {
        const double r = std::ceil(coarse_cfg.dt / fine_cfg.default_dt() - 1e-9);
        fine_cfg.dt = coarse_cfg.dt / r;
    }
    Integrator fine(fine_cfg);
    Integrator coarse(coarse_cfg);
    const CoupledStreams streams(fine.sheet(), coarse.sheet());
    const std::size_t ratio = streams.ratio();
    const std::size_t coarse_steps = coarse.steps();
    if (fine.steps() != ratio * coarse_steps) throw InvalidArgument("coupled step counts do not match");

    std::vector<double> times = coarse_cfg.snapshot_times;
    if (times.empty()) {
        for (std::size_t i = 1; i <= kDefaultCoupledSnapshots; ++i) {
            times.push_back(coarse_cfg.T * static_cast<double>(i) / kDefaultCoupledSnapshots);
        }
    }
    const auto snaps = snapshot_steps(times, coarse_cfg.dt, coarse_steps);
    auto snap = snaps.begin();

    CoupledResult result;
    result.ratio = ratio;
    FieldState uf = initial_state(fine.sites());
    FieldState uc = initial_state(coarse.sites());
    std::vector<double> fine_noise(fine.sites()), piece(coarse.sites()), coarse_noise(coarse.sites());
    auto compare = [&] {
        double d = 0.0;
        for (std::size_t j = 0; j < uc.values.size(); ++j) {
            d = std::max(d, std::abs(uc.values[j] - uf.values[2 * j]));
        }
        result.sup_difference = std::max(result.sup_difference, d);
        ++result.snapshots;
    };
    if (snap != snaps.end() && *snap == 0) {
        compare();
        ++snap;
    }
    for (std::size_t k = 0; k < coarse_steps; ++k) {
        for (std::size_t i = 0; i < ratio; ++i) {
            const std::uint64_t fine_step = k * ratio + i;
            streams.fine(fine_step, fine_noise);
            fine.step(uf, fine_noise);
            uf.t = static_cast<double>(fine_step + 1) * fine.dt();
            coarsen(fine_noise, piece);
            if (i == 0) {
                std::copy(piece.begin(), piece.end(), coarse_noise.begin());
            } else {
                for (std::size_t j = 0; j < piece.size(); ++j) coarse_noise[j] += piece[j];
            }
        }
        coarse.step(uc, coarse_noise);
        uc.t = static_cast<double>(k + 1) * coarse_cfg.dt;
        if (snap != snaps.end() && *snap == k + 1) {
            compare();
            ++snap;
        }
    }
    result.fine = std::move(uf);
    result.coarse = std::move(uc);
    return result;
}

}  // namespace shelab
