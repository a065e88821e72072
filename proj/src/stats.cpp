#include "shelab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "shelab/errors.hpp"

namespace shelab {

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Estimate jackknife_mean(std::span<const double> values) {
    Estimate e;
    e.count = values.size();
    if (values.empty()) throw InvalidArgument("jackknife_mean: no values");
    const double n = static_cast<double>(values.size());
    e.mean = pairwise_sum(values) / n;
    if (values.size() < 2) return e;
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - e.mean;
        sq[i] = d * d;
    }
    e.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
    return e;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit_line needs two or more points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw InvalidArgument("fit_line: abscissae are all equal");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw InvalidArgument("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

SlopeEstimate log_mean_slope(std::span<const double> times, const std::vector<std::vector<double>>& samples,
                             std::size_t blocks) {
    const std::size_t reps = samples.size();
    if (reps < 2) throw InvalidArgument("log_mean_slope needs at least two replicas");
    const std::size_t nt = times.size();
    for (const auto& row : samples) {
        if (row.size() != nt) throw InvalidArgument("log_mean_slope: ragged samples");
    }
    blocks = std::clamp<std::size_t>(blocks, 2, reps);

    // Block sums per time, so each jackknife replicate is a subtraction.
    std::vector<std::vector<double>> block_sum(blocks, std::vector<double>(nt, 0.0));
    std::vector<std::size_t> block_count(blocks, 0);
    for (std::size_t r = 0; r < reps; ++r) {
        const std::size_t b = r * blocks / reps;
        ++block_count[b];
        for (std::size_t i = 0; i < nt; ++i) block_sum[b][i] += samples[r][i];
    }
    std::vector<double> total(nt, 0.0);
    for (std::size_t b = 0; b < blocks; ++b) {
        for (std::size_t i = 0; i < nt; ++i) total[i] += block_sum[b][i];
    }
    auto slope_of = [&](const std::vector<double>& sums, double count) {
        std::vector<double> y(nt);
        for (std::size_t i = 0; i < nt; ++i) y[i] = std::log(sums[i] / count);
        return std::pair{fit_line(times, y).slope, y};
    };
    SlopeEstimate out;
    auto [full, logs] = slope_of(total, static_cast<double>(reps));
    out.slope = full;
    out.log_means = logs;

    std::vector<double> leave(blocks);
    std::vector<double> partial(nt);
    for (std::size_t b = 0; b < blocks; ++b) {
        for (std::size_t i = 0; i < nt; ++i) partial[i] = total[i] - block_sum[b][i];
        leave[b] = slope_of(partial, static_cast<double>(reps - block_count[b])).first;
    }
    double mean = 0.0;
    for (double v : leave) mean += v;
    mean /= static_cast<double>(blocks);
    double var = 0.0;
    for (double v : leave) var += (v - mean) * (v - mean);
    const double g = static_cast<double>(blocks);
    out.std_error = std::sqrt((g - 1.0) / g * var);
    return out;
}

}  // namespace shelab
