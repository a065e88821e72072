#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace shelab {

// Pairwise summation in a fixed order, so results do not depend on threading.
double pairwise_sum(std::span<const double> values);

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};

// Mean with its jackknife standard error (equal to s / sqrt(n) for a mean).
Estimate jackknife_mean(std::span<const double> values);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Sample quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);
inline double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

/// Slope of t -> log(mean over replicas of samples[r][i]) with a delete-one-block
/// jackknife over contiguous replica blocks.
struct SlopeEstimate {
    double slope = 0.0;
    double std_error = 0.0;
    std::vector<double> log_means;
};

SlopeEstimate log_mean_slope(std::span<const double> times, const std::vector<std::vector<double>>& samples,
                             std::size_t blocks = 20);

}  // namespace shelab
