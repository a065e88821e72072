#include <doctest.h>

#include <cmath>
#include <numeric>

#include "shelab/parallel.hpp"
#include "shelab/stats.hpp"

using namespace shelab;

TEST_CASE("pairwise sum") {
    std::vector<double> v(1000);
    std::iota(v.begin(), v.end(), 1.0);
    CHECK(pairwise_sum(v) == 500500.0);
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
    // Many small terms after a large one keep their contribution.
    std::vector<double> w(1 << 20, 1e-16);
    w[0] = 1.0;
    CHECK(pairwise_sum(w) == doctest::Approx(1.0 + 1e-16 * ((1 << 20) - 1)).epsilon(1e-15));
}

TEST_CASE("jackknife mean equals s / sqrt(n)") {
    std::vector<double> v{1.0, 4.0, 2.0, 8.0, 5.0};
    const auto e = jackknife_mean(v);
    const double mean = 4.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    CHECK(e.mean == doctest::Approx(mean));
    CHECK(e.std_error == doctest::Approx(std::sqrt(ss / 4.0 / 5.0)).epsilon(1e-12));
    CHECK(e.count == 5);
}

TEST_CASE("line fit") {
    std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    const auto f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
}

TEST_CASE("quantiles") {
    std::vector<double> v{5, 1, 4, 2, 3};
    CHECK(median(v) == 3.0);
    CHECK(quantile(v, 0.0) == 1.0);
    CHECK(quantile(v, 1.0) == 5.0);
    CHECK(quantile(v, 0.25) == 2.0);
    CHECK(quantile({1.0, 2.0}, 0.5) == 1.5);
}

TEST_CASE("log mean slope recovers an exponential rate") {
    std::vector<double> times{0.0, 0.5, 1.0, 1.5, 2.0};
    std::vector<std::vector<double>> samples;
    for (int r = 0; r < 40; ++r) {
        std::vector<double> row;
        const double scale = 1.0 + 0.1 * ((r % 5) - 2);
        for (double t : times) row.push_back(scale * std::exp(0.3 * t));
        samples.push_back(row);
    }
    const auto s = log_mean_slope(times, samples);
    CHECK(s.slope == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(s.std_error < 1e-10);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
    std::vector<int> hits(257, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
        if (i == 3) throw std::runtime_error("boom");
    }), std::runtime_error);
    CHECK(worker_count() >= 1);
}
