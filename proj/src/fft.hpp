#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace shelab::detail {

// Real-to-complex transform of fixed length n backed by FFTW. Plans are made
// under a global lock; an instance must not be shared between threads.
class RealFft {
public:
    explicit RealFft(std::size_t n);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const { return n_; }
    std::size_t spectrum_size() const { return n_ / 2 + 1; }

    // X_k = sum_j x_j e^{-2 pi i jk/n}, k = 0 .. n/2.
    void forward(std::span<const double> in, std::span<std::complex<double>> out);
    // x_j = sum_k X_k e^{2 pi i jk/n} over the full Hermitian spectrum (no 1/n).
    void inverse(std::span<const std::complex<double>> in, std::span<double> out);

private:
    std::size_t n_;
    double* real_ = nullptr;
    void* spec_ = nullptr;
    void* plan_fwd_ = nullptr;
    void* plan_inv_ = nullptr;
};

// Inverse transform of a real even spectrum given at k = 0 .. n/2, divided by n.
std::vector<double> inverse_real_even(std::span<const double> half_spectrum, std::size_t n);

// (a * b)(m) = sum_j a(j) b(m - j) with indices mod n.
std::vector<double> circular_convolve(std::span<const double> a, std::span<const double> b);

bool is_power_of_two(std::size_t n);

}  // namespace shelab::detail
