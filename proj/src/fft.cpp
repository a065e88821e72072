#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

#include "shelab/errors.hpp"

namespace shelab::detail {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

bool is_power_of_two(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

RealFft::RealFft(std::size_t n) : n_(n) {
    if (n < 2) throw InvalidArgument("FFT length must be at least 2");
    std::lock_guard lock(planner_mutex());
    real_ = fftw_alloc_real(n);
    auto* spec = fftw_alloc_complex(n / 2 + 1);
    spec_ = spec;
    const int len = static_cast<int>(n);
    plan_fwd_ = fftw_plan_dft_r2c_1d(len, real_, spec, FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_dft_c2r_1d(len, spec, real_, FFTW_ESTIMATE);
    if (!plan_fwd_ || !plan_inv_) throw Error("FFTW planning failed");
}

RealFft::~RealFft() {
    std::lock_guard lock(planner_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_inv_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
    fftw_free(real_);
    fftw_free(spec_);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
    if (in.size() != n_ || out.size() != spectrum_size()) throw InvalidArgument("FFT size mismatch");
    std::copy(in.begin(), in.end(), real_);
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    std::memcpy(out.data(), spec_, sizeof(fftw_complex) * spectrum_size());
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
    if (out.size() != n_ || in.size() != spectrum_size()) throw InvalidArgument("FFT size mismatch");
    // c2r destroys its input, so it always works on the private buffer.
    std::memcpy(spec_, in.data(), sizeof(fftw_complex) * spectrum_size());
    fftw_execute(static_cast<fftw_plan>(plan_inv_));
    std::copy(real_, real_ + n_, out.begin());
}

std::vector<double> inverse_real_even(std::span<const double> half_spectrum, std::size_t n) {
    if (half_spectrum.size() != n / 2 + 1) throw InvalidArgument("spectrum size mismatch");
    RealFft fft(n);
    std::vector<std::complex<double>> spec(half_spectrum.begin(), half_spectrum.end());
    std::vector<double> out(n);
    fft.inverse(spec, out);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (double& v : out) v *= inv_n;
    return out;
}

std::vector<double> circular_convolve(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidArgument("circular_convolve: size mismatch");
    const std::size_t n = a.size();
    RealFft fft(n);
    std::vector<std::complex<double>> fa(n / 2 + 1), fb(n / 2 + 1);
    fft.forward(a, fa);
    fft.forward(b, fb);
    for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
    std::vector<double> out(n);
    fft.inverse(fa, out);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (double& v : out) v *= inv_n;
    return out;
}

}  // namespace shelab::detail
