#include "shelab/noise.hpp"

#include <algorithm>
#include <cmath>

#include "shelab/errors.hpp"
#include "shelab/normal.hpp"
#include "shelab/philox.hpp"

namespace shelab {

namespace {

PhiloxKey key_of(std::uint64_t seed) {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

PhiloxCounter counter_of(std::uint32_t replica, std::uint64_t block, std::uint64_t step) {
    // Sites are grouped in blocks of four; 2^32 blocks is far beyond any box.
    return {static_cast<std::uint32_t>(block), replica, static_cast<std::uint32_t>(step),
            static_cast<std::uint32_t>(step >> 32)};
}

}  // namespace

void SheetGrid::validate() const {
    if (!(eps > 0.0)) throw InvalidArgument("sheet grid requires eps > 0");
    if (!(dt > 0.0)) throw InvalidArgument("sheet grid requires dt > 0");
    if (n < 2) throw InvalidArgument("sheet grid requires at least two sites");
}

double standard_normal(std::uint64_t seed, std::uint32_t replica, std::uint64_t site, std::uint64_t step) {
    const auto words = philox4x32_10(counter_of(replica, site / 4, step), key_of(seed));
    return normal_quantile(u32_to_open_unit(words[site % 4]));
}

void sample_increments(const SheetGrid& grid, std::uint64_t step, std::span<double> out) {
    grid.validate();
    if (out.size() != grid.n) throw InvalidArgument("sample_increments: output size mismatch");
    const double scale = std::sqrt(grid.dt);
    const PhiloxKey key = key_of(grid.seed);
    const std::size_t n = grid.n;
    thread_local std::vector<double> uniforms;
    uniforms.resize(n);
    for (std::size_t block = 0; 4 * block < n; ++block) {
        const auto words = philox4x32_10(counter_of(grid.replica, block, step), key);
        const std::size_t base = 4 * block;
        const std::size_t count = std::min<std::size_t>(4, n - base);
        for (std::size_t i = 0; i < count; ++i) uniforms[base + i] = u32_to_open_unit(words[i]);
    }
    normal_quantile_batch(uniforms.data(), out.data(), n);
    for (double& v : out) v *= scale;
}

NoiseIncrement sample_increments(const SheetGrid& grid, std::uint64_t step) {
    NoiseIncrement inc;
    inc.values.resize(grid.n);
    sample_increments(grid, step, inc.values);
    return inc;
}

void coarsen(std::span<const double> fine, std::span<double> coarse) {
    if (fine.size() % 2 != 0) throw InvalidArgument("coarsen: fine increment has odd length");
    if (coarse.size() * 2 != fine.size()) throw InvalidArgument("coarsen: output size mismatch");
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t j = 0; j < coarse.size(); ++j) {
        coarse[j] = (fine[2 * j] + fine[2 * j + 1]) * inv_sqrt2;
    }
}

NoiseIncrement coarsen(const NoiseIncrement& fine) {
    if (fine.values.size() % 2 != 0) throw InvalidArgument("coarsen: fine increment has odd length");
    NoiseIncrement out;
    out.values.resize(fine.values.size() / 2);
    coarsen(fine.values, out.values);
    return out;
}

CoupledStreams::CoupledStreams(const SheetGrid& fine, const SheetGrid& coarse)
    : fine_(fine), coarse_(coarse), ratio_(0) {
    fine.validate();
    coarse.validate();
    if (fine.seed != coarse.seed || fine.replica != coarse.replica) {
        throw InvalidArgument("coupled streams must share seed and replica");
    }
    if (fine.n != 2 * coarse.n) throw InvalidArgument("fine grid must have twice the coarse sites");
    if (std::abs(coarse.eps - 2.0 * fine.eps) > 1e-12 * coarse.eps) {
        throw InvalidArgument("coarse eps must be twice the fine eps");
    }
    const double r = coarse.dt / fine.dt;
    const double rounded = std::round(r);
    if (rounded < 1.0 || std::abs(r - rounded) > 1e-9 * r) {
        throw InvalidArgument("coarse dt must be an integer multiple of fine dt");
    }
    ratio_ = static_cast<std::size_t>(rounded);
}

void CoupledStreams::fine(std::uint64_t fine_step, std::span<double> out) const {
    sample_increments(fine_, fine_step, out);
}

void CoupledStreams::coarse(std::uint64_t coarse_step, std::span<double> out) const {
    if (out.size() != coarse_.n) throw InvalidArgument("coupled coarse: output size mismatch");
    std::vector<double> fine_buf(fine_.n), piece(coarse_.n);
    const std::uint64_t first = coarse_step * ratio_;
    for (std::size_t i = 0; i < ratio_; ++i) {
        sample_increments(fine_, first + i, fine_buf);
        coarsen(fine_buf, piece);
        if (i == 0) {
            std::copy(piece.begin(), piece.end(), out.begin());
        } else {
            for (std::size_t j = 0; j < out.size(); ++j) out[j] += piece[j];
        }
    }
}

NoiseIncrement CoupledStreams::coarse(std::uint64_t coarse_step) const {
    NoiseIncrement inc;
    inc.values.resize(coarse_.n);
    coarse(coarse_step, inc.values);
    return inc;
}

}  // namespace shelab
