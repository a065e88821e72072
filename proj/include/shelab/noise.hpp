#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace shelab {

/// Discretized Brownian sheet: n periodic cells of width eps, time step dt.
struct SheetGrid {
    double eps = 0.1;
    double dt = 1e-3;
    std::size_t n = 2;
    std::uint64_t seed = 0;
    std::uint32_t replica = 0;

    void validate() const;
};

struct NoiseIncrement {
    std::vector<double> values;
};

// Standard normal at (seed, replica, site, step). Pure function of its key.
double standard_normal(std::uint64_t seed, std::uint32_t replica, std::uint64_t site, std::uint64_t step);

// Writes sqrt(dt) * N(0, 1) for every site at the given step.
void sample_increments(const SheetGrid& grid, std::uint64_t step, std::span<double> out);
NoiseIncrement sample_increments(const SheetGrid& grid, std::uint64_t step);

// coarse[j] = (fine[2j] + fine[2j+1]) / sqrt(2).
void coarsen(std::span<const double> fine, std::span<double> coarse);
NoiseIncrement coarsen(const NoiseIncrement& fine);

/// Both resolutions of one sheet: the coarse increment over a coarse step is
/// the sum, in fine-step order, of the coarsened fine increments it spans.
class CoupledStreams {
public:
    CoupledStreams(const SheetGrid& fine, const SheetGrid& coarse);

    std::size_t ratio() const { return ratio_; }
    const SheetGrid& fine_grid() const { return fine_; }
    const SheetGrid& coarse_grid() const { return coarse_; }

    void fine(std::uint64_t fine_step, std::span<double> out) const;
    void coarse(std::uint64_t coarse_step, std::span<double> out) const;
    NoiseIncrement coarse(std::uint64_t coarse_step) const;

private:
    SheetGrid fine_;
    SheetGrid coarse_;
    std::size_t ratio_;
};

}  // namespace shelab
