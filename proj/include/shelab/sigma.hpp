#pragma once

#include <algorithm>
#include <cmath>
#include <string>

namespace shelab {

enum class SigmaKind { linear, abs_linear, clipped_linear, affine_bounded };

SigmaKind parse_sigma_kind(const std::string& name);
std::string to_string(SigmaKind kind);

/// Diffusion coefficient of the noise term.
///
///   linear          lambda z
///   abs_linear      lambda |z|
///   clipped_linear  clamp(lambda z, -clip, clip)
///   affine_bounded  clip + lambda clamp(z, -1, 1)
struct SigmaSpec {
    SigmaKind kind = SigmaKind::linear;
    double lambda = 1.0;
    double clip = 1.0;

    double operator()(double z) const {
        switch (kind) {
            case SigmaKind::linear: return lambda * z;
            case SigmaKind::abs_linear: return lambda * std::abs(z);
            case SigmaKind::clipped_linear: return std::clamp(lambda * z, -clip, clip);
            case SigmaKind::affine_bounded: return clip + lambda * std::clamp(z, -1.0, 1.0);
        }
        return 0.0;
    }

    double lip() const { return std::abs(lambda); }
    // Largest L with L z <= sigma(z) for all z > 0; 0 when none exists.
    double l_lower() const;
    bool fixes_zero() const { return (*this)(0.0) == 0.0; }
    bool is_zero() const;
    void validate() const;
};

inline SigmaSpec sigma_linear(double lambda) { return {SigmaKind::linear, lambda, 0.0}; }
inline SigmaSpec sigma_abs_linear(double lambda) { return {SigmaKind::abs_linear, lambda, 0.0}; }

}  // namespace shelab
