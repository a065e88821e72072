#include "shelab/sigma.hpp"

#include "shelab/errors.hpp"

namespace shelab {

SigmaKind parse_sigma_kind(const std::string& name) {
    if (name == "linear") return SigmaKind::linear;
    if (name == "abs_linear") return SigmaKind::abs_linear;
    if (name == "clipped_linear") return SigmaKind::clipped_linear;
    if (name == "affine_bounded") return SigmaKind::affine_bounded;
    throw InvalidArgument("unknown sigma kind '" + name + "'");
}

std::string to_string(SigmaKind kind) {
    switch (kind) {
        case SigmaKind::linear: return "linear";
        case SigmaKind::abs_linear: return "abs_linear";
        case SigmaKind::clipped_linear: return "clipped_linear";
        case SigmaKind::affine_bounded: return "affine_bounded";
    }
    return "unknown";
}

double SigmaSpec::l_lower() const {
    switch (kind) {
        case SigmaKind::linear:
        case SigmaKind::abs_linear: return std::max(lambda, 0.0);
        // Bounded kinds grow slower than any positive line.
        case SigmaKind::clipped_linear:
        case SigmaKind::affine_bounded: return 0.0;
    }
    return 0.0;
}

bool SigmaSpec::is_zero() const {
    switch (kind) {
        case SigmaKind::linear:
        case SigmaKind::abs_linear: return lambda == 0.0;
        case SigmaKind::clipped_linear: return lambda == 0.0 || clip == 0.0;
        case SigmaKind::affine_bounded: return lambda == 0.0 && clip == 0.0;
    }
    return false;
}

void SigmaSpec::validate() const {
    if (!std::isfinite(lambda)) throw InvalidArgument("sigma.lambda must be finite");
    if (!std::isfinite(clip)) throw InvalidArgument("sigma.clip must be finite");
    if (kind == SigmaKind::clipped_linear && clip < 0.0) {
        throw InvalidArgument("sigma.clip must be non-negative");
    }
}

}  // namespace shelab
