#pragma once

#include <stdexcept>
#include <string>

namespace shelab {

// Base class for every error raised by the library. The CLI maps any Error
// that escapes a subcommand to exit status 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Numerical fit of the small-z law did not behave like a valid walk.
class FitFailure : public Error {
public:
    using Error::Error;
};

// The frequency range available to a Fourier inversion cannot bring the
// symbol below the truncation threshold.
class CutoffInsufficient : public Error {
public:
    using Error::Error;
};

// A kernel still carries non-negligible mass at the edge of the periodic box.
class BoundaryMassError : public Error {
public:
    using Error::Error;
};

// A trajectory produced a non-finite or overflowing value.
class SimulationAborted : public Error {
public:
    SimulationAborted(const std::string& what, double time)
        : Error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

// Volterra solver refinements disagree beyond tolerance.
class GridTooCoarse : public Error {
public:
    using Error::Error;
};

// An experiment precondition checked on realized data was violated.
class PreconditionViolation : public Error {
public:
    using Error::Error;
};

// The fitted Lyapunov slope is too uncertain for the requested window.
class WindowTooShort : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace shelab
