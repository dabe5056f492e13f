#pragma once

#include <stdexcept>

namespace ruinlab {

// Precondition violations carry the name of the violated requirement in the
// message so CLI users see which input was bad (exit code 2 territory).

// Parameters outside the regime a routine is valid for (e.g. rho >= 1 where
// rho < 1 is required).
struct RegimeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Evaluation point outside a function's domain, or a claim law whose support
// makes the evaluation undefined.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Adaptive quadrature could not reach the requested absolute tolerance.
struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Coupled simulation with initial capitals out of order (u < v).
struct OrderError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Ruin level incompatible with the initial capital.
struct LevelError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed exit interval, or initial capital outside it.
struct IntervalError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Bad simulation configuration (non-positive dt, dt > horizon, ...).
struct InvalidConfig : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace ruinlab
