#pragma once

#include <stdexcept>
#include <string>

namespace layerr {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite integrand or evaluator failure.
struct EvaluationError : Error {
    using Error::Error;
};

// Target coincides with a quadrature node.
struct SingularEvaluation : Error {
    using Error::Error;
};

// R^2 is constant in the free variable, so no complex root exists.
struct NoRootExists : Error {
    using Error::Error;
};

struct NonConvergence : Error {
    using Error::Error;
};

struct InfiniteGeometryFactor : Error {
    using Error::Error;
};

// The bivariate linear root model has no imaginary part at its center.
struct DegenerateModel : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace layerr
