#ifndef GELKIT_TYPES_HPP
#define GELKIT_TYPES_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace gelkit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Hard failures are exceptions; expected solver outcomes (non-convergence,
// convex-hull failures) travel as status enums on the result types.

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A moment evaluation produced NaN or infinity.
struct NonFiniteMoment : Error {
    using Error::Error;
};

/// Invalid builtin-design parameter (K < 2, sigma <= 0, unknown id, ...).
struct BadDesign : Error {
    using Error::Error;
};

/// The origin is not in the convex hull of {g_i}: no reweighting exists.
struct ConvexHullError : Error {
    using Error::Error;
};

/// lambda lies outside the tilting function's domain for some observation.
struct DomainViolation : Error {
    using Error::Error;
};

struct SingularHessian : Error {
    using Error::Error;
};

struct SingularOmega : Error {
    using Error::Error;
};

struct RankDeficientJacobian : Error {
    using Error::Error;
};

struct BadDf : Error {
    using Error::Error;
};

struct SingularGamma : Error {
    using Error::Error;
};

/// The estimating-equation residual at beta_hat is too large: the supplied
/// estimate and the stacked moment system disagree.
struct MomentResidualTooLarge : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace gelkit

#endif
