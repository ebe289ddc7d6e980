#ifndef GELKIT_BUILTIN_MODELS_HPP
#define GELKIT_BUILTIN_MODELS_HPP

#include <string>

#include "gelkit/moment_model.hpp"

namespace gelkit {

enum class DesignKind { HallHorowitz, MeanKnownVariance };

// A builtin simulation design: the moment model plus everything a replication
// engine needs (sampling distribution parameters and the true / pseudo-true
// parameter value).
struct BuiltinDesign {
    DesignKind kind;
    double param = 0.0; // K for Hall-Horowitz, sigma for mean/known-variance
    MomentModel model;
    Vector theta_star;
    std::string id;
};

/// K moment conditions r, r*x2, r*(x3 - 1), ..., r*(xK - 1) with
/// r(x, theta) = exp(-0.72 - (x1 + x2) theta + 3 x2) - 1, satisfied at
/// theta* = 3 when (x1, x2) ~ N(0, 0.16 I) and xk ~ chi2_1 for k >= 3.
BuiltinDesign builtin_hall_horowitz(int K);

/// g = (x - theta, (x - theta)^2 - 1) with x ~ N(0, sigma^2): sigma = 1 is
/// the correctly specified Model C, sigma = 0.8 the misspecified Model M
/// with pseudo-true value theta* = 0.
BuiltinDesign builtin_mean_known_variance(double sigma);

/// Registry lookup by string id: "hall_horowitz:K" or
/// "mean_known_variance:sigma". Throws BadDesign for anything else.
BuiltinDesign parse_design(const std::string& id);

} // namespace gelkit

#endif
