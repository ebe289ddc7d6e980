#ifndef GELKIT_ESTIMATOR_HPP
#define GELKIT_ESTIMATOR_HPP

#include "gelkit/builtin_models.hpp"
#include "gelkit/tilt_solver.hpp"

namespace gelkit {

enum class EstimateStatus { Converged, NoConvexHull, MaxIter };

const char* to_string(EstimateStatus status);

struct EstimateOptions {
    int starts = 5;       // equispaced midpoints of the search box
    double tol = 1e-8;    // outer gradient sup-norm (ETEL) / simplex diameter
    int max_iter = 500;   // outer iterations per start
};

struct EstimateResult {
    Vector theta_hat;
    Vector lambda_hat;    // inner multiplier at theta_hat
    Vector weights;
    double log_like = 0.0; // ln L_hat(theta_hat) for ETEL, profile value otherwise
    EstimateStatus status = EstimateStatus::MaxIter;
    int starts_tried = 0;
    FamilySpec family;
};

/// ETEL profile log likelihood
///   ln L_hat(theta) = -ln( n^-1 sum_i exp(lambda_hat'(g_i - g_bar)) )
/// with lambda_hat solving n^-1 sum exp(lambda'g_i) g_i = 0. Equals
/// n^-1 sum ln(n w_i). Throws ConvexHullError when the inner solve fails.
double etel_objective(const MomentModel& model, const Dataset& data, const Vector& theta);

/// Exact gradient of etel_objective:
///   d lnL/dtheta' = g_bar' (dlambda/dtheta') + lambda' G_bar - lambda' G_tilde,
///   dlambda/dtheta' = -Omega_tilde^-1 sum_i w_i (I + g_i lambda') G_i.
/// Throws SingularHessian when Omega_tilde = sum w_i g_i g_i' is singular.
Vector etel_gradient(const MomentModel& model, const Dataset& data, const Vector& theta);

/// GEL profile objective n^-1 sum rho(lambda_hat(theta)' g_i(theta)); the
/// point estimate for EL/ET/CU/ECR minimizes this over theta.
double gel_profile(const FamilySpec& family, const MomentModel& model, const Dataset& data,
                   const Vector& theta);

/// Multistart point estimation. ETEL maximizes etel_objective by BFGS with
/// the exact gradient; the other families minimize gel_profile by
/// Nelder-Mead. Deterministic given (family, model, data, options); ties
/// between converged starts break by better objective, then smaller
/// ||lambda_hat||, then lexicographically smaller theta.
EstimateResult estimate(const FamilySpec& family, const MomentModel& model, const Dataset& data,
                        const EstimateOptions& options = {});

} // namespace gelkit

#endif
