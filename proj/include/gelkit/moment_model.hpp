#ifndef GELKIT_MOMENT_MODEL_HPP
#define GELKIT_MOMENT_MODEL_HPP

#include <functional>

#include "gelkit/dataset.hpp"
#include "gelkit/types.hpp"

namespace gelkit {

// Moment-condition model E[g(x, theta)] = 0 with Ng >= Ntheta >= 1.
//
// g_eval is mandatory. jac_eval (Ng x Ntheta matrix dg/dtheta') and hess_eval
// (Ntheta x Ntheta matrix d^2 g_j / dtheta dtheta' for a given component j)
// are optional; central-difference fallbacks are used when absent. The search
// box bounds the multistart grid of the outer optimizer.
struct MomentModel {
    int n_theta = 0;
    int n_g = 0;
    int n_x = 0;
    std::function<Vector(const Vector& x, const Vector& theta)> g_eval;
    std::function<Matrix(const Vector& x, const Vector& theta)> jac_eval;
    std::function<Matrix(const Vector& x, const Vector& theta, int j)> hess_eval;
    Vector box_lo;
    Vector box_hi;

    void validate() const;
};

/// Default multistart box: center +- 5 in every coordinate.
void set_default_box(MomentModel& model, const Vector& center);

/// n x Ng matrix with row i = g(x_i, theta). Throws NonFiniteMoment if any
/// entry is NaN or infinite.
Matrix eval_moments(const MomentModel& model, const Dataset& data, const Vector& theta);

/// Column means g_hat of a moment matrix.
Vector mean_moments(const Matrix& gmat);

/// Central-difference Jacobian dg/dtheta' with step cbrt(eps)*max(1, |theta_j|).
Matrix numeric_jacobian(const MomentModel& model, const Vector& x, const Vector& theta);

/// Analytic Jacobian when the model provides one, numeric fallback otherwise.
Matrix jacobian(const MomentModel& model, const Vector& x, const Vector& theta);

/// d^2 g_j / dtheta dtheta', analytic when provided, else central differences
/// of the Jacobian. Result is symmetrized.
Matrix second_derivative(const MomentModel& model, const Vector& x, const Vector& theta, int j);

} // namespace gelkit

#endif
