#ifndef GELKIT_TILT_SOLVER_HPP
#define GELKIT_TILT_SOLVER_HPP

#include "gelkit/family.hpp"
#include "gelkit/types.hpp"

namespace gelkit {

enum class TiltStatus { Converged, ConvexHullFailure, DomainFailure, MaxIter };

const char* to_string(TiltStatus status);

// Solution of the inner problem: the tilting multiplier lambda_hat(theta),
// the implied probabilities, and the dual objective n^-1 sum rho(lambda'g_i).
struct TiltSolution {
    Vector lambda_hat;
    Vector weights;
    double inner_value = 0.0;
    int iterations = 0;
    TiltStatus status = TiltStatus::MaxIter;
};

struct TiltOptions {
    Vector lambda0;     // warm start; empty or infeasible falls back to 0
    int max_iter = 200;
};

/// Solve lambda_hat = argmax_lambda n^-1 sum rho(lambda' g_i) for the
/// family's carrier. Newton with Armijo backtracking on the concave dual;
/// the line search enforces 1 - lambda'g_i >= 1/n for EL and
/// 1 + gamma lambda'g_i > 0 for ECR(gamma < 0). CU uses its closed form
/// lambda = -(n^-1 sum g_i g_i')^-1 g_bar. Convergence requires the
/// stationarity residual ||n^-1 sum tau(lambda'g_i) g_i|| <= 1e-10 (1 + max||g_i||)
/// and the weighted-moment residual ||sum w_i g_i|| <= 1e-8 (1 + max||g_i||).
TiltSolution solve_lambda(const FamilySpec& family, const Matrix& gmat,
                          const TiltOptions& options = {});

/// Implied probabilities w_i = tau(lambda'g_i) / sum_j tau(lambda'g_j).
/// Throws DomainViolation when a term is infeasible (EL: 1 - lambda'g_i <= 0).
/// Weights may be negative for ECR(gamma > 0); they are returned unchanged.
Vector implied_weights(const FamilySpec& family, const Vector& lambda, const Matrix& gmat);

} // namespace gelkit

#endif
