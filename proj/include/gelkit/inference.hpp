#ifndef GELKIT_INFERENCE_HPP
#define GELKIT_INFERENCE_HPP

#include "gelkit/estimator.hpp"

namespace gelkit {

// Efficient-GMM-style covariance Sigma = (G' Omega^-1 G)^-1 evaluated with
// sample averages at theta_hat, plus the overidentification test carried
// along for reporting.
struct ClassicalInference {
    Matrix sigma_hat;
    Vector std_errors;     // sqrt(diag(Sigma_hat) / n)
    double lr_overid = 0.0;
    double p_overid = 1.0;
    int df_overid = 0;
};

struct LrTest {
    double stat = 0.0;
    double p = 1.0;
    int df = 0;
};

struct OverIdTest {
    double stat = 0.0;
    double p = 1.0;
    int df = 0;
};

struct BiasEstimate {
    Vector bias;     // n^-1 H (-a + E[G_i H g_i]) plug-in
    Vector a_vec;    // a_j = tr(Sigma E[d^2 g_j / dtheta dtheta']) / 2
    Vector theta_bc; // theta_hat - bias
};

// Augmented just-identified system beta = (tau, kappa', lambda', theta')'
// and its sandwich covariance Gamma^-1 Phi (Gamma')^-1 / n, valid under
// misspecification.
struct RobustBeta {
    Vector beta_hat;
    Matrix gamma_hat;
    Matrix phi_hat;
    Matrix cov;
    Matrix theta_block;   // trailing Ntheta x Ntheta block of cov
    double residual_norm = 0.0; // ||n^-1 sum phi(x_i, beta_hat)||
};

struct IndependenceReport {
    double gap_et = 0.0; // max |Q_ab - Q_a Q_b| under exponential tilting
    double gap_el = 0.0; // same functionals under EL weights at the same lambda
};

/// Sigma_hat = (G_hat' Omega_hat^-1 G_hat)^-1 with the overidentification
/// test appended. Throws SingularOmega / RankDeficientJacobian.
ClassicalInference classical_covariance(const MomentModel& model, const Dataset& data,
                                        const Vector& theta_hat);

/// Likelihood-ratio statistic -2n (lnL(theta0) - lnL(theta_hat)), chi2_Ntheta
/// calibrated. Inner failure at theta0 gives stat = +inf, p = 0.
LrTest lr_statistic(const MomentModel& model, const Dataset& data, const Vector& theta0,
                    const Vector& theta_hat);

/// Overidentification statistic -2n lnL(theta_hat), chi2_{Ng - Ntheta}
/// calibrated. Just-identified models report df = 0 and stat 0.
OverIdTest overid_statistic(const MomentModel& model, const Dataset& data,
                            const Vector& theta_hat);

/// O(n^-1) bias plug-in and the bias-corrected estimate. Requires second
/// derivatives (analytic or numeric fallback).
BiasEstimate bias_o1(const MomentModel& model, const Dataset& data, const Vector& theta_hat);

/// Misspecification-robust sandwich for the augmented vector, built around
/// the ET multiplier at theta_hat. Gamma_hat is a central-difference Jacobian
/// of the stacked moment function; Phi_hat its outer-product average.
/// Throws SingularGamma or MomentResidualTooLarge.
RobustBeta robust_covariance(const MomentModel& model, const Dataset& data,
                             const Vector& theta_hat, const Vector& lambda_hat);

/// Factorization diagnostic for two moment blocks: tilted means of indicator
/// test functions at empirical quartiles, reported as the largest deviation
/// |Q_ab - Q_a Q_b| under ET and under EL weights at the supplied lambda.
/// With lambda = 0 both reduce to the raw empirical factorization gap.
IndependenceReport independence_diagnostic(const Matrix& gmat_a, const Matrix& gmat_b,
                                           const Vector& lambda);

} // namespace gelkit

#endif
