#include "gelkit/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gelkit/special_functions.hpp"

namespace gelkit {

namespace {

constexpr double kConditionLimit = 1e12;
const double kInf = std::numeric_limits<double>::infinity();
const double kStepBase = std::cbrt(std::numeric_limits<double>::epsilon());

// Symmetric inverse with a condition check (column-pivoted factorizations are
// overkill for these small SPD blocks; the eigendecomposition doubles as the
// condition estimate).
Matrix invert_spd(const Matrix& m, const char* what) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > kConditionLimit) {
        if (std::string(what) == "omega")
            throw SingularOmega("moment second-moment matrix is singular or ill-conditioned");
        throw SingularHessian(std::string(what) + " matrix is singular or ill-conditioned");
    }
    return eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
           eig.eigenvectors().transpose();
}

struct MomentPieces {
    Matrix gmat;       // n x Ng
    Vector gbar;       // Ng
    Matrix omega_hat;  // n^-1 sum g g'
    Matrix g_jac_mean; // n^-1 sum G_i
};

MomentPieces moment_pieces(const MomentModel& model, const Dataset& data, const Vector& theta) {
    MomentPieces p;
    p.gmat = eval_moments(model, data, theta);
    p.gbar = mean_moments(p.gmat);
    const auto n = static_cast<double>(data.n());
    p.omega_hat = p.gmat.transpose() * p.gmat / n;
    p.g_jac_mean = Matrix::Zero(model.n_g, model.n_theta);
    for (int i = 0; i < data.n(); ++i) p.g_jac_mean += jacobian(model, data.row(i), theta);
    p.g_jac_mean /= n;
    return p;
}

// Stacked estimating function phi(x_i, beta) averaged over the sample, with
// beta = (tau, kappa', lambda', theta')'. Zero at beta_hat by construction.
Vector phi_mean(const MomentModel& model, const Dataset& data, double tau, const Vector& kappa,
                const Vector& lambda, const Vector& theta) {
    const int ng = model.n_g;
    const int ntheta = model.n_theta;
    Vector acc = Vector::Zero(1 + 2 * ng + ntheta);
    for (int i = 0; i < data.n(); ++i) {
        const Vector x = data.row(i);
        const Vector g = model.g_eval(x, theta);
        const Matrix g_jac = jacobian(model, x, theta);
        const double tau_i = std::exp(lambda.dot(g));
        acc(0) += tau_i - tau;
        acc.segment(1, ng) += tau_i * g;
        acc.segment(1 + ng, ng) += (tau - tau_i) * g + tau_i * g * g.dot(kappa);
        acc.tail(ntheta) += g_jac.transpose() *
                            (tau_i * kappa + (tau_i * g.dot(kappa) - tau_i + tau) * lambda);
    }
    return acc / static_cast<double>(data.n());
}

Vector column_quartiles(const Vector& column) {
    std::vector<double> sorted(column.data(), column.data() + column.size());
    std::sort(sorted.begin(), sorted.end());
    const auto n = sorted.size();
    Vector q(3);
    for (int k = 0; k < 3; ++k) {
        const double p = 0.25 * (k + 1);
        auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n))) - 1;
        q(k) = sorted[std::min(idx, n - 1)];
    }
    return q;
}

// Indicator test functions 1{column <= quartile} for every column, n x 3k.
Matrix indicator_matrix(const Matrix& block) {
    Matrix out(block.rows(), 3 * block.cols());
    for (int c = 0; c < block.cols(); ++c) {
        const Vector q = column_quartiles(block.col(c));
        for (int k = 0; k < 3; ++k)
            out.col(3 * c + k) =
                (block.col(c).array() <= q(k)).cast<double>();
    }
    return out;
}

double factorization_gap(const Matrix& funcs_a, const Matrix& funcs_b, const Vector& weights) {
    const Vector qa = funcs_a.transpose() * weights;
    const Vector qb = funcs_b.transpose() * weights;
    const Matrix qab = funcs_a.transpose() * weights.asDiagonal() * funcs_b;
    return (qab - qa * qb.transpose()).cwiseAbs().maxCoeff();
}

} // namespace

ClassicalInference classical_covariance(const MomentModel& model, const Dataset& data,
                                        const Vector& theta_hat) {
    model.validate();
    const MomentPieces p = moment_pieces(model, data, theta_hat);

    Eigen::ColPivHouseholderQR<Matrix> qr(p.g_jac_mean);
    if (qr.rank() < model.n_theta)
        throw RankDeficientJacobian("mean moment Jacobian is rank deficient");

    const Matrix omega_inv = invert_spd(p.omega_hat, "omega");
    const Matrix info = p.g_jac_mean.transpose() * omega_inv * p.g_jac_mean;
    ClassicalInference out;
    out.sigma_hat = invert_spd(info, "information");
    out.std_errors = (out.sigma_hat.diagonal() / static_cast<double>(data.n())).cwiseSqrt();

    const OverIdTest overid = overid_statistic(model, data, theta_hat);
    out.lr_overid = overid.stat;
    out.p_overid = overid.p;
    out.df_overid = overid.df;
    return out;
}

LrTest lr_statistic(const MomentModel& model, const Dataset& data, const Vector& theta0,
                    const Vector& theta_hat) {
    LrTest out;
    out.df = model.n_theta;
    const double loglike_hat = etel_objective(model, data, theta_hat);
    double loglike_null;
    try {
        loglike_null = etel_objective(model, data, theta0);
    } catch (const ConvexHullError&) {
        out.stat = kInf; // theta0 admits no reweighting at all
        out.p = 0.0;
        return out;
    }
    out.stat = std::max(0.0, -2.0 * data.n() * (loglike_null - loglike_hat));
    out.p = chi2_sf(out.stat, out.df);
    return out;
}

OverIdTest overid_statistic(const MomentModel& model, const Dataset& data,
                            const Vector& theta_hat) {
    OverIdTest out;
    out.df = model.n_g - model.n_theta;
    if (out.df == 0) { // just identified: the statistic is 0 by construction
        out.stat = 0.0;
        out.p = 1.0;
        return out;
    }
    out.stat = std::max(0.0, -2.0 * data.n() * etel_objective(model, data, theta_hat));
    out.p = chi2_sf(out.stat, out.df);
    return out;
}

BiasEstimate bias_o1(const MomentModel& model, const Dataset& data, const Vector& theta_hat) {
    model.validate();
    const MomentPieces p = moment_pieces(model, data, theta_hat);
    const auto n = static_cast<double>(data.n());

    const Matrix omega_inv = invert_spd(p.omega_hat, "omega");
    const Matrix sigma = invert_spd(p.g_jac_mean.transpose() * omega_inv * p.g_jac_mean,
                                    "information");
    const Matrix h = sigma * p.g_jac_mean.transpose() * omega_inv; // Ntheta x Ng

    BiasEstimate out;
    out.a_vec = Vector::Zero(model.n_g);
    for (int j = 0; j < model.n_g; ++j) {
        Matrix hess_mean = Matrix::Zero(model.n_theta, model.n_theta);
        for (int i = 0; i < data.n(); ++i)
            hess_mean += second_derivative(model, data.row(i), theta_hat, j);
        hess_mean /= n;
        out.a_vec(j) = 0.5 * (sigma * hess_mean).trace();
    }

    Vector g_h_g = Vector::Zero(model.n_g); // E[G_i H g_i]
    for (int i = 0; i < data.n(); ++i) {
        const Vector gi = p.gmat.row(i).transpose();
        g_h_g += jacobian(model, data.row(i), theta_hat) * (h * gi);
    }
    g_h_g /= n;

    out.bias = h * (g_h_g - out.a_vec) / n;
    out.theta_bc = theta_hat - out.bias;
    return out;
}

RobustBeta robust_covariance(const MomentModel& model, const Dataset& data,
                             const Vector& theta_hat, const Vector& lambda_hat) {
    model.validate();
    const int ng = model.n_g;
    const int ntheta = model.n_theta;
    const int dim = 1 + 2 * ng + ntheta;
    const auto n = static_cast<double>(data.n());

    const Matrix gmat = eval_moments(model, data, theta_hat);
    const Vector tau_i = (gmat * lambda_hat).array().exp().matrix();
    const double tau = tau_i.mean();
    const Matrix tilted_second = gmat.transpose() * (tau_i / tau / n).asDiagonal() * gmat;
    const Vector kappa = invert_spd(tilted_second, "tilted second-moment") *
                         (-mean_moments(gmat));

    RobustBeta out;
    out.beta_hat = Vector(dim);
    out.beta_hat(0) = tau;
    out.beta_hat.segment(1, ng) = kappa;
    out.beta_hat.segment(1 + ng, ng) = lambda_hat;
    out.beta_hat.tail(ntheta) = theta_hat;

    const Vector residual = phi_mean(model, data, tau, kappa, lambda_hat, theta_hat);
    out.residual_norm = residual.norm();
    if (!(out.residual_norm <= 1e-6))
        throw MomentResidualTooLarge(
            "stacked moment residual " + std::to_string(out.residual_norm) +
            " at beta_hat exceeds 1e-6; estimate and estimating equations disagree");

    // Gamma_hat by central differences of the averaged phi over beta
    out.gamma_hat = Matrix(dim, dim);
    Vector beta = out.beta_hat;
    for (int j = 0; j < dim; ++j) {
        double h = kStepBase * std::max(1.0, std::abs(beta(j)));
        volatile double bumped = beta(j) + h;
        h = bumped - beta(j);

        const double saved = beta(j);
        beta(j) = saved + h;
        const Vector up = phi_mean(model, data, beta(0), beta.segment(1, ng),
                                   beta.segment(1 + ng, ng), beta.tail(ntheta));
        beta(j) = saved - h;
        const Vector down = phi_mean(model, data, beta(0), beta.segment(1, ng),
                                     beta.segment(1 + ng, ng), beta.tail(ntheta));
        beta(j) = saved;
        out.gamma_hat.col(j) = (up - down) / (2.0 * h);
    }

    // Phi_hat = n^-1 sum phi phi'
    out.phi_hat = Matrix::Zero(dim, dim);
    Vector phi(dim);
    for (int i = 0; i < data.n(); ++i) {
        const Vector x = data.row(i);
        const Vector g = model.g_eval(x, theta_hat);
        const Matrix g_jac = jacobian(model, x, theta_hat);
        const double ti = std::exp(lambda_hat.dot(g));
        phi(0) = ti - tau;
        phi.segment(1, ng) = ti * g;
        phi.segment(1 + ng, ng) = (tau - ti) * g + ti * g * g.dot(kappa);
        phi.tail(ntheta) = g_jac.transpose() *
                           (ti * kappa + (ti * g.dot(kappa) - ti + tau) * lambda_hat);
        out.phi_hat += phi * phi.transpose();
    }
    out.phi_hat /= n;

    Eigen::ColPivHouseholderQR<Matrix> qr(out.gamma_hat);
    if (qr.rank() < dim ||
        std::abs(qr.matrixR()(0, 0)) >
            kConditionLimit * std::abs(qr.matrixR()(dim - 1, dim - 1)))
        throw SingularGamma("sandwich bread matrix is singular or ill-conditioned");
    const Matrix gamma_inv = qr.solve(Matrix::Identity(dim, dim));

    out.cov = gamma_inv * out.phi_hat * gamma_inv.transpose() / n;
    out.cov = 0.5 * (out.cov + out.cov.transpose());
    out.theta_block = out.cov.bottomRightCorner(ntheta, ntheta);
    return out;
}

IndependenceReport independence_diagnostic(const Matrix& gmat_a, const Matrix& gmat_b,
                                           const Vector& lambda) {
    if (gmat_a.rows() != gmat_b.rows())
        throw BadDesign("independence_diagnostic: row counts differ");
    if (lambda.size() != gmat_a.cols() + gmat_b.cols())
        throw BadDesign("independence_diagnostic: lambda must partition conformably");

    Matrix joint(gmat_a.rows(), gmat_a.cols() + gmat_b.cols());
    joint << gmat_a, gmat_b;
    const Matrix funcs_a = indicator_matrix(gmat_a);
    const Matrix funcs_b = indicator_matrix(gmat_b);

    IndependenceReport out;
    out.gap_et = factorization_gap(funcs_a, funcs_b,
                                   implied_weights(FamilySpec::et(), lambda, joint));
    try {
        out.gap_el = factorization_gap(funcs_a, funcs_b,
                                       implied_weights(FamilySpec::el(), lambda, joint));
    } catch (const DomainViolation&) {
        out.gap_el = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

} // namespace gelkit
