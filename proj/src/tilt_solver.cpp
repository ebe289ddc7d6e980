#include "gelkit/tilt_solver.hpp"

#include <cmath>
#include <limits>

namespace gelkit {

namespace {

constexpr double kArmijoC = 1e-4;
constexpr double kArmijoShrink = 0.5;
constexpr double kMinStep = 1e-14;
constexpr double kLambdaDivergence = 1e6;

// The dual is solved as minimization of F(lambda) = n^-1 sum f(xi_i) with f
// convex: EL f = -ln(1 - xi), ET f = exp(xi), ECR f = (1+g xi)^{(g+1)/g}/(g+1).
// f' is positive on the domain for EL/ET/ECR(gamma<0), so the stationarity
// residual grad F = n^-1 sum f'(xi_i) g_i matches the tau residual up to sign.

struct DualFns {
    FamilyKind kind;
    double gamma;
    double inv_n;

    double value(double xi) const {
        switch (kind) {
        case FamilyKind::EL:
            return -std::log1p(-xi);
        case FamilyKind::ET:
            return std::exp(xi);
        default: { // ECR
            const double base = 1.0 + gamma * xi;
            return std::pow(base, (gamma + 1.0) / gamma) / (gamma + 1.0);
        }
        }
    }
    double deriv(double xi) const {
        switch (kind) {
        case FamilyKind::EL:
            return 1.0 / (1.0 - xi);
        case FamilyKind::ET:
            return std::exp(xi);
        default:
            return std::pow(1.0 + gamma * xi, 1.0 / gamma);
        }
    }
    double deriv2(double xi) const {
        switch (kind) {
        case FamilyKind::EL: {
            const double d = 1.0 - xi;
            return 1.0 / (d * d);
        }
        case FamilyKind::ET:
            return std::exp(xi);
        default:
            return std::pow(1.0 + gamma * xi, 1.0 / gamma - 1.0);
        }
    }
    // Line-search feasibility: EL keeps the Owen margin 1 - xi >= 1/n so that
    // no weight exceeds 1; ECR with gamma < 0 stays inside 1 + gamma xi > 0.
    bool feasible(double xi) const {
        switch (kind) {
        case FamilyKind::EL:
            return 1.0 - xi >= inv_n;
        case FamilyKind::ET:
            return true;
        default:
            if (gamma < 0.0) return 1.0 + gamma * xi > 0.0;
            return true;
        }
    }
};

bool all_feasible(const DualFns& fns, const Vector& xi) {
    for (Eigen::Index i = 0; i < xi.size(); ++i)
        if (!fns.feasible(xi(i))) return false;
    return true;
}

double mean_value(const DualFns& fns, const Vector& xi) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < xi.size(); ++i) acc += fns.value(xi(i));
    return acc / static_cast<double>(xi.size());
}

// Strict separation certificate: the ray along -lambda witnesses that the
// origin lies outside the convex hull of the rows of gmat.
bool separated_along(const Matrix& gmat, const Vector& lambda, double scale) {
    const double norm = lambda.norm();
    if (norm < 1e-8) return false;
    const Vector direction = -lambda / norm;
    return (gmat * direction).minCoeff() >= -1e-9 * scale;
}

TiltSolution finalize(const FamilySpec& family, const Matrix& gmat, Vector lambda,
                      double inner_value, int iterations, TiltStatus status) {
    TiltSolution sol;
    sol.lambda_hat = std::move(lambda);
    sol.inner_value = inner_value;
    sol.iterations = iterations;
    sol.status = status;
    if (status == TiltStatus::Converged)
        sol.weights = implied_weights(family, sol.lambda_hat, gmat);
    return sol;
}

TiltSolution solve_cu(const Matrix& gmat) {
    const auto n = static_cast<double>(gmat.rows());
    const Vector gbar = gmat.colwise().mean().transpose();
    Matrix second = gmat.transpose() * gmat / n;

    Eigen::LDLT<Matrix> ldlt(second);
    Vector lambda = ldlt.solve(-gbar);
    if (ldlt.info() != Eigen::Success || !lambda.allFinite()) {
        const double ridge = 1e-10 * second.trace();
        second.diagonal().array() += ridge;
        ldlt.compute(second);
        lambda = ldlt.solve(-gbar);
        if (ldlt.info() != Eigen::Success || !lambda.allFinite())
            throw SingularHessian("CU moment second-moment matrix is singular");
    }

    const FamilySpec cu = FamilySpec::cu();
    const Vector xi = gmat * lambda;
    double value = 0.0;
    for (Eigen::Index i = 0; i < xi.size(); ++i) value += rho(cu, xi(i));
    return finalize(cu, gmat, std::move(lambda), value / n, 0, TiltStatus::Converged);
}

} // namespace

const char* to_string(TiltStatus status) {
    switch (status) {
    case TiltStatus::Converged: return "Converged";
    case TiltStatus::ConvexHullFailure: return "ConvexHullFailure";
    case TiltStatus::DomainFailure: return "DomainFailure";
    case TiltStatus::MaxIter: return "MaxIter";
    }
    return "?";
}

TiltSolution solve_lambda(const FamilySpec& family, const Matrix& gmat,
                          const TiltOptions& options) {
    if (gmat.rows() < 1) throw BadDesign("solve_lambda: empty moment matrix");
    if (!gmat.allFinite()) throw NonFiniteMoment("solve_lambda: moment matrix not finite");

    const FamilySpec resolved = family.inner();
    if (resolved.kind == FamilyKind::CU) return solve_cu(gmat);

    const auto n = static_cast<double>(gmat.rows());
    const auto ng = static_cast<int>(gmat.cols());
    const double gmax = gmat.rowwise().norm().maxCoeff();
    const double scale = 1.0 + gmax;
    const double stat_tol = 1e-10 * scale;
    const double weighted_tol = 1e-8 * scale;

    const DualFns fns{resolved.kind, resolved.gamma, 1.0 / n};

    Vector lambda = Vector::Zero(ng);
    if (options.lambda0.size() == ng) {
        const Vector xi0 = gmat * options.lambda0;
        if (all_feasible(fns, xi0) && std::isfinite(mean_value(fns, xi0)))
            lambda = options.lambda0;
    }

    Vector xi = gmat * lambda;
    double objective = mean_value(fns, xi);
    if (!std::isfinite(objective)) { // degenerate warm start fallback
        lambda.setZero();
        xi.setZero();
        objective = mean_value(fns, xi);
    }

    Vector deriv1(gmat.rows()), deriv2(gmat.rows());
    int iter = 0;
    bool stagnated = false;
    for (; iter < options.max_iter; ++iter) {
        for (Eigen::Index i = 0; i < gmat.rows(); ++i) {
            deriv1(i) = fns.deriv(xi(i));
            deriv2(i) = fns.deriv2(xi(i));
        }
        const Vector grad = gmat.transpose() * deriv1 / n;
        const double tilt_sum = deriv1.sum();
        const double weighted_resid =
            (tilt_sum != 0.0) ? (gmat.transpose() * deriv1 / tilt_sum).lpNorm<Eigen::Infinity>()
                              : std::numeric_limits<double>::infinity();

        if (grad.lpNorm<Eigen::Infinity>() <= stat_tol && weighted_resid <= weighted_tol)
            return finalize(family, gmat, std::move(lambda), -objective, iter,
                            TiltStatus::Converged);
        // A drifting multiplier witnesses an unbounded dual long before the
        // hard divergence threshold; an interior optimum can never satisfy
        // the separation certificate, so this exit is safe at any iterate.
        if (lambda.norm() > kLambdaDivergence ||
            (lambda.norm() > 20.0 && separated_along(gmat, lambda, scale)))
            return finalize(family, gmat, std::move(lambda), -objective, iter,
                            TiltStatus::ConvexHullFailure);

        Matrix hessian = gmat.transpose() * deriv2.asDiagonal() * gmat / n;
        Eigen::LDLT<Matrix> ldlt(hessian);
        Vector step = ldlt.solve(-grad);
        if (ldlt.info() != Eigen::Success || !step.allFinite()) {
            const double ridge = 1e-10 * hessian.trace();
            if (!(ridge > 0.0)) throw SingularHessian("inner Newton system is singular");
            hessian.diagonal().array() += ridge;
            ldlt.compute(hessian);
            step = ldlt.solve(-grad);
            if (ldlt.info() != Eigen::Success || !step.allFinite())
                throw SingularHessian("inner Newton system is singular");
        }

        const double slope = grad.dot(step);
        double alpha = 1.0;
        bool accepted = false;
        while (alpha >= kMinStep) {
            const Vector trial = lambda + alpha * step;
            const Vector trial_xi = gmat * trial;
            if (all_feasible(fns, trial_xi)) {
                const double trial_objective = mean_value(fns, trial_xi);
                if (std::isfinite(trial_objective) &&
                    trial_objective <= objective + kArmijoC * alpha * slope) {
                    lambda = trial;
                    xi = trial_xi;
                    objective = trial_objective;
                    accepted = true;
                    break;
                }
            }
            alpha *= kArmijoShrink;
        }
        if (!accepted) {
            stagnated = true;
            ++iter;
            break;
        }
    }

    // No convergence: classify. A diverged multiplier or a separating
    // direction means the origin is outside the convex hull of {g_i}.
    if (lambda.norm() > kLambdaDivergence || separated_along(gmat, lambda, scale))
        return finalize(family, gmat, std::move(lambda), -objective, iter,
                        TiltStatus::ConvexHullFailure);
    return finalize(family, gmat, std::move(lambda), -objective, iter,
                    stagnated ? TiltStatus::DomainFailure : TiltStatus::MaxIter);
}

Vector implied_weights(const FamilySpec& family, const Vector& lambda, const Matrix& gmat) {
    if (lambda.size() != gmat.cols()) throw BadDesign("implied_weights: lambda dimension mismatch");
    const FamilySpec resolved = family.inner();
    const Vector xi = gmat * lambda;

    Vector weights(gmat.rows());
    if (resolved.kind == FamilyKind::ET) {
        // shift-invariant form of exp(xi_i)/sum exp(xi_j)
        const double shift = xi.maxCoeff();
        weights = (xi.array() - shift).exp();
    } else {
        for (Eigen::Index i = 0; i < xi.size(); ++i) {
            if (!in_domain(resolved, xi(i)))
                throw DomainViolation("implied_weights: observation " + std::to_string(i) +
                                      " outside the tilting domain");
            weights(i) = tilt(resolved, xi(i));
        }
    }
    const double total = weights.sum();
    if (total == 0.0 || !std::isfinite(total))
        throw DomainViolation("implied_weights: degenerate normalization");
    return weights / total;
}

} // namespace gelkit
