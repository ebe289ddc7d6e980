#include "gelkit/estimator.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace gelkit {

namespace {

constexpr double kArmijoC = 1e-4;
constexpr double kArmijoShrink = 0.5;
const double kInf = std::numeric_limits<double>::infinity();
const double kNaN = std::numeric_limits<double>::quiet_NaN();

// ln L_hat(theta) = lambda'g_bar - ln(n^-1 sum exp(lambda'g_i)), computed
// with a log-sum-exp shift.
double etel_value(const Matrix& gmat, const Vector& lambda) {
    const Vector xi = gmat * lambda;
    const double shift = xi.maxCoeff();
    const double lse = shift + std::log((xi.array() - shift).exp().mean());
    const double mean_xi = xi.mean();
    return mean_xi - lse;
}

Vector etel_gradient_impl(const MomentModel& model, const Dataset& data, const Vector& theta,
                          const Matrix& gmat, const TiltSolution& tilt) {
    const int n = data.n();
    const int ng = model.n_g;
    const int ntheta = model.n_theta;
    const Vector& w = tilt.weights;
    const Vector& lambda = tilt.lambda_hat;

    const Vector gbar = mean_moments(gmat);
    const Matrix omega_tilde = gmat.transpose() * w.asDiagonal() * gmat;

    Matrix g_jac_mean = Matrix::Zero(ng, ntheta);  // G_bar
    Matrix g_jac_tilted = Matrix::Zero(ng, ntheta); // G_tilde = sum w_i G_i
    Matrix cross = Matrix::Zero(ng, ntheta);        // sum w_i g_i (lambda'G_i)
    for (int i = 0; i < n; ++i) {
        const Matrix gi_jac = jacobian(model, data.row(i), theta);
        g_jac_mean += gi_jac;
        g_jac_tilted += w(i) * gi_jac;
        cross += (w(i) * gmat.row(i).transpose()) * (lambda.transpose() * gi_jac);
    }
    g_jac_mean /= static_cast<double>(n);

    Eigen::LDLT<Matrix> ldlt(omega_tilde);
    const Matrix dlambda_dtheta = ldlt.solve(-(g_jac_tilted + cross));
    if (ldlt.info() != Eigen::Success || !dlambda_dtheta.allFinite())
        throw SingularHessian("tilted second-moment matrix is singular");

    return dlambda_dtheta.transpose() * gbar + (g_jac_mean - g_jac_tilted).transpose() * lambda;
}

// One profile evaluation: moment matrix, inner solution and the objective in
// maximization convention (ln L for ETEL, -profile for the GEL families).
struct InnerEval {
    bool feasible = false;
    double score = -kInf;
    Vector theta;
    Matrix gmat;
    TiltSolution tilt;
};

class ProfileEvaluator {
public:
    ProfileEvaluator(const FamilySpec& family, const MomentModel& model, const Dataset& data)
        : family_(family), model_(model), data_(data) {
        const Vector width = model.box_hi - model.box_lo;
        guard_lo_ = model.box_lo - width;
        guard_hi_ = model.box_hi + width;
    }

    bool is_etel() const { return family_.kind == FamilyKind::ETEL; }

    InnerEval eval(const Vector& theta) {
        InnerEval out;
        out.theta = theta;
        if ((theta.array() < guard_lo_.array()).any() ||
            (theta.array() > guard_hi_.array()).any())
            return out; // divergence guard
        try {
            out.gmat = eval_moments(model_, data_, theta);
        } catch (const NonFiniteMoment&) {
            return out;
        }
        TiltOptions topt;
        topt.lambda0 = warm_lambda_;
        try {
            out.tilt = solve_lambda(family_.inner(), out.gmat, topt);
        } catch (const SingularHessian&) {
            return out;
        }
        if (out.tilt.status != TiltStatus::Converged) return out;
        warm_lambda_ = out.tilt.lambda_hat;
        out.feasible = true;
        out.score = is_etel() ? etel_value(out.gmat, out.tilt.lambda_hat) : -out.tilt.inner_value;
        return out;
    }

    Vector gradient(const InnerEval& eval) const {
        // maximization convention; only used for ETEL
        return etel_gradient_impl(model_, data_, eval.theta, eval.gmat, eval.tilt);
    }

private:
    FamilySpec family_;
    const MomentModel& model_;
    const Dataset& data_;
    Vector guard_lo_, guard_hi_;
    Vector warm_lambda_;
};

struct StartOutcome {
    bool converged = false;
    bool any_feasible = false;
    InnerEval best;
};

// Quasi-Newton ascent on the ETEL log likelihood with the exact gradient.
StartOutcome run_bfgs(ProfileEvaluator& prof, const Vector& start, const EstimateOptions& opt) {
    StartOutcome out;
    InnerEval cur = prof.eval(start);
    if (!cur.feasible) return out;
    out.any_feasible = true;

    const int dim = static_cast<int>(start.size());
    Vector grad;
    try {
        grad = prof.gradient(cur);
    } catch (const SingularHessian&) {
        out.best = std::move(cur);
        return out;
    }

    Matrix hinv = Matrix::Identity(dim, dim);
    for (int iter = 0; iter < opt.max_iter; ++iter) {
        if (grad.lpNorm<Eigen::Infinity>() <= opt.tol) {
            out.converged = true;
            break;
        }
        Vector direction = hinv * grad;
        double slope = direction.dot(grad);
        if (!(slope > 0.0) || !direction.allFinite()) {
            hinv.setIdentity();
            direction = grad;
            slope = grad.squaredNorm();
        }

        double alpha = 1.0;
        std::optional<InnerEval> next;
        while (alpha >= 1e-14) {
            InnerEval trial = prof.eval(cur.theta + alpha * direction);
            if (trial.feasible && trial.score >= cur.score + kArmijoC * alpha * slope) {
                next = std::move(trial);
                break;
            }
            alpha *= kArmijoShrink;
        }
        if (!next) break; // stagnated; convergence decided by the gradient norm

        Vector new_grad;
        try {
            new_grad = prof.gradient(*next);
        } catch (const SingularHessian&) {
            break;
        }
        const Vector step = next->theta - cur.theta;
        const Vector grad_change = grad - new_grad; // change of -grad(-f) in min convention
        const double curvature = step.dot(grad_change);
        if (curvature > 1e-12 * step.norm() * grad_change.norm()) {
            const Vector hy = hinv * grad_change;
            const double shs = grad_change.dot(hy);
            hinv += ((curvature + shs) / (curvature * curvature)) * (step * step.transpose()) -
                    (hy * step.transpose() + step * hy.transpose()) / curvature;
        }
        cur = std::move(*next);
        grad = std::move(new_grad);
    }
    if (!out.converged && grad.size() > 0 && grad.lpNorm<Eigen::Infinity>() <= opt.tol)
        out.converged = true;
    out.best = std::move(cur);
    return out;
}

// Derivative-free simplex descent on the profile objective (scores are in
// maximization convention, so the simplex maximizes).
StartOutcome run_nelder_mead(ProfileEvaluator& prof, const Vector& start,
                             const Vector& init_step, const EstimateOptions& opt) {
    StartOutcome out;
    const int dim = static_cast<int>(start.size());

    std::vector<InnerEval> simplex;
    simplex.reserve(dim + 1);
    simplex.push_back(prof.eval(start));
    for (int j = 0; j < dim; ++j) {
        Vector v = start;
        v(j) += init_step(j);
        simplex.push_back(prof.eval(v));
    }
    auto by_score = [](const InnerEval& a, const InnerEval& b) { return a.score > b.score; };
    std::sort(simplex.begin(), simplex.end(), by_score);
    for (const auto& vertex : simplex) out.any_feasible |= vertex.feasible;
    if (!simplex.front().feasible) return out;

    for (int iter = 0; iter < opt.max_iter; ++iter) {
        double diameter = 0.0;
        for (int j = 1; j <= dim; ++j)
            diameter = std::max(
                diameter, (simplex[j].theta - simplex[0].theta).lpNorm<Eigen::Infinity>());
        if (diameter <= opt.tol && simplex.front().feasible) {
            out.converged = true;
            break;
        }

        Vector centroid = Vector::Zero(dim);
        for (int j = 0; j < dim; ++j) centroid += simplex[j].theta;
        centroid /= static_cast<double>(dim);

        const InnerEval& worst = simplex[dim];
        const double best_score = simplex[0].score;
        const double second_worst = simplex[dim - 1].score;

        InnerEval reflected = prof.eval(centroid + (centroid - worst.theta));
        out.any_feasible |= reflected.feasible;
        if (reflected.score > best_score) {
            InnerEval expanded = prof.eval(centroid + 2.0 * (centroid - worst.theta));
            out.any_feasible |= expanded.feasible;
            simplex[dim] = (expanded.score > reflected.score) ? std::move(expanded)
                                                              : std::move(reflected);
        } else if (reflected.score > second_worst) {
            simplex[dim] = std::move(reflected);
        } else {
            const bool outside = reflected.score > worst.score;
            const Vector anchor = outside ? reflected.theta : worst.theta;
            InnerEval contracted = prof.eval(centroid + 0.5 * (anchor - centroid));
            out.any_feasible |= contracted.feasible;
            if (contracted.score > std::max(reflected.score, worst.score)) {
                simplex[dim] = std::move(contracted);
            } else {
                for (int j = 1; j <= dim; ++j) {
                    simplex[j] =
                        prof.eval(simplex[0].theta + 0.5 * (simplex[j].theta - simplex[0].theta));
                    out.any_feasible |= simplex[j].feasible;
                }
            }
        }
        std::sort(simplex.begin(), simplex.end(), by_score);
    }
    out.best = std::move(simplex.front());
    return out;
}

bool lexicographic_less(const Vector& a, const Vector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) < b(i)) return true;
        if (a(i) > b(i)) return false;
    }
    return false;
}

// Multistart tie-breaking: better objective, then smaller ||lambda||, then
// lexicographically smaller theta.
bool better_outcome(const StartOutcome& a, const StartOutcome& b) {
    if (a.best.score != b.best.score) return a.best.score > b.best.score;
    const double la = a.best.tilt.lambda_hat.norm();
    const double lb = b.best.tilt.lambda_hat.norm();
    if (la != lb) return la < lb;
    return lexicographic_less(a.best.theta, b.best.theta);
}

} // namespace

const char* to_string(EstimateStatus status) {
    switch (status) {
    case EstimateStatus::Converged: return "Converged";
    case EstimateStatus::NoConvexHull: return "NoConvexHull";
    case EstimateStatus::MaxIter: return "MaxIter";
    }
    return "?";
}

double etel_objective(const MomentModel& model, const Dataset& data, const Vector& theta) {
    const Matrix gmat = eval_moments(model, data, theta);
    const TiltSolution tilt = solve_lambda(FamilySpec::et(), gmat);
    if (tilt.status != TiltStatus::Converged)
        throw ConvexHullError("inner exponential-tilting solve failed at theta (status " +
                              std::string(to_string(tilt.status)) + ")");
    return etel_value(gmat, tilt.lambda_hat);
}

Vector etel_gradient(const MomentModel& model, const Dataset& data, const Vector& theta) {
    const Matrix gmat = eval_moments(model, data, theta);
    const TiltSolution tilt = solve_lambda(FamilySpec::et(), gmat);
    if (tilt.status != TiltStatus::Converged)
        throw ConvexHullError("inner exponential-tilting solve failed at theta");
    return etel_gradient_impl(model, data, theta, gmat, tilt);
}

double gel_profile(const FamilySpec& family, const MomentModel& model, const Dataset& data,
                   const Vector& theta) {
    const Matrix gmat = eval_moments(model, data, theta);
    const TiltSolution tilt = solve_lambda(family.inner(), gmat);
    if (tilt.status != TiltStatus::Converged)
        throw ConvexHullError("inner solve failed at theta (status " +
                              std::string(to_string(tilt.status)) + ")");
    return tilt.inner_value;
}

EstimateResult estimate(const FamilySpec& family, const MomentModel& model, const Dataset& data,
                        const EstimateOptions& options) {
    model.validate();
    if (model.box_lo.size() != model.n_theta || model.box_hi.size() != model.n_theta)
        throw BadDesign("estimate: model search box is not set");
    if (options.starts < 1) throw BadDesign("estimate: needs at least one start");

    EstimateResult result;
    result.family = family;
    result.starts_tried = options.starts;

    bool any_feasible = false;
    std::optional<StartOutcome> best_converged;
    std::optional<StartOutcome> best_feasible;
    const Vector simplex_step = 0.05 * (model.box_hi - model.box_lo);
    for (int s = 0; s < options.starts; ++s) {
        const double frac = (s + 0.5) / options.starts;
        const Vector start = model.box_lo + frac * (model.box_hi - model.box_lo);

        ProfileEvaluator prof(family, model, data);
        StartOutcome outcome = prof.is_etel()
                                   ? run_bfgs(prof, start, options)
                                   : run_nelder_mead(prof, start, simplex_step, options);
        any_feasible |= outcome.any_feasible;
        if (!outcome.best.feasible) continue;
        if (!best_feasible || better_outcome(outcome, *best_feasible))
            best_feasible = outcome;
        if (outcome.converged && (!best_converged || better_outcome(outcome, *best_converged)))
            best_converged = std::move(outcome);
    }

    if (!any_feasible) {
        result.status = EstimateStatus::NoConvexHull;
        result.theta_hat = Vector::Constant(model.n_theta, kNaN);
        return result;
    }

    const StartOutcome& winner = best_converged ? *best_converged : *best_feasible;
    result.status = best_converged ? EstimateStatus::Converged : EstimateStatus::MaxIter;
    result.theta_hat = winner.best.theta;
    result.lambda_hat = winner.best.tilt.lambda_hat;
    result.weights = winner.best.tilt.weights;
    result.log_like = (family.kind == FamilyKind::ETEL)
                          ? winner.best.score
                          : winner.best.tilt.inner_value;
    return result;
}

} // namespace gelkit
