#include "gelkit/moment_model.hpp"

#include <cmath>
#include <limits>

namespace gelkit {

namespace {

const double kStepBase = std::cbrt(std::numeric_limits<double>::epsilon());

double fd_step(double coord) { return kStepBase * std::max(1.0, std::abs(coord)); }

} // namespace

void MomentModel::validate() const {
    if (n_theta < 1 || n_g < n_theta)
        throw BadDesign("moment model requires Ng >= Ntheta >= 1");
    if (n_x < 1) throw BadDesign("moment model requires Nx >= 1");
    if (!g_eval) throw BadDesign("moment model has no g evaluator");
}

void set_default_box(MomentModel& model, const Vector& center) {
    model.box_lo = center.array() - 5.0;
    model.box_hi = center.array() + 5.0;
}

Matrix eval_moments(const MomentModel& model, const Dataset& data, const Vector& theta) {
    model.validate();
    if (theta.size() != model.n_theta)
        throw BadDesign("theta dimension mismatch");
    if (data.n_x() != model.n_x)
        throw BadDesign("dataset has " + std::to_string(data.n_x()) +
                        " columns, model expects " + std::to_string(model.n_x));
    if (!theta.allFinite()) throw NonFiniteMoment("theta is not finite");

    Matrix gmat(data.n(), model.n_g);
    for (int i = 0; i < data.n(); ++i) {
        const Vector gi = model.g_eval(data.row(i), theta);
        if (gi.size() != model.n_g)
            throw BadDesign("g evaluator returned wrong dimension");
        if (!gi.allFinite())
            throw NonFiniteMoment("moment row " + std::to_string(i) + " is not finite");
        gmat.row(i) = gi.transpose();
    }
    return gmat;
}

Vector mean_moments(const Matrix& gmat) { return gmat.colwise().mean().transpose(); }

Matrix numeric_jacobian(const MomentModel& model, const Vector& x, const Vector& theta) {
    Matrix jac(model.n_g, model.n_theta);
    Vector shifted = theta;
    for (int j = 0; j < model.n_theta; ++j) {
        double h = fd_step(theta(j));
        // make the step exactly representable around theta_j
        volatile double bumped = theta(j) + h;
        h = bumped - theta(j);

        shifted(j) = theta(j) + h;
        const Vector up = model.g_eval(x, shifted);
        shifted(j) = theta(j) - h;
        const Vector down = model.g_eval(x, shifted);
        shifted(j) = theta(j);

        if (!up.allFinite() || !down.allFinite())
            throw NonFiniteMoment("moment evaluation not finite in difference stencil");
        jac.col(j) = (up - down) / (2.0 * h);
    }
    return jac;
}

Matrix jacobian(const MomentModel& model, const Vector& x, const Vector& theta) {
    if (model.jac_eval) return model.jac_eval(x, theta);
    return numeric_jacobian(model, x, theta);
}

Matrix second_derivative(const MomentModel& model, const Vector& x, const Vector& theta, int j) {
    if (j < 0 || j >= model.n_g) throw BadDesign("second_derivative: component out of range");
    if (model.hess_eval) return model.hess_eval(x, theta, j);

    // central differences of the Jacobian row j, then symmetrize
    Matrix hess(model.n_theta, model.n_theta);
    Vector shifted = theta;
    for (int l = 0; l < model.n_theta; ++l) {
        double h = fd_step(theta(l));
        volatile double bumped = theta(l) + h;
        h = bumped - theta(l);

        shifted(l) = theta(l) + h;
        const Matrix up = jacobian(model, x, shifted);
        shifted(l) = theta(l) - h;
        const Matrix down = jacobian(model, x, shifted);
        shifted(l) = theta(l);

        hess.col(l) = (up.row(j) - down.row(j)).transpose() / (2.0 * h);
    }
    return 0.5 * (hess + hess.transpose());
}

} // namespace gelkit
