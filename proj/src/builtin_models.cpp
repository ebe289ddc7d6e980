#include "gelkit/builtin_models.hpp"

#include <cmath>

namespace gelkit {

namespace {

// r(x, theta) = exp(-0.72 - (x1 + x2) theta + 3 x2) - 1 and its theta
// derivatives; the moment vector is r times (1, x2, x3 - 1, ..., xK - 1).
double hh_exponent(const Vector& x, double theta) {
    return -0.72 - (x(0) + x(1)) * theta + 3.0 * x(1);
}

Vector hh_multipliers(const Vector& x, int K) {
    Vector m(K);
    m(0) = 1.0;
    m(1) = x(1);
    for (int k = 2; k < K; ++k) m(k) = x(k) - 1.0;
    return m;
}

} // namespace

BuiltinDesign builtin_hall_horowitz(int K) {
    if (K < 2) throw BadDesign("hall_horowitz requires K >= 2");

    MomentModel model;
    model.n_theta = 1;
    model.n_g = K;
    model.n_x = K;
    model.g_eval = [K](const Vector& x, const Vector& theta) -> Vector {
        const double r = std::exp(hh_exponent(x, theta(0))) - 1.0;
        return r * hh_multipliers(x, K);
    };
    model.jac_eval = [K](const Vector& x, const Vector& theta) -> Matrix {
        const double dr = -(x(0) + x(1)) * std::exp(hh_exponent(x, theta(0)));
        return dr * hh_multipliers(x, K);
    };
    model.hess_eval = [K](const Vector& x, const Vector& theta, int j) -> Matrix {
        const double s = x(0) + x(1);
        const double d2r = s * s * std::exp(hh_exponent(x, theta(0)));
        Matrix hess(1, 1);
        hess(0, 0) = d2r * hh_multipliers(x, K)(j);
        return hess;
    };
    model.box_lo = Vector::Constant(1, 0.0);
    model.box_hi = Vector::Constant(1, 6.0);

    BuiltinDesign design;
    design.kind = DesignKind::HallHorowitz;
    design.param = K;
    design.model = std::move(model);
    design.theta_star = Vector::Constant(1, 3.0);
    design.id = "hall_horowitz:" + std::to_string(K);
    return design;
}

BuiltinDesign builtin_mean_known_variance(double sigma) {
    if (!(sigma > 0.0)) throw BadDesign("mean_known_variance requires sigma > 0");

    MomentModel model;
    model.n_theta = 1;
    model.n_g = 2;
    model.n_x = 1;
    model.g_eval = [](const Vector& x, const Vector& theta) -> Vector {
        const double e = x(0) - theta(0);
        Vector g(2);
        g << e, e * e - 1.0;
        return g;
    };
    model.jac_eval = [](const Vector& x, const Vector& theta) -> Matrix {
        Matrix jac(2, 1);
        jac << -1.0, -2.0 * (x(0) - theta(0));
        return jac;
    };
    model.hess_eval = [](const Vector&, const Vector&, int j) -> Matrix {
        Matrix hess(1, 1);
        hess(0, 0) = (j == 1) ? 2.0 : 0.0;
        return hess;
    };
    model.box_lo = Vector::Constant(1, -2.0);
    model.box_hi = Vector::Constant(1, 2.0);

    BuiltinDesign design;
    design.kind = DesignKind::MeanKnownVariance;
    design.param = sigma;
    design.model = std::move(model);
    design.theta_star = Vector::Zero(1);

    char buf[48];
    std::snprintf(buf, sizeof(buf), "mean_known_variance:%g", sigma);
    design.id = buf;
    return design;
}

BuiltinDesign parse_design(const std::string& id) {
    const auto colon = id.find(':');
    const std::string name = id.substr(0, colon);
    const std::string arg = (colon == std::string::npos) ? "" : id.substr(colon + 1);
    try {
        if (name == "hall_horowitz") {
            if (arg.empty()) throw BadDesign("hall_horowitz needs ':K'");
            const std::size_t consumed_check = arg.find_first_not_of("0123456789");
            if (consumed_check != std::string::npos)
                throw BadDesign("hall_horowitz K must be an integer");
            return builtin_hall_horowitz(std::stoi(arg));
        }
        if (name == "mean_known_variance") {
            if (arg.empty()) throw BadDesign("mean_known_variance needs ':sigma'");
            std::size_t consumed = 0;
            const double sigma = std::stod(arg, &consumed);
            if (consumed != arg.size()) throw BadDesign("bad sigma '" + arg + "'");
            return builtin_mean_known_variance(sigma);
        }
    } catch (const std::invalid_argument&) {
        throw BadDesign("bad parameter in model id '" + id + "'");
    } catch (const std::out_of_range&) {
        throw BadDesign("parameter out of range in model id '" + id + "'");
    }
    throw BadDesign("unknown model id '" + id +
                    "' (expected hall_horowitz:K or mean_known_variance:sigma)");
}

} // namespace gelkit
