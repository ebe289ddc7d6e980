#include "gelkit/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gelkit/types.hpp"

namespace gelkit {

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-16;

// Lower regularized incomplete gamma P(a, x) by power series, for x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int k = 0; k < kMaxIter; ++k) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw Error("incomplete gamma series failed to converge");
}

// Upper regularized incomplete gamma Q(a, x) by modified Lentz continued
// fraction, for x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k <= kMaxIter; ++k) {
        const double an = -k * (k - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw Error("incomplete gamma continued fraction failed to converge");
}

} // namespace

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("regularized_gamma_q: a must be positive");
    if (x < 0.0) throw std::invalid_argument("regularized_gamma_q: x must be nonnegative");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi2_sf(double x, int df) {
    if (df < 1) throw BadDf("chi2_sf: df must be a positive integer");
    if (x < 0.0) throw std::invalid_argument("chi2_sf: x must be nonnegative");
    return regularized_gamma_q(0.5 * df, 0.5 * x);
}

} // namespace gelkit
