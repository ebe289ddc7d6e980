// Test-only oracles, kept independent of the library solvers they check:
// a dense grid search for the inner dual, finite differences for gradients,
// adaptive Simpson quadrature for chi-square tails, and small sample
// statistics helpers.
#ifndef GELKIT_TESTS_ORACLES_HPP
#define GELKIT_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "gelkit/family.hpp"
#include "gelkit/types.hpp"

namespace oracles {

// Dual objective n^-1 sum rho(lambda' g_i); -inf outside the family domain
// (EL keeps the same 1/n margin as the solver so both optimize the same
// problem).
inline double dual_value(const gelkit::FamilySpec& family, const gelkit::Matrix& gmat,
                         const gelkit::Vector& lambda) {
    const gelkit::FamilySpec resolved = family.inner();
    const gelkit::Vector xi = gmat * lambda;
    const double inv_n = 1.0 / static_cast<double>(gmat.rows());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < xi.size(); ++i) {
        if (resolved.kind == gelkit::FamilyKind::EL && !(1.0 - xi(i) >= inv_n))
            return -std::numeric_limits<double>::infinity();
        if (!gelkit::in_domain(resolved, xi(i)))
            return -std::numeric_limits<double>::infinity();
        const double term = gelkit::rho(resolved, xi(i));
        if (!std::isfinite(term)) return -std::numeric_limits<double>::infinity();
        acc += term;
    }
    return acc * inv_n;
}

// Dense grid search over [-radius, radius]^Ng, refined once around the coarse
// argmax. Ng <= 2 only.
inline gelkit::Vector grid_search_lambda(const gelkit::FamilySpec& family,
                                         const gelkit::Matrix& gmat, double radius = 2.0) {
    const int ng = static_cast<int>(gmat.cols());
    gelkit::Vector best = gelkit::Vector::Zero(ng);
    double best_value = dual_value(family, gmat, best);

    const auto sweep = [&](const gelkit::Vector& center, double half_width, double step) {
        const int m = static_cast<int>(std::round(2.0 * half_width / step));
        gelkit::Vector lambda(ng);
        if (ng == 1) {
            for (int i = 0; i <= m; ++i) {
                lambda(0) = center(0) - half_width + i * step;
                const double value = dual_value(family, gmat, lambda);
                if (value > best_value) {
                    best_value = value;
                    best = lambda;
                }
            }
        } else {
            for (int i = 0; i <= m; ++i) {
                lambda(0) = center(0) - half_width + i * step;
                for (int j = 0; j <= m; ++j) {
                    lambda(1) = center(1) - half_width + j * step;
                    const double value = dual_value(family, gmat, lambda);
                    if (value > best_value) {
                        best_value = value;
                        best = lambda;
                    }
                }
            }
        }
    };

    const double coarse = (ng == 1) ? 1e-3 : 1e-2;
    sweep(gelkit::Vector::Zero(ng), radius, coarse);
    sweep(best, 2.0 * coarse, coarse / 50.0); // refine once
    return best;
}

inline double central_difference(const std::function<double(double)>& f, double x,
                                 double step = 1e-5) {
    return (f(x + step) - f(x - step)) / (2.0 * step);
}

// chi-square upper tail by adaptive Simpson on the density over [x, cutoff].
inline double chi2_sf_quadrature(double x, int df) {
    const double a = 0.5 * df;
    const auto density = [&](double t) {
        return std::exp((a - 1.0) * std::log(t) - 0.5 * t - a * std::log(2.0) - std::lgamma(a));
    };
    std::function<double(double, double, double, double, double, double, int)> simpson =
        [&](double lo, double hi, double flo, double fhi, double fmid, double whole,
            int depth) -> double {
        const double mid = 0.5 * (lo + hi);
        const double lmid = 0.5 * (lo + mid), rmid = 0.5 * (mid + hi);
        const double flmid = density(lmid), frmid = density(rmid);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flmid + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frmid + fhi);
        if (depth <= 0 || std::abs(left + right - whole) < 1e-14)
            return left + right + (left + right - whole) / 15.0;
        return simpson(lo, mid, flo, fmid, flmid, left, depth - 1) +
               simpson(mid, hi, fmid, fhi, frmid, right, depth - 1);
    };
    const double cutoff = x + 100.0 + 12.0 * df; // tail mass beyond is < 1e-18
    const double fx = density(x), fc = density(cutoff), fm = density(0.5 * (x + cutoff));
    const double whole = (cutoff - x) / 6.0 * (fx + 4.0 * fm + fc);
    return simpson(x, cutoff, fx, fc, fm, whole, 40);
}

inline double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

inline double mean(const std::vector<double>& values) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc / static_cast<double>(values.size());
}

inline double sample_std(const std::vector<double>& values) {
    const double m = mean(values);
    double acc = 0.0;
    for (double v : values) acc += (v - m) * (v - m);
    return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

// two-sample Kolmogorov-Smirnov distance
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double gap = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        gap = std::max(gap, std::abs(static_cast<double>(i) / a.size() -
                                     static_cast<double>(j) / b.size()));
    }
    return gap;
}

// deterministic uniform numbers for test instance construction (distinct from
// the library generator on purpose)
class TestRng {
public:
    explicit TestRng(std::uint64_t seed) : state_(seed * 2654435761u + 1) {}
    double uniform() { // in (0, 1)
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        const std::uint64_t word = state_ >> 11;
        return (static_cast<double>(word) + 0.5) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal() {
        return std::sqrt(-2.0 * std::log(uniform())) * std::cos(2.0 * M_PI * uniform());
    }

private:
    std::uint64_t state_;
};

} // namespace oracles

#endif
