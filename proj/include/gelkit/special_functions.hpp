#ifndef GELKIT_SPECIAL_FUNCTIONS_HPP
#define GELKIT_SPECIAL_FUNCTIONS_HPP

namespace gelkit {

/// Regularized upper incomplete gamma Q(a, x), a > 0, x >= 0. Series for the
/// lower tail when x < a + 1, Lentz continued fraction otherwise; absolute
/// error below 1e-10 over the chi-square range used here.
double regularized_gamma_q(double a, double x);

/// Upper-tail probability P[chi2_df > x]. Throws BadDf for df < 1 and
/// std::invalid_argument for x < 0.
double chi2_sf(double x, int df);

} // namespace gelkit

#endif
