#pragma once

namespace rpys::dist {

/// Regularized incomplete beta I_x(a, b), evaluated by continued fraction.
double incomplete_beta(double a, double b, double x);

double normal_cdf(double z);

/// P(F <= f) and P(F > f) for the F distribution with (d1, d2) degrees of freedom.
double f_cdf(double f, double d1, double d2);
double f_sf(double f, double d1, double d2);

/// CDF of the range of k independent standard normals.
double normal_range_cdf(double w, int k);

/// CDF of the studentized range statistic with k groups and df error degrees
/// of freedom. Computed by Gauss-Legendre quadrature over the normal range
/// (inner) and the scaled chi distribution of the error estimate (outer).
double studentized_range_cdf(double q, int k, double df);

/// Upper quantile: the q with studentized_range_cdf(q, k, df) == 1 - alpha.
double studentized_range_quantile(double alpha, int k, double df);

}  // namespace rpys::dist
