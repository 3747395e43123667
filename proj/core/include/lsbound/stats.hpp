#pragma once

namespace lsbound {

// Inverse of the standard normal CDF.
double normal_quantile(double p);

double normal_cdf(double x);

// Regularized incomplete beta I_x(a, b).
double incbeta(double a, double b, double x);

// Inverse of x -> I_x(a, b).
double incbeta_inv(double a, double b, double y);

// One-sided exact binomial (Clopper-Pearson) upper confidence limit for the
// success probability after observing k successes in n trials.
double clopper_pearson_upper(long k, long n, double confidence);

} // namespace lsbound
