#pragma once

namespace ots {

double normal_cdf(double x);
/// Standard normal quantile z_p for p in (0, 1).
double normal_quantile(double p);
/// Two-sided p-value 2(1 - Phi(|z|)).
double two_sided_p_value(double z);

double chi_squared_cdf(double x, double df);
double chi_squared_quantile(double p, double df);

}  // namespace ots
