#include "ots/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "ots/errors.hpp"

namespace ots {

double normal_cdf(double x) {
    if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
    return boost::math::cdf(boost::math::normal_distribution<double>{}, x);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ValidationError("normal quantile needs p in (0, 1)");
    return boost::math::quantile(boost::math::normal_distribution<double>{}, p);
}

double two_sided_p_value(double z) {
    if (std::isnan(z)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(z)) return 0.0;
    // erfc keeps precision in the tail where 1 - Phi(|z|) would cancel.
    return std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
}

double chi_squared_cdf(double x, double df) {
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return boost::math::cdf(boost::math::chi_squared_distribution<double>(df), x);
}

double chi_squared_quantile(double p, double df) {
    if (!(p >= 0.0 && p < 1.0)) throw ValidationError("chi-squared quantile needs p in [0, 1)");
    if (p == 0.0) return 0.0;
    return boost::math::quantile(boost::math::chi_squared_distribution<double>(df), p);
}

}  // namespace ots
