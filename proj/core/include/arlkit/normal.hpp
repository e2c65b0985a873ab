#pragma once

namespace arlkit {

/// Standard normal CDF.
double normal_cdf(double x);

/// Upper tail 1 - normal_cdf(x), accurate for large x.
double normal_sf(double x);

/// Inverse of normal_cdf on (0, 1); returns -inf/+inf at 0/1.
double normal_quantile(double p);

}  // namespace arlkit
