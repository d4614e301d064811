#pragma once

namespace corrsim {

double norm_pdf(double x);
double norm_cdf(double x);

// Inverse of norm_cdf, accurate to full double precision (rational
// approximation refined by one Halley step).
double norm_quantile(double p);

// Standard bivariate normal CDF P(X <= x, Y <= y) with correlation rho,
// |rho| < 1. Evaluated through the arcsine-substituted single integral over
// the correlation path, which is smooth for all |rho| < 1.
double binorm_cdf(double x, double y, double rho);

} // namespace corrsim
