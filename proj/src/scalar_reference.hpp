#pragma once

// Independent 1x1 oracles: Boost tanh-sinh for the extended beta integral,
// std::tgamma/lgamma for gamma, and brute-force rectangular summation of the
// defining series. Shares no numerics with the matrix evaluators.

#include <complex>

namespace hypermat::reference {

using Complex = std::complex<double>;

/// Integral of t^(a-1) (1-t)^(b-1) exp(-x / (t(1-t))) over (0, 1); a, b > 0, x >= 0.
double ext_beta(double a, double b, double x);

Complex gauss_2f1(double a, double b, double c, Complex z);
Complex ext_gauss(double a, double b, double c, double x, Complex z);
Complex ext_kummer(double b, double c, double x, Complex z);
Complex ext_appell_f1(double a, double b, double bp, double c, double x, Complex z, Complex w);
Complex ext_appell_f2(double a, double b, double bp, double c, double cp, double x, Complex z, Complex w);
Complex ext_lauricella_fd3(double a, double b, double bp, double bpp, double c, double x, Complex z, Complex w,
                           Complex v);

/// Extended fractional image of t^a: z^(a - mu) B(a + 1, -mu; x) / Gamma(-mu), real mu < 0, real z > 0.
double frac_power(double a, double mu, double x, double z);

} // namespace hypermat::reference
