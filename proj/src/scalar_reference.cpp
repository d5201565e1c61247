#include "scalar_reference.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace hypermat::reference {

namespace {

constexpr double kTermFloor = 1e-19;

// Terms needed before rho^n < kTermFloor, with head room for the polynomial factors.
int rectangle(double rho)
{
    if (rho <= 0.0)
        return 1;
    const int n = static_cast<int>(std::ceil(std::log(kTermFloor) / std::log(rho))) + 25;
    return std::min(n, 400);
}

Complex cpow_int(Complex z, int n)
{
    Complex p = 1.0;
    for (int k = 0; k < n; ++k)
        p *= z;
    return p;
}

// Gamma(c) / (Gamma(b) Gamma(c - b)).
double normalizer(double c, double b)
{
    return std::exp(std::lgamma(c) - std::lgamma(b) - std::lgamma(c - b));
}

// ln of (a)_n / n!.
double log_poch_over_fact(double a, int n)
{
    return std::lgamma(a + n) - std::lgamma(a) - std::lgamma(n + 1.0);
}

} // namespace

double ext_beta(double a, double b, double x)
{
    thread_local boost::math::quadrature::tanh_sinh<double> rule;
    // Folded onto (0, 1/2] so both endpoint singularities sit at the origin,
    // where the rule resolves abscissas to full relative precision.
    auto f = [a, b, x](double t) {
        const double tc = 1.0 - t;
        const double s = 1.0 / (t * tc);
        if (x > 0.0 && s * x > 745.0)
            return 0.0;
        const double lt = std::log(t), ltc = std::log1p(-t);
        return std::exp((a - 1.0) * lt + (b - 1.0) * ltc - x * s) + std::exp((b - 1.0) * lt + (a - 1.0) * ltc - x * s);
    };
    return rule.integrate(f, 0.0, 0.5, 1e-14);
}

Complex gauss_2f1(double a, double b, double c, Complex z)
{
    std::complex<long double> sum = 0.0L, term = 1.0L;
    const std::complex<long double> zl(z.real(), z.imag());
    for (int n = 0; n < 100000; ++n) {
        sum += term;
        if (n > 10 && std::abs(term) < 1e-20L * std::abs(sum))
            break;
        term *= (static_cast<long double>(a) + n) * (static_cast<long double>(b) + n) /
                ((static_cast<long double>(c) + n) * (n + 1.0L)) * zl;
    }
    return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

Complex ext_gauss(double a, double b, double c, double x, Complex z)
{
    const int n = rectangle(std::abs(z));
    Complex sum = 0.0;
    for (int m = 0; m < n; ++m)
        sum += std::exp(log_poch_over_fact(a, m)) * ext_beta(b + m, c - b, x) * cpow_int(z, m);
    return sum * normalizer(c, b);
}

Complex ext_kummer(double b, double c, double x, Complex z)
{
    const int n = std::min(400, static_cast<int>(std::ceil(3.0 * std::abs(z))) + 40);
    Complex sum = 0.0;
    for (int m = 0; m < n; ++m)
        sum += ext_beta(b + m, c - b, x) * std::exp(-std::lgamma(m + 1.0)) * cpow_int(z, m);
    return sum * normalizer(c, b);
}

Complex ext_appell_f1(double a, double b, double bp, double c, double x, Complex z, Complex w)
{
    const int n = rectangle(std::max(std::abs(z), std::abs(w)));
    std::vector<double> beta(2 * n);
    for (int k = 0; k < 2 * n; ++k)
        beta[k] = ext_beta(a + k, c - a, x);
    Complex sum = 0.0;
    for (int m = 0; m < n; ++m)
        for (int j = 0; j < n; ++j)
            sum += beta[m + j] * std::exp(log_poch_over_fact(b, m) + log_poch_over_fact(bp, j)) * cpow_int(z, m) *
                   cpow_int(w, j);
    return normalizer(c, a) * sum;
}

Complex ext_appell_f2(double a, double b, double bp, double c, double cp, double x, Complex z, Complex w)
{
    const int n = rectangle(std::abs(z) + std::abs(w));
    std::vector<double> bu(n), bv(n);
    for (int k = 0; k < n; ++k) {
        bu[k] = ext_beta(b + k, c - b, x);
        bv[k] = ext_beta(bp + k, cp - bp, x);
    }
    Complex sum = 0.0;
    for (int m = 0; m < n; ++m)
        for (int j = 0; j < n; ++j) {
            const double coef = std::exp(std::lgamma(a + m + j) - std::lgamma(a) - std::lgamma(m + 1.0) -
                                         std::lgamma(j + 1.0));
            sum += coef * bu[m] * bv[j] * cpow_int(z, m) * cpow_int(w, j);
        }
    return sum * normalizer(c, b) * normalizer(cp, bp);
}

Complex ext_lauricella_fd3(double a, double b, double bp, double bpp, double c, double x, Complex z, Complex w,
                           Complex v)
{
    const int n = rectangle(std::max({std::abs(z), std::abs(w), std::abs(v)}));
    std::vector<double> beta(3 * n);
    for (int k = 0; k < 3 * n; ++k)
        beta[k] = ext_beta(a + k, c - a, x);
    Complex sum = 0.0;
    for (int m = 0; m < n; ++m)
        for (int j = 0; j < n; ++j)
            for (int p = 0; p < n; ++p)
                sum += beta[m + j + p] *
                       std::exp(log_poch_over_fact(b, m) + log_poch_over_fact(bp, j) + log_poch_over_fact(bpp, p)) *
                       cpow_int(z, m) * cpow_int(w, j) * cpow_int(v, p);
    return normalizer(c, a) * sum;
}

double frac_power(double a, double mu, double x, double z)
{
    return std::pow(z, a - mu) * ext_beta(a + 1.0, -mu, x) / std::tgamma(-mu);
}

} // namespace hypermat::reference
