#include "hypermat/gamma_beta.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "hypermat/hypotheses.hpp"

namespace hypermat {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
};

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// ln Gamma(z) for Re z >= 1/2 (branch of the imaginary part is irrelevant to exp).
Complex lanczos_log_gamma(Complex z)
{
    z -= 1.0;
    Complex sum = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i)
        sum += kLanczos[i] / (z + static_cast<double>(i));
    const Complex t = z + kLanczosG + 0.5;
    return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(sum);
}

// Past this shifted spectral abscissa exp(-s X) is zero to double precision
// even after amplification by a cond(V) <= 1e6 eigenbasis.
constexpr double kDampingCutoff = 800.0;

} // namespace

Complex log_gamma_scalar(Complex z)
{
    if (z.real() < 0.5) {
        // reflection; exp() of the result is what callers use
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * z)) - lanczos_log_gamma(1.0 - z);
    }
    return lanczos_log_gamma(z);
}

Complex gamma_scalar(Complex z)
{
    if (z.real() < 0.5)
        return std::numbers::pi / (std::sin(std::numbers::pi * z) * std::exp(lanczos_log_gamma(1.0 - z)));
    return std::exp(lanczos_log_gamma(z));
}

Complex rgamma_scalar(Complex z)
{
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real()))
        return {0.0, 0.0};
    if (z.real() < 0.5)
        return std::sin(std::numbers::pi * z) * std::exp(lanczos_log_gamma(1.0 - z)) / std::numbers::pi;
    return std::exp(-lanczos_log_gamma(z));
}

ComplexMatrix pochhammer(const ComplexMatrix& a, int n)
{
    require_square(a, "Pochhammer argument");
    if (n < 0)
        throw DomainError("Pochhammer index must be non-negative");
    const ComplexMatrix id = identity(a.rows());
    ComplexMatrix p = id;
    for (int k = 0; k < n; ++k)
        p = p * (a + static_cast<double>(k) * id);
    return p;
}

ComplexMatrix gamma_matrix_stirling(const ComplexMatrix& a)
{
    require_square(a, "gamma argument");
    // Bernoulli B_2k / (2k (2k - 1)), k = 1..8
    static constexpr std::array<double, 8> coef = {
        1.0 / 12.0,    -1.0 / 360.0,           1.0 / 1260.0,          -1.0 / 1680.0,
        1.0 / 1188.0,  -691.0 / 360360.0,      1.0 / 156.0,           -3617.0 / 122400.0,
    };
    const StabilityReport rep = stability(a);
    const int shift = std::max(0, static_cast<int>(std::ceil(16.0 - rep.beta)));
    const ComplexMatrix id = identity(a.rows());
    const ComplexMatrix z = a + static_cast<double>(shift) * id;
    const ComplexMatrix log_z = logm_iss(z);
    const ComplexMatrix z_inv = z.partialPivLu().inverse();
    const ComplexMatrix z_inv2 = z_inv * z_inv;
    ComplexMatrix series = ComplexMatrix::Zero(a.rows(), a.rows());
    ComplexMatrix power = z_inv;
    for (double c : coef) {
        series += c * power;
        power = power * z_inv2;
    }
    const ComplexMatrix log_gamma = (z - 0.5 * id) * log_z - z + kHalfLog2Pi * id + series;
    const ComplexMatrix gamma_z = expm_pade(log_gamma);
    if (shift == 0)
        return gamma_z;
    return pochhammer(a, shift).partialPivLu().solve(gamma_z);
}

ComplexMatrix gamma_matrix(const ComplexMatrix& a)
{
    require_positive_stable(a, "A");
    Spectral s(a);
    if (s.well_conditioned())
        return s.map([](Complex l) { return gamma_scalar(l); });
    return gamma_matrix_stirling(a);
}

ComplexMatrix gamma_inverse(const ComplexMatrix& a)
{
    require_positive_stable(a, "A");
    Spectral s(a);
    if (s.well_conditioned())
        return s.map([](Complex l) { return rgamma_scalar(l); });
    return gamma_matrix_stirling(a).partialPivLu().inverse();
}

ComplexMatrix gamma_quadrature(const ComplexMatrix& a, const QuadratureConfig& cfg)
{
    require_positive_stable(a, "A");
    const ExpPlan power(a - identity(a.rows()));
    const Eigen::Index r = a.rows();
    // e^-t underflows long before t^(A-I) overflows
    return integrate_half_line(
               [&power, r](double t) {
                   return t > 700.0 ? zeros(r) : ComplexMatrix(std::exp(-t) * power.pow(t));
               },
               cfg)
        .value;
}

ComplexMatrix gamma_limit(const ComplexMatrix& a, long n)
{
    require_positive_stable(a, "A");
    if (n < 1)
        throw DomainError("limit iterate needs n >= 1");
    const Eigen::Index r = a.rows();
    const ComplexMatrix id = identity(r);
    // (n-1)! (A)_n^-1 = A^-1 prod_{k=1}^{n-1} (I + A/k)^-1; all factors commute.
    auto lu0 = a.partialPivLu();
    if (std::abs(lu0.determinant()) == 0.0)
        throw HypothesisError("(A)_n invertible", "A is singular");
    ComplexMatrix acc = lu0.inverse();
    for (long k = 1; k < n; ++k)
        acc = (id + a / static_cast<double>(k)).partialPivLu().solve(acc);
    return acc * mat_real_power(a, static_cast<double>(n));
}

ComplexMatrix reciprocal_gamma(const ComplexMatrix& a, int n)
{
    require_square(a, "A");
    if (n < 1)
        throw DomainError("reciprocal gamma needs n >= 1");
    require_invertible_shifts(a, "A", n);
    const ComplexMatrix shifted = a + static_cast<double>(n) * identity(a.rows());
    require_positive_stable(shifted, "A + nI");
    return pochhammer(a, n) * gamma_matrix(shifted).partialPivLu().inverse();
}

ComplexMatrix beta_matrix(const ComplexMatrix& a, const ComplexMatrix& b, const QuadratureConfig& cfg)
{
    require_positive_stable(a, "A");
    require_positive_stable(b, "B");
    require_commuting(a, b, "AB = BA");
    return extended_beta(a, b, zeros(a.rows()), cfg).value;
}

ComplexMatrix beta_matrix_gamma_form(const ComplexMatrix& a, const ComplexMatrix& b)
{
    require_positive_stable(a, "A");
    require_positive_stable(b, "B");
    require_commuting(a, b, "AB = BA");
    return gamma_matrix(a) * gamma_matrix(b) * gamma_inverse(a + b);
}

ComplexMatrix beta_matrix_infinite_form(const ComplexMatrix& a, const ComplexMatrix& b, const QuadratureConfig& cfg)
{
    require_positive_stable(a, "A");
    require_positive_stable(b, "B");
    require_commuting(a, b, "AB = BA");
    // u^(A-I) (1+u)^-(A+B) = (u / (1+u))^A (1+u)^-B / u keeps every factor bounded
    const ExpPlan ratio(a);
    const ExpPlan tail(-b);
    return integrate_half_line(
               [&](double u) {
                   const double log_ratio = u > 1.0 ? -std::log1p(1.0 / u) : std::log(u) - std::log1p(u);
                   return ComplexMatrix(ratio.pow_from_log(log_ratio) * tail.pow_from_log(std::log1p(u)) / u);
               },
               cfg)
        .value;
}

BatchQuadratureResult extended_beta_moments(const ComplexMatrix& p, const ComplexMatrix& q, const ComplexMatrix& x,
                                            std::size_t count, const QuadratureConfig& cfg)
{
    require_same_shape(p, q, "extended beta");
    require_same_shape(p, x, "extended beta");
    if (count == 0)
        throw DomainError("moment count must be positive");
    const Eigen::Index r = p.rows();
    const ComplexMatrix id = identity(r);
    const ExpPlan left(p - id);
    const ExpPlan right(q - id);
    const ExpPlan damp(x);
    const double damp_floor = damp.zero() ? 0.0 : stability(x).beta;

    auto integrand = [&](UnitNode n, std::vector<ComplexMatrix>& out) {
        const double s = 1.0 / (n.u * n.complement);
        if (damp_floor > 0.0 && s * damp_floor > kDampingCutoff) {
            for (auto& m : out)
                m.setZero();
            return;
        }
        out[0] = left.pow_from_log(std::log(n.u)) * right.pow_from_log(std::log(n.complement));
        if (!damp.zero())
            out[0] = out[0] * damp.exp_times(-s);
        for (std::size_t m = 1; m < out.size(); ++m)
            out[m] = n.u * out[m - 1];
    };
    return integrate_unit_interval_batch(integrand, count, r, cfg);
}

QuadratureResult extended_beta(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& x,
                               const QuadratureConfig& cfg)
{
    require_positive_stable(a, "A");
    require_positive_stable(b, "B");
    require_positive_stable_or_zero(x, "X");
    require_commuting(a, b, "AB = BA");
    require_commuting(a, x, "AX = XA");
    require_commuting(b, x, "BX = XB");
    BatchQuadratureResult res = extended_beta_moments(a, b, x, 1, cfg);
    return {std::move(res.values[0]), res.error_estimate, res.level};
}

ExtendedBetaMoments::ExtendedBetaMoments(ComplexMatrix p, ComplexMatrix q, ComplexMatrix x, QuadratureConfig cfg,
                                         std::size_t initial_count)
    : p_(std::move(p)), q_(std::move(q)), x_(std::move(x)), cfg_(cfg)
{
    grow(std::max<std::size_t>(initial_count, 1));
}

const ComplexMatrix& ExtendedBetaMoments::operator[](std::size_t m)
{
    if (m >= values_.size())
        grow(std::max(m + 1, 2 * values_.size()));
    return values_[m];
}

void ExtendedBetaMoments::grow(std::size_t count)
{
    BatchQuadratureResult res = extended_beta_moments(p_, q_, x_, count, cfg_);
    values_ = std::move(res.values);
    error_estimate_ = res.error_estimate;
}

ComplexMatrix gamma_normalizer(const ComplexMatrix& c, const ComplexMatrix& a)
{
    return gamma_matrix(c) * gamma_inverse(a) * gamma_inverse(c - a);
}

} // namespace hypermat
