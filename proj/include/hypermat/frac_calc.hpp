#pragma once

// Extended Riemann-Liouville fractional derivative with a matrix damping
// parameter X (only the Re(mu) < 0 integral branch), and the closed-form
// images of powers, Gauss-type, F1-type and F_D-type integrands.
//
// The segment 0 -> z is parametrized t = z u, which turns the damping
// exp(-X z^2 / (t (z - t))) into exp(-X / (u (1 - u))).

#include <functional>
#include <optional>

#include "hypermat/hyper_series.hpp"

namespace hypermat {

/// Either a single order mu, or a pair (lambda, mu) standing for the order lambda - mu.
struct FracOrder {
    Complex mu{};
    std::optional<Complex> lambda;
    ComplexMatrix X; ///< positive stable or O; an empty matrix means O

    /// The order the operator is applied with: lambda - mu for pairs, mu otherwise.
    Complex effective() const { return lambda ? *lambda - mu : mu; }
    /// Re(effective) < 0; for pairs also Re(mu) > Re(lambda) > 0.
    void validate() const;
};

struct FracOptions {
    SeriesConfig series{};
    QuadratureConfig quad{};
};

using SegmentFunction = std::function<ComplexMatrix(Complex t)>;

/// (1 / Gamma(-nu)) * integral over 0 -> z of f(t) (z - t)^(-nu - 1) exp(-X z^2 / (t (z - t))) dt
/// with nu = order.effective().
QuadratureResult ext_rl_derivative(const SegmentFunction& f, const FracOrder& order, Complex z,
                                   const QuadratureConfig& cfg = {});

/// z^(A - nu I) B(A + I, -nu I; X) / Gamma(-nu).
ComplexMatrix frac_power_rule(const ComplexMatrix& a, const FracOrder& order, Complex z);

/// Gamma(A) Gamma^-1(A + (mu - lambda) I) z^(A + (mu - lambda - 1) I) F^(X)(B, A; A + (mu - lambda) I; z).
ComplexMatrix frac_transform_gauss(const ComplexMatrix& a, const ComplexMatrix& b, const FracOrder& order,
                                   Complex z, const FracOptions& opt = {});
/// Same prefactor with F1(A, B, B'; A + (mu - lambda) I; a z, b z; X).
ComplexMatrix frac_transform_f1(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& bp,
                                const FracOrder& order, Complex sa, Complex sb, Complex z,
                                const FracOptions& opt = {});
/// Same prefactor with F_D^(3)(A, B, B', B''; A + (mu - lambda) I; a z, b z, c z; X).
ComplexMatrix frac_transform_fd3(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& bp,
                                 const ComplexMatrix& bpp, const FracOrder& order, Complex sa, Complex sb,
                                 Complex sc, Complex z, const FracOptions& opt = {});

/// The operator applied numerically to the integrands whose images the closed forms give.
QuadratureResult frac_operator_gauss(const ComplexMatrix& a, const ComplexMatrix& b, const FracOrder& order,
                                     Complex z, const FracOptions& opt = {});
QuadratureResult frac_operator_f1(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& bp,
                                  const FracOrder& order, Complex sa, Complex sb, Complex z,
                                  const FracOptions& opt = {});
QuadratureResult frac_operator_fd3(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& bp,
                                   const ComplexMatrix& bpp, const FracOrder& order, Complex sa, Complex sb,
                                   Complex sc, Complex z, const FracOptions& opt = {});

/// Both sides of the F2 transmutation relation. The operator side is
/// D^(lambda - mu, X){ t^(B' - I) (1 - t)^-A F^(X)(A, B; C; x / (1 - t)) }.
struct F2TransformReport {
    ComplexMatrix lhs;
    /// z^(B' + (mu - lambda - 1) I) / Gamma(mu - lambda) F2(A, B, B'; C, C'; x, z; X) Gamma(C) Gamma^-1(B) Gamma^-1(C - B)
    /// with C' = mu I.
    ComplexMatrix rhs_mu;
    /// The same expression with C' = (mu - lambda) I.
    ComplexMatrix rhs_variant;
    /// z^(B' + (mu - lambda - 1) I) / Gamma(mu - lambda) F2(A, B, B'; C, B' + (mu - lambda) I; x, z; X)
    /// Gamma^-1(C') Gamma(B') Gamma(mu - lambda): the term-by-term image of the operator side.
    ComplexMatrix rhs_termwise;
    double residual_mu = 0.0;
    double residual_variant = 0.0;
    double residual_termwise = 0.0;
};

/// Requires |x| < |1 - t| along the segment and |x| + |z| < 1.
F2TransformReport frac_transform_f2(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& bp,
                                    const ComplexMatrix& c, const FracOrder& order, Complex x, Complex z,
                                    const FracOptions& opt = {});

} // namespace hypermat
