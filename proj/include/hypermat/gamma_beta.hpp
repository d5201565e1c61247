#pragma once

// Gamma, reciprocal gamma, Pochhammer, beta and extended beta of matrix
// arguments. Production gamma applies a scalar Lanczos kernel (g = 7, 9
// terms) through the eigendecomposition; the limit formula and direct
// quadrature of the Euler integral are kept as independent cross-checks.

#include <vector>

#include "hypermat/matrix_core.hpp"
#include "hypermat/quadrature.hpp"

namespace hypermat {

Complex log_gamma_scalar(Complex z);
Complex gamma_scalar(Complex z);
/// 1 / Gamma(z); entire, zero at the non-positive integers.
Complex rgamma_scalar(Complex z);

/// Gamma(A) for positive-stable A.
ComplexMatrix gamma_matrix(const ComplexMatrix& a);
/// Gamma(A) through Gamma(A + nI) (A)_n^-1 and the Stirling series, using
/// only matrix exp/log/inverse. Used when A is not safely diagonalizable.
ComplexMatrix gamma_matrix_stirling(const ComplexMatrix& a);
/// Gamma^-1(A) for positive-stable A.
ComplexMatrix gamma_inverse(const ComplexMatrix& a);
/// Integral of e^-t t^(A-I) over (0, inf) by quadrature.
ComplexMatrix gamma_quadrature(const ComplexMatrix& a, const QuadratureConfig& cfg = {});

/// n-th iterate (n-1)! (A)_n^-1 n^A of the limit formula for Gamma(A).
ComplexMatrix gamma_limit(const ComplexMatrix& a, long n);

/// A (A+I) ... (A+(n-1)I) Gamma^-1(A + nI); independent of the admissible n.
ComplexMatrix reciprocal_gamma(const ComplexMatrix& a, int n);

/// (A)_0 = I, (A)_n = A (A+I) ... (A+(n-1)I).
ComplexMatrix pochhammer(const ComplexMatrix& a, int n);

/// Integral of t^(A-I) (1-t)^(B-I) over (0, 1); A, B positive stable, AB = BA.
ComplexMatrix beta_matrix(const ComplexMatrix& a, const ComplexMatrix& b, const QuadratureConfig& cfg = {});
/// Gamma(A) Gamma(B) Gamma^-1(A+B).
ComplexMatrix beta_matrix_gamma_form(const ComplexMatrix& a, const ComplexMatrix& b);
/// Integral of u^(A-I) (1+u)^-(A+B) over (0, inf).
ComplexMatrix beta_matrix_infinite_form(const ComplexMatrix& a, const ComplexMatrix& b,
                                        const QuadratureConfig& cfg = {});

/// Integral of t^(A-I) (1-t)^(B-I) exp(-X / (t(1-t))) over (0, 1). A, B, X
/// pairwise commuting, A and B positive stable, X positive stable or O.
QuadratureResult extended_beta(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& x,
                               const QuadratureConfig& cfg = {});

/// B(P + mI, Q; X) for m = 0 .. count-1 from one shared set of nodes.
/// Commutation of P, Q, X is the caller's responsibility.
BatchQuadratureResult extended_beta_moments(const ComplexMatrix& p, const ComplexMatrix& q, const ComplexMatrix& x,
                                            std::size_t count, const QuadratureConfig& cfg = {});

/// Lazily extended table of B(P + mI, Q; X); recomputed with a larger count
/// when an index past the end is requested.
class ExtendedBetaMoments {
public:
    ExtendedBetaMoments(ComplexMatrix p, ComplexMatrix q, ComplexMatrix x, QuadratureConfig cfg,
                        std::size_t initial_count);

    const ComplexMatrix& operator[](std::size_t m);
    double error_estimate() const noexcept { return error_estimate_; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    void grow(std::size_t count);

    ComplexMatrix p_, q_, x_;
    QuadratureConfig cfg_;
    std::vector<ComplexMatrix> values_;
    double error_estimate_ = 0.0;
};

/// Gamma(C) Gamma^-1(A) Gamma^-1(C - A), the normalizer shared by the Euler-type integrals.
ComplexMatrix gamma_normalizer(const ComplexMatrix& c, const ComplexMatrix& a);

} // namespace hypermat
