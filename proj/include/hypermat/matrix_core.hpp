#pragma once

// Dense complex matrices and their functional calculus.
//
// Matrix functions go through the eigendecomposition M = V diag(l) V^-1 when
// the eigenvector matrix is well conditioned (cond(V) <= 1e6). Otherwise the
// exponential uses scaling-and-squaring Pade and the logarithm uses inverse
// scaling-and-squaring. Logarithms and powers take the principal branch; an
// eigenvalue on the closed negative real axis is rejected.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include <Eigen/Dense>

#include "hypermat/errors.hpp"

namespace hypermat {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Relative Frobenius tolerance for ||MN - NM|| <= tol ||M|| ||N||.
inline constexpr double kCommuteTol = 1e-12;
/// Largest eigenvector condition number accepted by the spectral path.
inline constexpr double kMaxEigenvectorCondition = 1e6;

/// Builds an r x c matrix from row-major entries. Throws DomainError on a size
/// mismatch or a non-finite entry.
ComplexMatrix make_matrix(std::size_t rows, std::size_t cols, std::span<const Complex> row_major);

ComplexMatrix identity(Eigen::Index r);
ComplexMatrix zeros(Eigen::Index r);

void require_square(const ComplexMatrix& m, std::string_view what);
void require_finite(const ComplexMatrix& m, std::string_view what);
void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, std::string_view what);

double frobenius(const ComplexMatrix& m);
bool is_zero(const ComplexMatrix& m);

/// ||LHS - RHS||_F / (1 + max(||LHS||_F, ||RHS||_F)).
double relative_residual(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

/// ||MN - NM||_F / (||M||_F ||N||_F); zero when either factor is zero.
double commutator_ratio(const ComplexMatrix& m, const ComplexMatrix& n);
bool commutes(const ComplexMatrix& m, const ComplexMatrix& n, double tol = kCommuteTol);

struct StabilityReport {
    double alpha = 0.0; ///< max Re of the spectrum
    double beta = 0.0;  ///< min Re of the spectrum
    bool positive_stable = false;
};

ComplexVector eigenvalues(const ComplexMatrix& m);
StabilityReport stability(const ComplexMatrix& m);

/// Cached eigendecomposition for repeated evaluation of f(M).
class Spectral {
public:
    explicit Spectral(const ComplexMatrix& m);

    const ComplexVector& eigenvalues() const noexcept { return values_; }
    double condition() const noexcept { return condition_; }
    bool well_conditioned() const noexcept { return condition_ <= kMaxEigenvectorCondition; }

    /// V diag(f(l_i)) V^-1.
    template <class F>
    ComplexMatrix map(F&& f) const
    {
        ComplexVector fv(values_.size());
        for (Eigen::Index i = 0; i < values_.size(); ++i)
            fv(i) = f(values_(i));
        return vectors_ * fv.asDiagonal() * inverse_;
    }

private:
    ComplexMatrix vectors_;
    ComplexMatrix inverse_;
    ComplexVector values_;
    double condition_ = 0.0;
};

/// exp(c M) for a fixed M and many scalars c; the workhorse of quadrature
/// integrands (t^(A-I), (1-zt)^-B, exp(-X/(t(1-t)))).
class ExpPlan {
public:
    explicit ExpPlan(ComplexMatrix m);

    ComplexMatrix exp_times(Complex c) const;
    /// t^M for t > 0.
    ComplexMatrix pow(double t) const;
    /// base^M on the principal branch; base must not lie on (-inf, 0].
    ComplexMatrix pow(Complex base) const;
    /// Same as pow(t) but with ln(t) supplied by the caller, for nodes where
    /// t underflows relative to its logarithm.
    ComplexMatrix pow_from_log(double log_t) const { return exp_times(Complex(log_t, 0.0)); }

    const ComplexMatrix& matrix() const noexcept { return m_; }
    bool zero() const noexcept { return zero_; }
    bool spectral() const noexcept { return spectral_.has_value(); }

private:
    ComplexMatrix m_;
    std::optional<Spectral> spectral_;
    bool zero_ = false;
};

/// Scaling-and-squaring with the degree-13 Pade approximant.
ComplexMatrix expm_pade(const ComplexMatrix& m);
/// Inverse scaling-and-squaring logarithm (Denman-Beavers square roots, atanh series).
ComplexMatrix logm_iss(const ComplexMatrix& m);
/// Principal square root by the Denman-Beavers iteration.
ComplexMatrix sqrtm_db(const ComplexMatrix& m);

ComplexMatrix mat_exp(const ComplexMatrix& m);
ComplexMatrix mat_log(const ComplexMatrix& m);
/// t^M = exp(M ln t), t > 0.
ComplexMatrix mat_real_power(const ComplexMatrix& m, double t);
/// base^M = exp(M Log base) on the principal branch.
ComplexMatrix mat_complex_power(const ComplexMatrix& m, Complex base);
/// (1 - z)^(-M) = exp(-M Log(1 - z)), |z| < 1.
ComplexMatrix mat_neg_power(const ComplexMatrix& m, Complex z);

/// Principal logarithm of a scalar that must not lie on (-inf, 0].
Complex principal_log(Complex base, std::string_view what);

} // namespace hypermat
