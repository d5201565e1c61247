#pragma once

#include <initializer_list>
#include <vector>

#include "hypermat/matrix_core.hpp"

namespace hmtest {

using hypermat::Complex;
using hypermat::ComplexMatrix;

inline ComplexMatrix mat(Eigen::Index r, std::initializer_list<Complex> row_major)
{
    const std::vector<Complex> v(row_major);
    return hypermat::make_matrix(static_cast<std::size_t>(r), static_cast<std::size_t>(r), v);
}

inline ComplexMatrix scalar(Complex a) { return mat(1, {a}); }

/// Fixed non-normal similarity shared by the "diagonal in disguise" tests.
inline ComplexMatrix basis2() { return mat(2, {1.0, 0.4, -0.3, 1.2}); }

/// P diag(d0, d1) P^-1 with P = basis2().
inline ComplexMatrix similar2(Complex d0, Complex d1)
{
    const ComplexMatrix p = basis2();
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = d0;
    d(1, 1) = d1;
    return p * d * p.inverse();
}

inline double rel(const ComplexMatrix& a, const ComplexMatrix& b) { return hypermat::relative_residual(a, b); }

} // namespace hmtest
