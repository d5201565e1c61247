#pragma once

#include <string_view>

#include "hypermat/matrix_core.hpp"

namespace hypermat {

/// Throws HypothesisError("<name> positive stable") unless min Re sigma(m) > 0.
void require_positive_stable(const ComplexMatrix& m, std::string_view name);
/// As above, but the zero matrix is admitted (X = O).
void require_positive_stable_or_zero(const ComplexMatrix& m, std::string_view name);
/// Throws HypothesisError(relation), e.g. relation = "CB = BC".
void require_commuting(const ComplexMatrix& m, const ComplexMatrix& n, std::string_view relation);
/// m + kI invertible for k = 0 .. count-1.
void require_invertible_shifts(const ComplexMatrix& m, std::string_view name, int count);

} // namespace hypermat
