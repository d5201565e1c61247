#include "hypermat/hypotheses.hpp"

#include <cstdio>
#include <string>

namespace hypermat {

namespace {

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

} // namespace

void require_positive_stable(const ComplexMatrix& m, std::string_view name)
{
    require_square(m, name);
    const StabilityReport rep = stability(m);
    if (!rep.positive_stable)
        throw HypothesisError(std::string(name) + " positive stable", fmt("min Re of spectrum is %.6g", rep.beta));
}

void require_positive_stable_or_zero(const ComplexMatrix& m, std::string_view name)
{
    require_square(m, name);
    if (is_zero(m))
        return;
    const StabilityReport rep = stability(m);
    if (!rep.positive_stable)
        throw HypothesisError(std::string(name) + " positive stable or zero",
                              fmt("min Re of spectrum is %.6g", rep.beta));
}

void require_commuting(const ComplexMatrix& m, const ComplexMatrix& n, std::string_view relation)
{
    require_same_shape(m, n, relation);
    const double ratio = commutator_ratio(m, n);
    if (ratio > kCommuteTol)
        throw HypothesisError(std::string(relation), fmt("relative commutator %.3e", ratio));
}

void require_invertible_shifts(const ComplexMatrix& m, std::string_view name, int count)
{
    const ComplexVector ev = eigenvalues(m);
    const double scale = 1.0 + m.norm();
    for (int k = 0; k < count; ++k)
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            if (std::abs(ev(i) + static_cast<double>(k)) <= 1e-13 * scale)
                throw HypothesisError(std::string(name) + " + " + std::to_string(k) + "I invertible", "");
}

} // namespace hypermat
