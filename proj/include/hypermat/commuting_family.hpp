#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hypermat/matrix_core.hpp"

namespace hypermat {

/// Open interval (lo, hi) that the real parts of a member's spectrum must lie in.
struct SpectralWindow {
    double lo = 0.0;
    double hi = 0.0;
};

struct RoleSpec {
    std::string role;
    SpectralWindow window;
};

/// Pairwise-commuting matrices keyed by role name ("A", "B", "B'", "C", "X", ...).
struct CommutingFamily {
    std::uint64_t seed = 0;
    int r = 0;
    std::map<std::string, ComplexMatrix> members;
    double commute_tol = kCommuteTol;

    bool contains(const std::string& role) const { return members.count(role) != 0; }
    const ComplexMatrix& at(const std::string& role) const;
};

/// Default role layout under which every hypergeometric function's hypotheses
/// hold: C, C' sit above A, B, B', B'' so C - A, C - B, C' - B' stay positive stable.
std::vector<RoleSpec> default_role_layout();

/// Members are c0 I + s (c1 S + c2 S^2) for one random diagonalizable seed S
/// with real coefficients, scaled and shifted into each role's window. The
/// result is a deterministic function of (seed, r, roles).
CommutingFamily random_commuting_family(std::uint64_t seed, int r, std::span<const RoleSpec> roles);

CommutingFamily random_commuting_family(std::uint64_t seed, int r, std::span<const std::string> roles,
                                        SpectralWindow window);

/// Largest pairwise commutator ratio over all members.
double max_commutator_ratio(const CommutingFamily& family);

} // namespace hypermat
