#include "hypermat/commuting_family.hpp"

#include <algorithm>
#include <cmath>

#include "rng.hpp"

namespace hypermat {

namespace {

constexpr int kMaxRetries = 64;
constexpr double kMaxSeedCondition = 25.0;

struct SeedMatrix {
    ComplexMatrix s;
    ComplexMatrix s2;
    ComplexVector d;
};

SeedMatrix draw_seed(detail::Rng& rng, int r)
{
    SeedMatrix seed;
    seed.d.resize(r);
    for (int i = 0; i < r; ++i) {
        // stratified real parts keep the spectrum well separated
        const double re = -1.0 + 2.0 * (i + rng.uniform(0.15, 0.85)) / r;
        const double im = r == 1 ? 0.0 : rng.uniform(-0.25, 0.25);
        seed.d(i) = Complex(re, im);
    }
    if (r == 1) {
        seed.s = seed.d.asDiagonal();
        seed.s2 = seed.s * seed.s;
        return seed;
    }
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        ComplexMatrix v = identity(r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                v(i, j) += 0.35 * Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        Eigen::JacobiSVD<ComplexMatrix> svd(v);
        const auto& sv = svd.singularValues();
        if (sv(r - 1) <= 0.0 || sv(0) / sv(r - 1) > kMaxSeedCondition)
            continue;
        seed.s = v * seed.d.asDiagonal() * v.partialPivLu().inverse();
        seed.s2 = seed.s * seed.s;
        return seed;
    }
    throw NumericalError("could not draw a well-conditioned eigenvector basis", 0.0);
}

bool window_ok(const SpectralWindow& w)
{
    return std::isfinite(w.lo) && std::isfinite(w.hi) && w.hi > w.lo;
}

} // namespace

const ComplexMatrix& CommutingFamily::at(const std::string& role) const
{
    auto it = members.find(role);
    if (it == members.end())
        throw DomainError("family has no member for role " + role);
    return it->second;
}

std::vector<RoleSpec> default_role_layout()
{
    return {
        {"A", {0.6, 1.6}},  {"B", {0.6, 1.6}},  {"B'", {0.6, 1.6}}, {"B''", {0.6, 1.6}},
        {"C", {2.6, 3.6}},  {"C'", {2.6, 3.6}}, {"X", {0.1, 0.6}},
    };
}

CommutingFamily random_commuting_family(std::uint64_t seed, int r, std::span<const RoleSpec> roles)
{
    if (r < 1)
        throw DomainError("family dimension r must be >= 1");
    for (const auto& spec : roles)
        if (!window_ok(spec.window))
            throw NumericalError("spectral window for role " + spec.role + " is infeasible (need lo < hi, finite)",
                                 0.0);

    detail::Rng rng(seed);
    const SeedMatrix base = draw_seed(rng, r);
    const ComplexMatrix id = identity(r);

    CommutingFamily family;
    family.seed = seed;
    family.r = r;
    for (const auto& spec : roles) {
        const double width = spec.window.hi - spec.window.lo;
        bool placed = false;
        for (int attempt = 0; attempt < kMaxRetries && !placed; ++attempt) {
            const double c1 = rng.uniform(0.5, 1.5) * (rng.coin() ? 1.0 : -1.0);
            const double c2 = rng.uniform(-0.4, 0.4);
            const ComplexVector p = (c1 * base.d.array() + c2 * base.d.array().square()).matrix();
            const double pmin = p.real().minCoeff();
            const double pmax = p.real().maxCoeff();
            const double span = pmax - pmin;
            const double target = rng.uniform(0.3, 0.9) * width;
            const double scale = span > 1e-12 ? target / span : 1.0;
            const double used = scale * span;
            const double lo = spec.window.lo + rng.uniform(0.05, 0.95) * (width - used);
            const double c0 = lo - scale * pmin;
            ComplexMatrix m = c0 * id + scale * (c1 * base.s + c2 * base.s2);
            const StabilityReport rep = stability(m);
            if (rep.beta > spec.window.lo && rep.alpha < spec.window.hi) {
                family.members[spec.role] = std::move(m);
                placed = true;
            }
        }
        if (!placed)
            throw NumericalError("spectral window for role " + spec.role + " infeasible after retries", 0.0);
    }
    return family;
}

CommutingFamily random_commuting_family(std::uint64_t seed, int r, std::span<const std::string> roles,
                                        SpectralWindow window)
{
    std::vector<RoleSpec> specs;
    specs.reserve(roles.size());
    for (const auto& role : roles)
        specs.push_back({role, window});
    return random_commuting_family(seed, r, specs);
}

double max_commutator_ratio(const CommutingFamily& family)
{
    double worst = 0.0;
    for (auto i = family.members.begin(); i != family.members.end(); ++i)
        for (auto j = std::next(i); j != family.members.end(); ++j)
            worst = std::max(worst, commutator_ratio(i->second, j->second));
    return worst;
}

} // namespace hypermat
