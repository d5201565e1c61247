#pragma once

// Randomized verification of the integral representations, fractional
// transforms, generating relations and kernel identities. Every check draws
// commuting families and argument points from a seed, evaluates both sides
// and records relative residuals ||L - R||_F / (1 + max(||L||_F, ||R||_F)).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hypermat/commuting_family.hpp"
#include "hypermat/hyper_series.hpp"

namespace hypermat {

enum class IdentityId {
    THM_3_1,
    THM_3_2,
    THM_3_3,
    THM_4_2,
    THM_4_3,
    THM_4_4,
    THM_4_5,
    THM_4_6,
    THM_4_6_VARIANT,
    THM_5_1,
    THM_5_2,
    EQ_2_5,
    EQ_2_6,
    X_ZERO_REDUCTIONS,
    SCALAR_REDUCTION,
    EQ_2_14_PROBE,
    B_FACTORIZATION_PROBE,
};

/// All identities in report order.
const std::vector<IdentityId>& all_identities();
std::string_view identity_name(IdentityId id);
std::optional<IdentityId> identity_from_name(std::string_view name);
/// Probe identities record residuals but never fail.
bool is_probe(IdentityId id);
double default_tolerance(IdentityId id);

enum class Verdict { pass, fail, probe_only };
std::string_view verdict_name(Verdict v);

struct VerifyReport {
    IdentityId id = IdentityId::THM_3_1;
    std::uint64_t seed = 0;
    int r = 1;
    std::vector<EvalPoint> points;
    std::vector<double> residuals;
    double tolerance = 0.0;
    Verdict verdict = Verdict::pass;
};

struct VerifyConfig {
    std::optional<double> tolerance; ///< overrides every per-identity default
    int points_per_family = 2;
    SeriesConfig series{};
    QuadratureConfig quad{};
    unsigned threads = 0; ///< 0: hardware concurrency
    /// Applied to each generated family before evaluation.
    std::function<void(CommutingFamily&)> family_mutator;
};

/// Throws on family-generation failure and propagates evaluator errors with
/// the identity name and family index prefixed.
VerifyReport verify_identity(IdentityId id, std::uint64_t seed, int r, int n_families, const VerifyConfig& cfg = {});

/// Series-versus-integral residuals of one evaluator over random families.
std::vector<double> cross_method_residuals(HyperFunction f, std::uint64_t seed, int r, int n_families,
                                           const VerifyConfig& cfg = {});

enum class Profile { quick, full };
std::optional<Profile> profile_from_name(std::string_view name);

struct ProfileShape {
    std::vector<int> dims;
    int n_families = 0;
};
/// quick: r in {1, 2}, 10 families; full: r in {1, 2, 3}, 50 families.
ProfileShape profile_shape(Profile p);

/// One report per identity; residuals of all dimensions are concatenated and
/// `r` holds the largest dimension exercised.
VerifyReport verify_profile(IdentityId id, std::uint64_t seed, Profile profile, const VerifyConfig& cfg = {});
std::vector<VerifyReport> run_suite(std::uint64_t seed, Profile profile, const VerifyConfig& cfg = {});

/// True iff every non-probe report passes.
bool suite_passed(const std::vector<VerifyReport>& reports);

/// {"identity", "seed", "r", "residuals", "tolerance", "verdict"} on one line, no trailing newline.
std::string report_to_json(const VerifyReport& report);

} // namespace hypermat
