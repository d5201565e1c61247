#include "doctest.h"
#include "hypermat/errors.hpp"
#include "hypermat/identity_verify.hpp"
#include "json.hpp"
#include "support.hpp"

#include <algorithm>

using namespace hypermat;
using namespace hmtest;

TEST_CASE("seventeen identities with stable names")
{
    REQUIRE(all_identities().size() == 17);
    for (IdentityId id : all_identities())
        CHECK(identity_from_name(identity_name(id)) == id);
    CHECK(identity_name(IdentityId::THM_4_6_VARIANT) == "THM_4_6_VARIANT");
    CHECK(is_probe(IdentityId::THM_4_6));
    CHECK(is_probe(IdentityId::THM_4_6_VARIANT));
    CHECK(is_probe(IdentityId::EQ_2_14_PROBE));
    CHECK(is_probe(IdentityId::B_FACTORIZATION_PROBE));
    CHECK_FALSE(is_probe(IdentityId::THM_5_2));
}

TEST_CASE("scalar F1 Euler integral with X = O")
{
    VerifyConfig cfg;
    cfg.family_mutator = [](CommutingFamily& f) { f.members["X"] = zeros(f.r); };
    const VerifyReport rep = verify_identity(IdentityId::THM_3_1, 9, 1, 4, cfg);
    CHECK(rep.verdict == Verdict::pass);
    CHECK(*std::max_element(rep.residuals.begin(), rep.residuals.end()) < 1e-9);
}

TEST_CASE("fractional Gauss transform in dimension three")
{
    const VerifyReport rep = verify_identity(IdentityId::THM_4_2, 4, 3, 2);
    CHECK(rep.r == 3);
    CHECK(*std::max_element(rep.residuals.begin(), rep.residuals.end()) < 1e-8);
}

TEST_CASE("probes never fail")
{
    const VerifyReport rep = verify_identity(IdentityId::THM_4_6, 1, 1, 2);
    CHECK(rep.verdict == Verdict::probe_only);
    CHECK(verdict_name(rep.verdict) == "probe-only");
}

TEST_CASE("a tolerance override can fail a non-probe identity")
{
    VerifyConfig cfg;
    cfg.tolerance = 1e-30;
    const VerifyReport rep = verify_identity(IdentityId::EQ_2_6, 2, 2, 2, cfg);
    CHECK(rep.verdict == Verdict::fail);
    CHECK_FALSE(suite_passed({rep}));
}

TEST_CASE("broken commutation errors instead of passing")
{
    VerifyConfig cfg;
    cfg.family_mutator = [](CommutingFamily& f) {
        if (f.r > 1)
            f.members["B"](0, 1) += 0.5;
    };
    CHECK_THROWS_AS(verify_identity(IdentityId::THM_3_1, 3, 2, 1, cfg), HypothesisError);
}

TEST_CASE("reports serialize deterministically with the documented keys")
{
    const VerifyReport a = verify_identity(IdentityId::EQ_2_5, 77, 2, 3);
    const VerifyReport b = verify_identity(IdentityId::EQ_2_5, 77, 2, 3);
    const std::string ja = report_to_json(a);
    CHECK(ja == report_to_json(b));
    CHECK(ja.find('\n') == std::string::npos);
    const auto j = nlohmann::json::parse(ja);
    CHECK(j.size() == 6);
    for (const char* key : {"identity", "seed", "r", "residuals", "tolerance", "verdict"})
        CHECK(j.contains(key));
    CHECK(j["identity"] == "EQ_2_5");
    CHECK(j["residuals"].size() == a.residuals.size());
}

TEST_CASE("profiles")
{
    CHECK(profile_shape(Profile::quick).dims == std::vector<int>{1, 2});
    CHECK(profile_shape(Profile::quick).n_families == 10);
    CHECK(profile_shape(Profile::full).dims == std::vector<int>{1, 2, 3});
    CHECK(profile_shape(Profile::full).n_families == 50);
    CHECK_FALSE(profile_from_name("medium"));
}

TEST_CASE("cross-method residuals for the extended Kummer function")
{
    const std::vector<double> res = cross_method_residuals(HyperFunction::ext_kummer, 5, 2, 3);
    CHECK_FALSE(res.empty());
    CHECK(*std::max_element(res.begin(), res.end()) < 1e-6);
}
