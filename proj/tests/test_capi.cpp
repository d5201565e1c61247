#include "doctest.h"
#include "hypermat/hypermat.h"
#include "json.hpp"

#include <cmath>
#include <string>

namespace {

struct Owned {
    hm_matrix* m = nullptr;
    ~Owned() { hm_matrix_free(m); }
};

struct OwnedString {
    char* s = nullptr;
    ~OwnedString() { hm_string_free(s); }
};

hm_matrix* scalar(double v)
{
    const hm_complex e{v, 0.0};
    hm_matrix* m = nullptr;
    REQUIRE(hm_matrix_new(1, 1, &e, &m) == HM_OK);
    return m;
}

} // namespace

TEST_CASE("matrix handles")
{
    const hm_complex e[4] = {{1, 0}, {2, -1}, {0, 0}, {4, 0}};
    Owned m;
    REQUIRE(hm_matrix_new(2, 2, e, &m.m) == HM_OK);
    CHECK(hm_matrix_rows(m.m) == 2);
    hm_complex v{};
    CHECK(hm_matrix_get(m.m, 0, 1, &v) == HM_OK);
    CHECK(v.re == 2.0);
    CHECK(v.im == -1.0);
    CHECK(hm_matrix_get(m.m, 2, 0, &v) == HM_ERR_INVALID_ARGUMENT);
    CHECK(std::string(hm_last_error()).find("range") != std::string::npos);
    Owned bad;
    CHECK(hm_matrix_new(2, 2, nullptr, &bad.m) == HM_ERR_INVALID_ARGUMENT);
    CHECK(bad.m == nullptr);
}

TEST_CASE("gamma through the C interface")
{
    Owned a{scalar(0.5)}, g;
    REQUIRE(hm_gamma(a.m, &g.m) == HM_OK);
    hm_complex v{};
    hm_matrix_get(g.m, 0, 0, &v);
    CHECK(std::abs(v.re - 1.7724538509055160273) < 1e-14);
    CHECK(std::string(hm_last_error()).empty());
}

TEST_CASE("hypothesis failures name the hypothesis")
{
    const hm_complex b[4] = {{1, 0}, {0, 0}, {1, 0}, {1.2, 0}};
    const hm_complex c[4] = {{3, 0}, {1, 0}, {0, 0}, {3.5, 0}};
    const hm_complex a[4] = {{1.1, 0}, {0, 0}, {0, 0}, {1.1, 0}};
    Owned ma, mb, mc, out;
    hm_matrix_new(2, 2, a, &ma.m);
    hm_matrix_new(2, 2, b, &mb.m);
    hm_matrix_new(2, 2, c, &mc.m);
    hm_params* p = nullptr;
    REQUIRE(hm_params_new(&p) == HM_OK);
    hm_params_set(p, "A", ma.m);
    hm_params_set(p, "B", mb.m);
    hm_params_set(p, "B'", ma.m);
    hm_params_set(p, "C", mc.m);
    CHECK(hm_params_set(p, "D", ma.m) == HM_ERR_INVALID_ARGUMENT);
    const hm_status s = hm_eval("ext_appell_f1", "series", p, {0.2, 0}, {0.1, 0}, {0, 0}, &out.m, nullptr);
    CHECK(s == HM_ERR_HYPOTHESIS);
    CHECK(std::string(hm_last_hypothesis()) == "CB = BC");
    CHECK(std::string(hm_last_error()).find("CB = BC") != std::string::npos);
    hm_params_free(p);
}

TEST_CASE("extended beta with a null X is the beta function")
{
    Owned a{scalar(2.0)}, b{scalar(3.0)}, e, f;
    double err = -1.0;
    REQUIRE(hm_ext_beta(a.m, b.m, nullptr, &e.m, &err) == HM_OK);
    REQUIRE(hm_beta(a.m, b.m, &f.m) == HM_OK);
    hm_complex x{}, y{};
    hm_matrix_get(e.m, 0, 0, &x);
    hm_matrix_get(f.m, 0, 0, &y);
    CHECK(std::abs(x.re - 1.0 / 12.0) < 1e-12);
    CHECK(std::abs(x.re - y.re) < 1e-12);
    CHECK(err >= 0.0);
}

TEST_CASE("generated family round trips through eval")
{
    OwnedString fam;
    REQUIRE(hm_gen_family_json(5, 2, "A,B,C,X", 0.0, 0.0, &fam.s) == HM_OK);
    auto j = nlohmann::json::parse(fam.s);
    CHECK(j["members"].size() == 4);
    j["z"] = 0.3;
    OwnedString out;
    REQUIRE(hm_eval_json(j.dump().c_str(), "ext_gauss", nullptr, &out.s) == HM_OK);
    const auto r = nlohmann::json::parse(out.s);
    CHECK(r["method"] == "series");
    CHECK(r["result"]["rows"] == 2);

    OwnedString bad;
    CHECK(hm_gen_family_json(5, 2, "A,Q", 0.0, 0.0, &bad.s) == HM_ERR_INVALID_ARGUMENT);
    CHECK(hm_gen_family_json(5, 2, nullptr, 2.0, 1.0, &bad.s) == HM_ERR_NUMERICAL);
}

TEST_CASE("verification through the C interface")
{
    CHECK(hm_identity_count() == 17);
    CHECK(std::string(hm_identity_name(0)) == "THM_3_1");
    CHECK(hm_identity_name(17) == nullptr);
    OwnedString out;
    int passed = 0;
    REQUIRE(hm_verify_json(42, "quick", "EQ_2_5", 0.0, &out.s, &passed) == HM_OK);
    CHECK(passed == 1);
    const std::string text(out.s);
    CHECK(text.back() == '\n');
    CHECK(nlohmann::json::parse(text)["verdict"] == "pass");
    OwnedString none;
    CHECK(hm_verify_json(42, "weekly", nullptr, 0.0, &none.s, &passed) == HM_ERR_INVALID_ARGUMENT);
}
