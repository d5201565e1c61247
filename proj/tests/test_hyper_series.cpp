#include "doctest.h"
#include "hypermat/errors.hpp"
#include "hypermat/hyper_series.hpp"
#include "support.hpp"

#include <cmath>

using namespace hypermat;
using namespace hmtest;

namespace {

// Independent high-precision quadrature of the defining Euler integrals (1x1).
constexpr double kExtGauss = 0.080169159839904307439567533004;    // F^(0.5)(1, 2; 3; 0.3)
constexpr double kExtKummer = 0.472551708748150375132618026682;   // Phi^(0.2)(1.5; 3; 0.7)
constexpr double kExtF1 = 0.172641635928336360531726376066;       // F1^(0.3)(1.2, 0.8, 1.1; 3; 0.2, -0.4)
constexpr double kExtFD3 = 0.372145311415760512326681889148;      // FD3^(0.15)(1.1, 0.7, 0.9, 1.2; 3.2; 0.2, 0.1, -0.3)
constexpr double kExtF2 = 0.0688508304642260351746800125974;      // F2^(0.25)(1, 0.9, 1.3; 2.8, 3.1; 0.3, 0.2)
constexpr double kGaussEig0 = 0.293009794412036913734293558893;   // F^(0.2)(1, 0.8; 3; 0.4)
constexpr double kGaussEig1 = 0.158280498540099446331381022451;   // F^(0.4)(1.5, 1.2; 3.3; 0.4)
constexpr double k2F1Eig0 = 1.13168077439898819250098225926;      // 2F1(1, 0.8; 3; 0.4)
constexpr double k2F1Eig1 = 1.29663814057466312243517564414;      // 2F1(1.5, 1.2; 3.3; 0.4)

EvalOptions with(Method m)
{
    EvalOptions o;
    o.method = m;
    return o;
}

double both_methods(HyperFunction f, const HyperParams& p, const EvalPoint& pt, double expected)
{
    const Complex s = evaluate(f, p, pt, with(Method::series)).value(0, 0);
    const Complex i = evaluate(f, p, pt, with(Method::integral)).value(0, 0);
    CHECK(std::abs(s - i) < 1e-9);
    return std::abs(s - expected);
}

} // namespace

TEST_CASE("closed scalar values")
{
    HyperParams p;
    p.A = scalar(1.0);
    p.B = scalar(1.0);
    p.C = scalar(2.0);
    for (Method m : {Method::series, Method::integral})
        CHECK(std::abs(eval_gauss_2f1(p, {0.5, 0.0, 0.0}, with(m)).value(0, 0) - 2.0 * std::log(2.0)) < 1e-12);

    HyperParams k;
    k.B = scalar(1.0);
    k.C = scalar(2.0);
    k.X = scalar(0.0);
    for (Method m : {Method::series, Method::integral})
        CHECK(std::abs(eval_ext_kummer(k, {1.0, 0.0, 0.0}, with(m)).value(0, 0) - (std::exp(1.0) - 1.0)) < 1e-12);
}

TEST_CASE("extended functions at 1x1 against frozen quadrature values")
{
    HyperParams g;
    g.A = scalar(1.0);
    g.B = scalar(2.0);
    g.C = scalar(3.0);
    g.X = scalar(0.5);
    CHECK(both_methods(HyperFunction::ext_gauss, g, {0.3, 0.0, 0.0}, kExtGauss) < 1e-10);

    HyperParams k;
    k.B = scalar(1.5);
    k.C = scalar(3.0);
    k.X = scalar(0.2);
    CHECK(both_methods(HyperFunction::ext_kummer, k, {0.7, 0.0, 0.0}, kExtKummer) < 1e-10);

    HyperParams f1;
    f1.A = scalar(1.2);
    f1.B = scalar(0.8);
    f1.Bp = scalar(1.1);
    f1.C = scalar(3.0);
    f1.X = scalar(0.3);
    CHECK(both_methods(HyperFunction::ext_appell_f1, f1, {0.2, -0.4, 0.0}, kExtF1) < 1e-10);

    HyperParams fd;
    fd.A = scalar(1.1);
    fd.B = scalar(0.7);
    fd.Bp = scalar(0.9);
    fd.Bpp = scalar(1.2);
    fd.C = scalar(3.2);
    fd.X = scalar(0.15);
    CHECK(both_methods(HyperFunction::ext_lauricella_fd3, fd, {0.2, 0.1, -0.3}, kExtFD3) < 1e-10);

    HyperParams f2;
    f2.A = scalar(1.0);
    f2.B = scalar(0.9);
    f2.Bp = scalar(1.3);
    f2.C = scalar(2.8);
    f2.Cp = scalar(3.1);
    f2.X = scalar(0.25);
    CHECK(both_methods(HyperFunction::ext_appell_f2, f2, {0.3, 0.2, 0.0}, kExtF2) < 1e-9);
}

TEST_CASE("matrix arguments diagonal in a common basis")
{
    HyperParams p;
    p.A = similar2(1.0, 1.5);
    p.B = similar2(0.8, 1.2);
    p.C = similar2(3.0, 3.3);
    p.X = similar2(0.2, 0.4);
    for (Method m : {Method::series, Method::integral}) {
        CHECK(rel(eval_ext_gauss(p, {0.4, 0.0, 0.0}, with(m)).value, similar2(kGaussEig0, kGaussEig1)) < 1e-10);
        CHECK(rel(eval_gauss_2f1(p, {0.4, 0.0, 0.0}, with(m)).value, similar2(k2F1Eig0, k2F1Eig1)) < 1e-10);
    }
}

TEST_CASE("reductions between the families")
{
    const CommutingFamily fam = random_commuting_family(7, 2, default_role_layout());
    HyperParams p = HyperParams::from_family(fam);
    const Complex z(0.3, 0.1), w(-0.2, 0.15);

    SUBCASE("X = O gives the Gauss function")
    {
        HyperParams q = p;
        q.X = zeros(2);
        CHECK(rel(eval_ext_gauss(q, {z, 0.0, 0.0}).value, eval_gauss_2f1(q, {z, 0.0, 0.0}).value) < 1e-8);
    }
    SUBCASE("v = 0 drops the third variable")
    {
        CHECK(rel(eval_ext_lauricella_fd3(p, {z, w, 0.0}).value, eval_ext_appell_f1(p, {z, w, 0.0}).value) < 1e-8);
    }
    SUBCASE("w = 0 gives the Gauss function with swapped roles")
    {
        HyperParams g;
        g.A = p.B;
        g.B = p.A;
        g.C = p.C;
        g.X = p.X;
        CHECK(rel(eval_ext_appell_f1(p, {z, 0.0, 0.0}).value, eval_ext_gauss(g, {z, 0.0, 0.0}).value) < 1e-8);
    }
}

TEST_CASE("series summation stops after consecutive small shells")
{
    HyperParams p;
    p.A = scalar(1.0);
    p.B = scalar(1.0);
    p.C = scalar(2.0);
    EvalOptions o;
    o.series.max_total_degree = 5;
    CHECK_THROWS_AS(eval_gauss_2f1(p, {0.9, 0.0, 0.0}, o), NumericalError);
    o.series.max_total_degree = 1000;
    CHECK_THROWS_AS(o.series.validate(), DomainError);
    const EvalResult r = eval_gauss_2f1(p, {0.1, 0.0, 0.0});
    CHECK(r.terms > 3);
    CHECK(r.terms < 30);
}

TEST_CASE("guards and hypotheses")
{
    const CommutingFamily fam = random_commuting_family(3, 2, default_role_layout());
    HyperParams p = HyperParams::from_family(fam);

    CHECK_THROWS_AS(eval_ext_appell_f1(p, {1.1, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(eval_ext_appell_f2(p, {0.6, 0.5, 0.0}), DomainError);
    CHECK_THROWS_AS(eval_ext_gauss(p, {1.0, 0.0, 0.0}), DomainError);

    HyperParams bad = p;
    bad.A = 1.1 * identity(2);
    bad.X.reset();
    bad.C = mat(2, {3.0, 1.0, 0.0, 3.5});
    bad.B = mat(2, {1.0, 0.0, 1.0, 1.2});
    try {
        eval_ext_appell_f1(bad, {0.2, 0.1, 0.0});
        FAIL("expected a hypothesis violation");
    } catch (const HypothesisError& e) {
        CHECK(e.hypothesis() == "CB = BC");
    }

    HyperParams unstable = p;
    unstable.C = p.A.value() - 0.5 * identity(2);
    CHECK_THROWS_AS(eval_ext_gauss(unstable, {0.2, 0.0, 0.0}), HypothesisError);

    HyperParams missing = p;
    missing.Bp.reset();
    CHECK_THROWS_AS(eval_ext_appell_f1(missing, {0.2, 0.1, 0.0}), DomainError);
}

TEST_CASE("2F1 at z = 1 needs alpha(A) + alpha(B) < beta(C)")
{
    HyperParams p;
    p.A = scalar(0.5);
    p.B = scalar(0.5);
    p.C = scalar(2.5);
    // Gauss summation: Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b)) = Gamma(2.5) Gamma(1.5) here
    const double expected = std::tgamma(2.5) * std::tgamma(1.5);
    CHECK(std::abs(eval_gauss_2f1(p, {1.0, 0.0, 0.0}, with(Method::integral)).value(0, 0) - expected) < 1e-9);
    p.C = scalar(0.9);
    CHECK_THROWS_AS(eval_gauss_2f1(p, {1.0, 0.0, 0.0}), HypothesisError);
}

TEST_CASE("literal Kummer kernel ignores z")
{
    HyperParams k;
    k.B = scalar(1.5);
    k.C = scalar(3.0);
    k.X = scalar(0.2);
    EvalOptions o = with(Method::integral);
    o.kummer = KummerKernel::literal;
    const Complex a = eval_ext_kummer(k, {0.1, 0.0, 0.0}, o).value(0, 0);
    const Complex b = eval_ext_kummer(k, {0.7, 0.0, 0.0}, o).value(0, 0);
    CHECK(std::abs(a - b) < 1e-14);
}

TEST_CASE("cached extended Gauss series matches the evaluator")
{
    HyperParams p;
    p.A = similar2(1.0, 1.5);
    p.B = similar2(0.8, 1.2);
    p.C = similar2(3.0, 3.3);
    p.X = similar2(0.2, 0.4);
    ExtGaussSeries cached(*p.B, *p.C, *p.X);
    for (double z : {0.1, 0.4, -0.5})
        CHECK(rel(cached(*p.A, z).value, eval_ext_gauss(p, {z, 0.0, 0.0}).value) < 1e-13);
}

TEST_CASE("names round trip")
{
    for (auto f : {HyperFunction::gauss_2f1, HyperFunction::ext_gauss, HyperFunction::ext_kummer,
                   HyperFunction::ext_appell_f1, HyperFunction::ext_appell_f2, HyperFunction::ext_lauricella_fd3})
        CHECK(function_from_name(function_name(f)) == f);
    for (auto r : {Role::A, Role::B, Role::Bp, Role::Bpp, Role::C, Role::Cp, Role::X})
        CHECK(role_from_name(role_name(r)) == r);
    CHECK_FALSE(function_from_name("hyp3f2"));
}
