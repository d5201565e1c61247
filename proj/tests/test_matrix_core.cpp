#include "doctest.h"
#include "hypermat/errors.hpp"
#include "hypermat/matrix_core.hpp"
#include "support.hpp"

#include <numbers>

using namespace hypermat;
using namespace hmtest;

TEST_CASE("exp and log are inverse on positive-stable matrices")
{
    const ComplexMatrix a = similar2(0.7, 1.9);
    CHECK(rel(mat_exp(mat_log(a)), a) < 1e-13);
    CHECK(rel(mat_log(mat_exp(a)), a) < 1e-13);
}

TEST_CASE("exp of a nilpotent block is a finite sum")
{
    const ComplexMatrix n = mat(2, {0.0, 3.0, 0.0, 0.0});
    CHECK(rel(mat_exp(n), mat(2, {1.0, 3.0, 0.0, 1.0})) < 1e-15);
    CHECK(rel(expm_pade(n), mat(2, {1.0, 3.0, 0.0, 1.0})) < 1e-15);
}

TEST_CASE("powers follow the spectrum")
{
    const ComplexMatrix a = similar2(0.5, 2.0);
    CHECK(rel(mat_real_power(a, 4.0), similar2(2.0, 16.0)) < 1e-13);
    // (1 - z)^-A at z = 1/2 is 2^A
    CHECK(rel(mat_neg_power(a, 0.5), similar2(std::sqrt(2.0), 4.0)) < 1e-13);
    CHECK(rel(mat_complex_power(a, Complex(0.0, 1.0)),
              similar2(std::exp(Complex(0.0, 0.25 * std::numbers::pi)), -1.0)) < 1e-13);
    // t^A on a Jordan block: t^a (I + ln t N)
    const ComplexMatrix j = mat(2, {1.0, 1.0, 0.0, 1.0});
    CHECK(rel(mat_real_power(j, std::exp(1.0)), mat(2, {std::exp(1.0), std::exp(1.0), 0.0, std::exp(1.0)})) < 1e-13);
}

TEST_CASE("square root squares back")
{
    const ComplexMatrix a = similar2(0.3, 4.0);
    const ComplexMatrix s = sqrtm_db(a);
    CHECK(rel(s * s, a) < 1e-13);
}

TEST_CASE("stability report gives spectral abscissae")
{
    const StabilityReport s = stability(similar2(0.25, 1.75));
    CHECK(s.alpha == doctest::Approx(1.75).epsilon(1e-12));
    CHECK(s.beta == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(s.positive_stable);
    CHECK_FALSE(stability(similar2(-0.1, 1.0)).positive_stable);
}

TEST_CASE("commutation is measured relative to the operands")
{
    CHECK(commutes(similar2(1.0, 2.0), similar2(3.0, -1.0)));
    CHECK_FALSE(commutes(mat(2, {1.0, 1.0, 0.0, 2.0}), mat(2, {1.0, 0.0, 1.0, 2.0})));
}

TEST_CASE("relative residual is stable near zero")
{
    const ComplexMatrix z = ComplexMatrix::Zero(2, 2);
    CHECK(relative_residual(z, z) == 0.0);
    CHECK(relative_residual(z, mat(2, {1e-20, 0.0, 0.0, 0.0})) < 1e-19);
}

TEST_CASE("malformed matrices are rejected")
{
    const std::vector<Complex> three(3, Complex(1.0, 0.0));
    CHECK_THROWS_AS(make_matrix(2, 2, three), Error);
    const std::vector<Complex> bad{std::nan(""), 0.0, 0.0, 1.0};
    CHECK_THROWS_AS(require_finite(make_matrix(2, 2, bad), "M"), Error);
}
