#include "doctest.h"
#include "hypermat/errors.hpp"
#include "hypermat/gamma_beta.hpp"
#include "support.hpp"

#include <cmath>

using namespace hypermat;
using namespace hmtest;

namespace {
constexpr double kEulerGamma = 0.577215664901532860606512090082;
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kExtBeta111 = 0.00702985840660965623924127053035;      // B(1, 1; 1)
constexpr double kExtBeta23half = 0.00736193121975125637279307131781;   // B(2, 3; 0.5)
} // namespace

TEST_CASE("scalar gamma")
{
    CHECK(std::abs(gamma_scalar(0.5) - kSqrtPi) < 1e-14);
    CHECK(std::abs(gamma_scalar(5.0) - 24.0) < 1e-12);
    CHECK(std::abs(rgamma_scalar(-2.0)) == 0.0);
    CHECK(std::abs(gamma_scalar(Complex(1.0, 1.0)) - Complex(0.498015668118356, -0.154949828301811)) < 1e-13);
}

TEST_CASE("gamma of a Jordan block carries the digamma value")
{
    // Gamma([[1,1],[0,1]]) = [[Gamma(1), Gamma'(1)], [0, Gamma(1)]]
    const ComplexMatrix j = mat(2, {1.0, 1.0, 0.0, 1.0});
    const ComplexMatrix expected = mat(2, {1.0, -kEulerGamma, 0.0, 1.0});
    CHECK(rel(gamma_matrix(j), expected) < 1e-12);
    CHECK(rel(gamma_matrix_stirling(j), expected) < 1e-12);
}

TEST_CASE("gamma production, Stirling and quadrature paths agree")
{
    const ComplexMatrix a = similar2(0.7, 2.4);
    const ComplexMatrix g = gamma_matrix(a);
    CHECK(rel(g, similar2(gamma_scalar(0.7), gamma_scalar(2.4))) < 1e-13);
    CHECK(rel(gamma_matrix_stirling(a), g) < 1e-12);
    CHECK(rel(gamma_quadrature(a), g) < 1e-9);
    CHECK(rel(gamma_inverse(a) * g, identity(2)) < 1e-13);
}

TEST_CASE("limit formula converges slowly to gamma")
{
    const ComplexMatrix a = similar2(0.9, 1.6);
    CHECK(rel(gamma_limit(a, 100000), gamma_matrix(a)) < 1e-4);
}

TEST_CASE("Pochhammer and reciprocal gamma")
{
    const ComplexMatrix a = similar2(0.4, 1.3);
    // (A)_n = Gamma(A + nI) Gamma^-1(A)
    for (int n : {0, 1, 4, 9})
        CHECK(rel(pochhammer(a, n), gamma_matrix(a + n * identity(2)) * gamma_inverse(a)) < 1e-12);
    CHECK(rel(reciprocal_gamma(a, 3), gamma_inverse(a)) < 1e-12);
    CHECK(std::abs(pochhammer(mat(1, {-2.0}), 4)(0, 0)) == 0.0);
    CHECK_THROWS_AS(gamma_limit(mat(1, {-1.0}), 10), HypothesisError);
}

TEST_CASE("beta: integral, gamma and infinite-interval forms")
{
    const ComplexMatrix a = similar2(0.8, 1.5);
    const ComplexMatrix b = similar2(1.2, 0.6);
    const ComplexMatrix g = beta_matrix_gamma_form(a, b);
    CHECK(rel(g, similar2(std::beta(0.8, 1.2), std::beta(1.5, 0.6))) < 1e-13);
    CHECK(rel(beta_matrix(a, b), g) < 1e-9);
    CHECK(rel(beta_matrix_infinite_form(a, b), g) < 1e-8);
}

TEST_CASE("extended beta against independent values")
{
    CHECK(std::abs(extended_beta(scalar(1.0), scalar(1.0), scalar(1.0)).value(0, 0) - kExtBeta111) < 1e-14);
    CHECK(std::abs(extended_beta(scalar(2.0), scalar(3.0), scalar(0.5)).value(0, 0) - kExtBeta23half) < 1e-14);
}

TEST_CASE("extended beta with X = O is the beta matrix")
{
    const ComplexMatrix a = similar2(0.8, 1.5);
    const ComplexMatrix b = similar2(1.2, 0.6);
    CHECK(rel(extended_beta(a, b, zeros(2)).value, beta_matrix_gamma_form(a, b)) < 1e-10);
}

TEST_CASE("extended beta moments share nodes with single evaluations")
{
    const ComplexMatrix p = similar2(0.8, 1.5);
    const ComplexMatrix q = similar2(1.2, 0.6);
    const ComplexMatrix x = similar2(0.3, 0.1);
    const BatchQuadratureResult m = extended_beta_moments(p, q, x, 5);
    REQUIRE(m.values.size() == 5);
    CHECK(rel(m.values[4], extended_beta(p + 4.0 * identity(2), q, x).value) < 1e-10);
    ExtendedBetaMoments lazy(p, q, x, {}, 2);
    CHECK(rel(lazy[7], extended_beta(p + 7.0 * identity(2), q, x).value) < 1e-10);
}

TEST_CASE("extended beta hypotheses")
{
    CHECK_THROWS_AS(extended_beta(similar2(-0.5, 1.0), similar2(1.0, 1.0), zeros(2)), HypothesisError);
    CHECK_THROWS_AS(extended_beta(mat(2, {1.0, 1.0, 0.0, 2.0}), mat(2, {1.0, 0.0, 1.0, 2.0}), zeros(2)),
                    HypothesisError);
}
