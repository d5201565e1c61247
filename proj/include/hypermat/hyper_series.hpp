#pragma once

// Series and Euler-integral evaluators for the Gauss 2F1 matrix function and
// the extended Gauss, Kummer, Appell F1/F2 and Lauricella F_D^(3) matrix
// functions. Multiple series are summed shell by shell in total degree
// N = m + n (+ p); summation stops once `consecutive_small` successive shells
// fall below term_tol * (1 + ||partial sum||).
//
// Non-commuting factors are multiplied in the order the defining formulas
// print them: the Gamma normalizer left-multiplies F1 and F_D, and
// right-multiplies 2F1, the extended Gauss/Kummer functions and F2.

#include <optional>
#include <string>
#include <string_view>

#include "hypermat/commuting_family.hpp"
#include "hypermat/gamma_beta.hpp"
#include "hypermat/quadrature.hpp"

namespace hypermat {

enum class Method { series, integral };

enum class HyperFunction { gauss_2f1, ext_gauss, ext_kummer, ext_appell_f1, ext_appell_f2, ext_lauricella_fd3 };

enum class Role { A, B, Bp, Bpp, C, Cp, X };

std::string_view role_name(Role role);
std::optional<Role> role_from_name(std::string_view name);
std::string_view function_name(HyperFunction f);
std::optional<HyperFunction> function_from_name(std::string_view name);
std::string_view method_name(Method m);
std::optional<Method> method_from_name(std::string_view name);

struct HyperParams {
    std::optional<ComplexMatrix> A, B, Bp, Bpp, C, Cp, X;

    /// Throws DomainError when the role is missing.
    const ComplexMatrix& require(Role role) const;
    std::optional<ComplexMatrix>& slot(Role role);
    const std::optional<ComplexMatrix>& slot(Role role) const;

    /// Copies every role present in the family ("A", "B", "B'", "B''", "C", "C'", "X").
    static HyperParams from_family(const CommutingFamily& family);
};

struct EvalPoint {
    Complex z{};
    Complex w{};
    Complex v{};
};

struct SeriesConfig {
    double term_tol = 1e-15;
    int consecutive_small = 3;
    int max_total_degree = 400;

    void validate() const;
};

/// The extended Kummer integral either carries the e^(zt) kernel or is taken
/// literally without any z-dependence.
enum class KummerKernel { with_exponential, literal };

struct EvalOptions {
    Method method = Method::series;
    SeriesConfig series{};
    QuadratureConfig quad{};
    KummerKernel kummer = KummerKernel::with_exponential;
    /// Skip the positive-stability requirement on the numerator parameter A of
    /// the extended Gauss function (the series only needs it through (A)_m).
    bool relax_numerator = false;
};

struct EvalResult {
    ComplexMatrix value;
    double error_estimate = 0.0;
    Method method = Method::series;
    int terms = 0; ///< shells summed (series) or quadrature level reached (integral)
};

/// Validates commutation, positive stability and argument guards for `f`.
void check_hypotheses(HyperFunction f, const HyperParams& p, const EvalPoint& pt, const EvalOptions& opt);

EvalResult eval_gauss_2f1(const HyperParams& p, const EvalPoint& pt, const EvalOptions& opt = {});
EvalResult eval_ext_gauss(const HyperParams& p, const EvalPoint& pt, const EvalOptions& opt = {});
EvalResult eval_ext_kummer(const HyperParams& p, const EvalPoint& pt, const EvalOptions& opt = {});
EvalResult eval_ext_appell_f1(const HyperParams& p, const EvalPoint& pt, const EvalOptions& opt = {});
EvalResult eval_ext_appell_f2(const HyperParams& p, const EvalPoint& pt, const EvalOptions& opt = {});
EvalResult eval_ext_lauricella_fd3(const HyperParams& p, const EvalPoint& pt, const EvalOptions& opt = {});

EvalResult evaluate(HyperFunction f, const HyperParams& p, const EvalPoint& pt, const EvalOptions& opt = {});

/// Extended Gauss series with the extended-beta moments B(B + mI, C - B; X)
/// and the normalizer cached, for many (A, z) at fixed (B, C, X).
class ExtGaussSeries {
public:
    ExtGaussSeries(ComplexMatrix b, ComplexMatrix c, ComplexMatrix x, SeriesConfig series = {},
                   QuadratureConfig quad = {});

    /// F^(X)(A, B; C; z). `a` need not be positive stable.
    EvalResult operator()(const ComplexMatrix& a, Complex z);

private:
    ComplexMatrix b_, c_, x_;
    SeriesConfig series_;
    ExtendedBetaMoments moments_;
    ComplexMatrix normalizer_;
};

} // namespace hypermat
