#include "hypermat/hyper_series.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "hypermat/hypotheses.hpp"

namespace hypermat {

namespace {

constexpr std::array<std::pair<Role, std::string_view>, 7> kRoleNames = {{
    {Role::A, "A"},
    {Role::B, "B"},
    {Role::Bp, "B'"},
    {Role::Bpp, "B''"},
    {Role::C, "C"},
    {Role::Cp, "C'"},
    {Role::X, "X"},
}};

constexpr std::array<std::pair<HyperFunction, std::string_view>, 6> kFunctionNames = {{
    {HyperFunction::gauss_2f1, "gauss_2f1"},
    {HyperFunction::ext_gauss, "ext_gauss"},
    {HyperFunction::ext_kummer, "ext_kummer"},
    {HyperFunction::ext_appell_f1, "ext_appell_f1"},
    {HyperFunction::ext_appell_f2, "ext_appell_f2"},
    {HyperFunction::ext_lauricella_fd3, "ext_lauricella_fd3"},
}};

// Past this exponent exp(-s X) is below double precision for every eigenvalue.
constexpr double kDampingCutoff = 800.0;

const ComplexMatrix& x_or_zero(const HyperParams& p, Eigen::Index r, ComplexMatrix& storage)
{
    if (p.X)
        return *p.X;
    storage = zeros(r);
    return storage;
}

struct SeriesOutcome {
    ComplexMatrix sum;
    double last_shell = 0.0;
    int shells = 0;
};

// Sums shell(N) for N = 0, 1, ... until cfg.consecutive_small successive
// shells are below term_tol (1 + ||partial||).
template <class Shell>
SeriesOutcome sum_shells(Shell&& shell, Eigen::Index r, const SeriesConfig& cfg, const char* what)
{
    SeriesOutcome out{zeros(r), 0.0, 0};
    int small = 0;
    for (int n = 0; n <= cfg.max_total_degree; ++n) {
        const ComplexMatrix s = shell(n);
        out.sum += s;
        out.last_shell = frobenius(s);
        out.shells = n + 1;
        if (!std::isfinite(out.last_shell))
            throw NumericalError(std::string(what) + " series produced a non-finite shell", out.last_shell);
        if (out.last_shell < cfg.term_tol * (1.0 + frobenius(out.sum))) {
            if (++small >= cfg.consecutive_small)
                return out;
        } else {
            small = 0;
        }
    }
    throw NumericalError(std::string(what) + " series not converged within max_total_degree = " +
                             std::to_string(cfg.max_total_degree),
                         out.last_shell);
}

// Moments expected before the geometric tail rho^N drops below term_tol.
std::size_t moment_guess(double rho, const SeriesConfig& cfg)
{
    std::size_t n = 8;
    if (rho > 0.0 && rho < 1.0)
        n = static_cast<std::size_t>(std::ceil(std::log(cfg.term_tol) / std::log(rho))) + 12;
    return std::clamp<std::size_t>(n, 4, static_cast<std::size_t>(cfg.max_total_degree) + 1);
}

// Scalar powers z^0 .. z^n with 0^0 = 1.
std::vector<Complex> powers(Complex z, int n)
{
    std::vector<Complex> p(static_cast<std::size_t>(n) + 1);
    p[0] = 1.0;
    for (int k = 1; k <= n; ++k)
        p[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k) - 1] * z;
    return p;
}

// (M)_k z^k / k!, grown on demand.
class ScaledPochhammer {
public:
    ScaledPochhammer(const ComplexMatrix& m, Complex z)
        : m_(m), z_(z), id_(identity(m.rows()))
    {
        terms_.push_back(id_);
    }

    const ComplexMatrix& operator[](std::size_t k)
    {
        while (terms_.size() <= k) {
            const double j = static_cast<double>(terms_.size() - 1);
            terms_.push_back(terms_.back() * (m_ + j * id_) * (z_ / (j + 1.0)));
        }
        return terms_[k];
    }

private:
    ComplexMatrix m_;
    Complex z_;
    ComplexMatrix id_;
    std::vector<ComplexMatrix> terms_;
};

double unit_radius_check(std::initializer_list<Complex> args)
{
    double rho = 0.0;
    for (Complex a : args)
        rho = std::max(rho, std::abs(a));
    return rho;
}

void require_unit_polydisc(std::initializer_list<Complex> args, const char* what)
{
    const double rho = unit_radius_check(args);
    if (!(rho < 1.0))
        throw DomainError(std::string(what) + " requires every argument inside the unit disc, max |arg| = " +
                          std::to_string(rho));
}

ComplexMatrix damping(const ExpPlan& plan, double floor, double s, Eigen::Index r, bool& vanished)
{
    vanished = false;
    if (plan.zero())
        return identity(r);
    if (floor > 0.0 && s * floor > kDampingCutoff) {
        vanished = true;
        return zeros(r);
    }
    return plan.exp_times(Complex(-s, 0.0));
}

double damping_floor(const ComplexMatrix& x)
{
    return is_zero(x) ? 0.0 : stability(x).beta;
}

EvalResult from_quadrature(QuadratureResult q, const ComplexMatrix& left, const ComplexMatrix& right)
{
    EvalResult res;
    res.value = left * q.value * right;
    res.error_estimate = q.error_estimate * frobenius(left) * frobenius(right);
    res.method = Method::integral;
    res.terms = q.level;
    return res;
}

bool is_non_positive_integer(Complex c, double scale)
{
    if (c.real() > 0.5)
        return false;
    return std::abs(c - std::round(c.real())) <= 1e-13 * scale;
}

} // namespace

std::string_view role_name(Role role)
{
    for (const auto& [r, n] : kRoleNames)
        if (r == role)
            return n;
    return "?";
}

std::optional<Role> role_from_name(std::string_view name)
{
    for (const auto& [r, n] : kRoleNames)
        if (n == name)
            return r;
    return std::nullopt;
}

std::string_view function_name(HyperFunction f)
{
    for (const auto& [g, n] : kFunctionNames)
        if (g == f)
            return n;
    return "?";
}

std::optional<HyperFunction> function_from_name(std::string_view name)
{
    for (const auto& [g, n] : kFunctionNames)
        if (n == name)
            return g;
    return std::nullopt;
}

std::string_view method_name(Method m)
{
    return m == Method::series ? "series" : "integral";
}

std::optional<Method> method_from_name(std::string_view name)
{
    if (name == "series")
        return Method::series;
    if (name == "integral")
        return Method::integral;
    return std::nullopt;
}

std::optional<ComplexMatrix>& HyperParams::slot(Role role)
{
    switch (role) {
    case Role::A: return A;
    case Role::B: return B;
    case Role::Bp: return Bp;
    case Role::Bpp: return Bpp;
    case Role::C: return C;
    case Role::Cp: return Cp;
    case Role::X: return X;
    }
    return A;
}

const std::optional<ComplexMatrix>& HyperParams::slot(Role role) const
{
    return const_cast<HyperParams*>(this)->slot(role);
}

const ComplexMatrix& HyperParams::require(Role role) const
{
    const auto& s = slot(role);
    if (!s)
        throw DomainError("missing parameter matrix " + std::string(role_name(role)));
    return *s;
}

HyperParams HyperParams::from_family(const CommutingFamily& family)
{
    HyperParams p;
    for (const auto& [role, name] : kRoleNames) {
        auto it = family.members.find(std::string(name));
        if (it != family.members.end())
            p.slot(role) = it->second;
    }
    return p;
}

void SeriesConfig::validate() const
{
    if (!(term_tol > 0.0))
        throw DomainError("term_tol must be positive");
    if (consecutive_small < 2)
        throw DomainError("consecutive_small must be at least 2");
    if (max_total_degree < 1 || max_total_degree > 400)
        throw DomainError("max_total_degree must lie in [1, 400]");
}

void check_hypotheses(HyperFunction f, const HyperParams& p, const EvalPoint& pt, const EvalOptions& opt)
{
    opt.series.validate();
    opt.quad.validate();

    // Every supplied matrix must be square, finite and of one common size.
    std::optional<Eigen::Index> r;
    for (const auto& [role, name] : kRoleNames) {
        const auto& m = p.slot(role);
        if (!m)
            continue;
        require_square(*m, name);
        require_finite(*m, name);
        if (r && m->rows() != *r)
            throw DomainError("parameter matrices differ in size at " + std::string(name));
        r = m->rows();
    }
    for (Complex c : {pt.z, pt.w, pt.v})
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw DomainError("non-finite argument");

    switch (f) {
    case HyperFunction::gauss_2f1: {
        const ComplexMatrix& a = p.require(Role::A);
        const ComplexMatrix& b = p.require(Role::B);
        const ComplexMatrix& c = p.require(Role::C);
        if (opt.method == Method::series) {
            const ComplexVector ev = eigenvalues(c);
            for (Eigen::Index i = 0; i < ev.size(); ++i)
                if (is_non_positive_integer(ev(i), 1.0 + frobenius(c)))
                    throw HypothesisError("C + kI invertible", "C has a non-positive integer eigenvalue");
            const double az = std::abs(pt.z);
            if (az > 1.0 || (az == 1.0 && pt.z != Complex(1.0, 0.0)))
                throw DomainError("gauss_2f1 series requires |z| < 1 or z = 1");
            if (pt.z == Complex(1.0, 0.0)) {
                const double lhs = stability(a).alpha + stability(b).alpha;
                const double rhs = stability(c).beta;
                if (!(lhs < rhs))
                    throw HypothesisError("alpha(A) + alpha(B) < beta(C)",
                                          "alpha(A) + alpha(B) = " + std::to_string(lhs) +
                                              ", beta(C) = " + std::to_string(rhs));
            }
        } else {
            require_positive_stable(b, "B");
            require_positive_stable(c, "C");
            require_positive_stable(c - b, "C - B");
            require_commuting(c, b, "CB = BC");
            if (pt.z == Complex(1.0, 0.0)) {
                const double lhs = stability(a).alpha + stability(b).alpha;
                if (!(lhs < stability(c).beta))
                    throw HypothesisError("alpha(A) + alpha(B) < beta(C)", "integral diverges at z = 1");
            } else if (!(std::abs(pt.z) < 1.0)) {
                throw DomainError("gauss_2f1 integral requires |z| < 1 or z = 1");
            }
        }
        return;
    }
    case HyperFunction::ext_gauss:
    case HyperFunction::ext_kummer: {
        const bool gauss = f == HyperFunction::ext_gauss;
        const ComplexMatrix& b = p.require(Role::B);
        const ComplexMatrix& c = p.require(Role::C);
        if (gauss && !opt.relax_numerator)
            require_positive_stable(p.require(Role::A), "A");
        else if (gauss)
            p.require(Role::A);
        require_positive_stable(b, "B");
        require_positive_stable(c, "C");
        require_positive_stable(c - b, "C - B");
        if (p.X)
            require_positive_stable_or_zero(*p.X, "X");
        require_commuting(c, b, "CB = BC");
        if (p.X) {
            require_commuting(c, *p.X, "CX = XC");
            require_commuting(b, *p.X, "BX = XB");
        }
        if (gauss && !(std::abs(pt.z) < 1.0))
            throw DomainError("ext_gauss requires |z| < 1");
        return;
    }
    case HyperFunction::ext_appell_f1:
    case HyperFunction::ext_lauricella_fd3: {
        const bool fd = f == HyperFunction::ext_lauricella_fd3;
        const ComplexMatrix& a = p.require(Role::A);
        const ComplexMatrix& b = p.require(Role::B);
        const ComplexMatrix& bp = p.require(Role::Bp);
        const ComplexMatrix& c = p.require(Role::C);
        require_positive_stable(a, "A");
        require_positive_stable(b, "B");
        require_positive_stable(bp, "B'");
        if (fd)
            require_positive_stable(p.require(Role::Bpp), "B''");
        require_positive_stable(c, "C");
        require_positive_stable(c - a, "C - A");
        if (p.X)
            require_positive_stable_or_zero(*p.X, "X");
        require_commuting(a, c, "AC = CA");
        if (p.X) {
            require_commuting(a, *p.X, "AX = XA");
            require_commuting(c, *p.X, "CX = XC");
        }
        require_commuting(c, b, "CB = BC");
        require_commuting(c, bp, "CB' = B'C");
        if (fd) {
            require_commuting(c, *p.Bpp, "CB'' = B''C");
            require_unit_polydisc({pt.z, pt.w, pt.v}, "ext_lauricella_fd3");
        } else {
            require_unit_polydisc({pt.z, pt.w}, "ext_appell_f1");
        }
        return;
    }
    case HyperFunction::ext_appell_f2: {
        const ComplexMatrix& b = p.require(Role::B);
        const ComplexMatrix& bp = p.require(Role::Bp);
        const ComplexMatrix& c = p.require(Role::C);
        const ComplexMatrix& cp = p.require(Role::Cp);
        require_positive_stable(p.require(Role::A), "A");
        require_positive_stable(b, "B");
        require_positive_stable(bp, "B'");
        require_positive_stable(c, "C");
        require_positive_stable(cp, "C'");
        require_positive_stable(c - b, "C - B");
        require_positive_stable(cp - bp, "C' - B'");
        if (p.X)
            require_positive_stable_or_zero(*p.X, "X");
        require_commuting(b, bp, "BB' = B'B");
        require_commuting(b, c, "BC = CB");
        require_commuting(b, cp, "BC' = C'B");
        require_commuting(bp, c, "B'C = CB'");
        require_commuting(bp, cp, "B'C' = C'B'");
        require_commuting(c, cp, "CC' = C'C");
        if (p.X) {
            require_commuting(b, *p.X, "BX = XB");
            require_commuting(bp, *p.X, "B'X = XB'");
            require_commuting(c, *p.X, "CX = XC");
            require_commuting(cp, *p.X, "C'X = XC'");
        }
        if (!(std::abs(pt.z) + std::abs(pt.w) < 1.0))
            throw DomainError("ext_appell_f2 requires |z| + |w| < 1");
        return;
    }
    }
}

EvalResult eval_gauss_2f1(const HyperParams& p, const EvalPoint& pt, const EvalOptions& opt)
{
    check_hypotheses(HyperFunction::gauss_2f1, p, pt, opt);
    const ComplexMatrix& a = *p.A;
    const ComplexMatrix& b = *p.B;
    const ComplexMatrix& c = *p.C;
    const Eigen::Index r = a.rows();
    const ComplexMatrix id = identity(r);

    if (opt.method == Method::series) {
        // term_n = [(A)_n z^n / n!] [(B)_n / n!] [n! (C)_n^-1]; each factor stays polynomial in n.
        ComplexMatrix ahat = id, bhat = id, chat = id;
        auto shell = [&](int n) -> ComplexMatrix {
            if (n > 0) {
                const double k = n - 1;
                ahat = ahat * (a + k * id) * (pt.z / (k + 1.0));
                bhat = bhat * (b + k * id) / (k + 1.0);
                chat = (k + 1.0) * (c + k * id).partialPivLu().solve(chat);
            }
            return ahat * bhat * chat;
        };
        SeriesOutcome s = sum_shells(shell, r, opt.series, "gauss_2f1");
        return {std::move(s.sum), s.last_shell, Method::series, s.shells};
    }

    const ExpPlan neg_a(-a);
    const ExpPlan left(b - id);
    const ExpPlan right(c - b - id);
    const Complex z = pt.z;
    auto integrand = [&](UnitNode n) -> ComplexMatrix {
        // 1 - z t written as (1 - z) + z (1 - t) keeps accuracy as z -> 1
        const Complex base = (1.0 - z) + z * n.complement;
        ComplexMatrix m = left.pow_from_log(std::log(n.u)) * right.pow_from_log(std::log(n.complement));
        if (z != Complex(0.0, 0.0))
            m = neg_a.pow(base) * m;
        return m;
    };
    const ComplexMatrix norm = gamma_inverse(b) * gamma_inverse(c - b) * gamma_matrix(c);
    return from_quadrature(integrate_unit_interval(UnitIntegrand(integrand), opt.quad), id, norm);
}

ExtGaussSeries::ExtGaussSeries(ComplexMatrix b, ComplexMatrix c, ComplexMatrix x, SeriesConfig series,
                               QuadratureConfig quad)
    : b_(std::move(b)),
      c_(std::move(c)),
      x_(std::move(x)),
      series_(series),
      moments_(b_, c_ - b_, x_, quad, moment_guess(0.5, series)),
      normalizer_(gamma_normalizer(c_, b_))
{
}

EvalResult ExtGaussSeries::operator()(const ComplexMatrix& a, Complex z)
{
    if (!(std::abs(z) < 1.0))
        throw DomainError("ext_gauss requires |z| < 1");
    ScaledPochhammer poch(a, z);
    auto shell = [&](int m) -> ComplexMatrix {
        const auto k = static_cast<std::size_t>(m);
        return poch[k] * moments_[k];
    };
    SeriesOutcome s = sum_shells(shell, a.rows(), series_, "ext_gauss");
    EvalResult res;
    res.value = s.sum * normalizer_;
    res.error_estimate = (s.last_shell + moments_.error_estimate()) * frobenius(normalizer_);
    res.method = Method::series;
    res.terms = s.shells;
    return res;
}

EvalResult eval_ext_gauss(const HyperParams& p, const EvalPoint& pt, const EvalOptions& opt)
{
    check_hypotheses(HyperFunction::ext_gauss, p, pt, opt);
    const ComplexMatrix& a = *p.A;
    const ComplexMatrix& b = *p.B;
    const ComplexMatrix& c = *p.C;
    const Eigen::Index r = a.rows();
    ComplexMatrix xs;
    const ComplexMatrix& x = x_or_zero(p, r, xs);

    if (opt.method == Method::series) {
        ExtGaussSeries series(b, c, x, opt.series, opt.quad);
        return series(a, pt.z);
    }

    const ComplexMatrix id = identity(r);
    const ExpPlan neg_a(-a);
    const ExpPlan left(b - id);
    const ExpPlan right(c - b - id);
    const ExpPlan damp(x);
    const double floor = damping_floor(x);
    const Complex z = pt.z;
    auto integrand = [&](UnitNode n) -> ComplexMatrix {
        bool vanished = false;
        const ComplexMatrix e = damping(damp, floor, 1.0 / (n.u * n.complement), r, vanished);
        if (vanished)
            return e;
        const Complex base = (1.0 - z) + z * n.complement;
        return neg_a.pow(base) * left.pow_from_log(std::log(n.u)) * right.pow_from_log(std::log(n.complement)) * e;
    };
    return from_quadrature(integrate_unit_interval(UnitIntegrand(integrand), opt.quad), id, gamma_normalizer(c, b));
}

EvalResult eval_ext_kummer(const HyperParams& p, const EvalPoint& pt, const EvalOptions& opt)
{
    check_hypotheses(HyperFunction::ext_kummer, p, pt, opt);
    const ComplexMatrix& b = *p.B;
    const ComplexMatrix& c = *p.C;
    const Eigen::Index r = b.rows();
    ComplexMatrix xs;
    const ComplexMatrix& x = x_or_zero(p, r, xs);
    const ComplexMatrix norm = gamma_normalizer(c, b);

    if (opt.method == Method::series) {
        // entire in z: terms decay once m exceeds |z|
        const auto guess = static_cast<std::size_t>(std::ceil(std::exp(1.0) * std::abs(pt.z))) + 30;
        ExtendedBetaMoments moments(b, c - b, x, opt.quad,
                                    std::min<std::size_t>(guess, opt.series.max_total_degree + 1));
        Complex coef = 1.0;
        auto shell = [&](int m) -> ComplexMatrix {
            if (m > 0)
                coef *= pt.z / static_cast<double>(m);
            return coef * moments[static_cast<std::size_t>(m)];
        };
        SeriesOutcome s = sum_shells(shell, r, opt.series, "ext_kummer");
        EvalResult res;
        res.value = s.sum * norm;
        res.error_estimate = (s.last_shell + moments.error_estimate()) * frobenius(norm);
        res.terms = s.shells;
        return res;
    }

    const ComplexMatrix id = identity(r);
    const ExpPlan left(b - id);
    const ExpPlan right(c - b - id);
    const ExpPlan damp(x);
    const double floor = damping_floor(x);
    const bool kernel = opt.kummer == KummerKernel::with_exponential;
    const Complex z = pt.z;
    auto integrand = [&](UnitNode n) -> ComplexMatrix {
        bool vanished = false;
        const ComplexMatrix e = damping(damp, floor, 1.0 / (n.u * n.complement), r, vanished);
        if (vanished)
            return e;
        ComplexMatrix m = left.pow_from_log(std::log(n.u)) * right.pow_from_log(std::log(n.complement)) * e;
        if (kernel)
            m *= std::exp(z * n.u);
        return m;
    };
    return from_quadrature(integrate_unit_interval(UnitIntegrand(integrand), opt.quad), id, norm);
}

namespace {

// Shared by F1 (two factors) and F_D^(3) (three factors).
EvalResult appell_type_series(const HyperParams& p, std::initializer_list<std::pair<Role, Complex>> factors,
                              const EvalOptions& opt, const char* what)
{
    const ComplexMatrix& a = *p.A;
    const ComplexMatrix& c = *p.C;
    const Eigen::Index r = a.rows();
    ComplexMatrix xs;
    const ComplexMatrix& x = x_or_zero(p, r, xs);
    double rho = 0.0;
    for (const auto& f : factors)
        rho = std::max(rho, std::abs(f.second));
    ExtendedBetaMoments moments(a, c - a, x, opt.quad, moment_guess(rho, opt.series));

    std::vector<ScaledPochhammer> poch;
    for (const auto& f : factors)
        poch.emplace_back(p.require(f.first), f.second);

    // conv[j][k]: sum over index splits of the trailing factors j.. with total degree k,
    // products taken left to right in the defining order.
    const std::size_t nf = poch.size();
    std::vector<std::vector<ComplexMatrix>> conv(nf);
    auto trailing = [&](auto&& self, std::size_t j, std::size_t k) -> const ComplexMatrix& {
        auto& table = conv[j];
        while (table.size() <= k) {
            const std::size_t deg = table.size();
            if (j + 1 == nf) {
                table.push_back(poch[j][deg]);
            } else {
                ComplexMatrix acc = zeros(r);
                for (std::size_t m = 0; m <= deg; ++m)
                    acc += poch[j][m] * self(self, j + 1, deg - m);
                table.push_back(std::move(acc));
            }
        }
        return table[k];
    };
    auto shell = [&](int n) -> ComplexMatrix {
        const auto k = static_cast<std::size_t>(n);
        return moments[k] * trailing(trailing, 0, k);
    };
    SeriesOutcome s = sum_shells(shell, r, opt.series, what);
    const ComplexMatrix norm = gamma_normalizer(c, a);
    EvalResult res;
    res.value = norm * s.sum;
    res.error_estimate = (s.last_shell + moments.error_estimate()) * frobenius(norm);
    res.terms = s.shells;
    return res;
}

EvalResult appell_type_integral(const HyperParams& p, std::initializer_list<std::pair<Role, Complex>> factors,
                                bool damping_last, const EvalOptions& opt)
{
    const ComplexMatrix& a = *p.A;
    const ComplexMatrix& c = *p.C;
    const Eigen::Index r = a.rows();
    ComplexMatrix xs;
    const ComplexMatrix& x = x_or_zero(p, r, xs);
    const ComplexMatrix id = identity(r);
    const ExpPlan left(a - id);
    const ExpPlan right(c - a - id);
    const ExpPlan damp(x);
    const double floor = damping_floor(x);
    std::vector<std::pair<ExpPlan, Complex>> plans;
    for (const auto& f : factors)
        plans.emplace_back(ExpPlan(-p.require(f.first)), f.second);

    auto integrand = [&](UnitNode n) -> ComplexMatrix {
        bool vanished = false;
        const ComplexMatrix e = damping(damp, floor, 1.0 / (n.u * n.complement), r, vanished);
        if (vanished)
            return e;
        ComplexMatrix m = left.pow_from_log(std::log(n.u)) * right.pow_from_log(std::log(n.complement));
        if (!damping_last)
            m = m * e;
        for (const auto& [plan, arg] : plans)
            if (arg != Complex(0.0, 0.0))
                m = m * plan.pow(1.0 - arg * n.u);
        if (damping_last)
            m = m * e;
        return m;
    };
    return from_quadrature(integrate_unit_interval(UnitIntegrand(integrand), opt.quad), gamma_normalizer(c, a), id);
}

} // namespace

EvalResult eval_ext_appell_f1(const HyperParams& p, const EvalPoint& pt, const EvalOptions& opt)
{
    check_hypotheses(HyperFunction::ext_appell_f1, p, pt, opt);
    if (opt.method == Method::series)
        return appell_type_series(p, {{Role::B, pt.z}, {Role::Bp, pt.w}}, opt, "ext_appell_f1");
    return appell_type_integral(p, {{Role::B, pt.z}, {Role::Bp, pt.w}}, true, opt);
}

EvalResult eval_ext_lauricella_fd3(const HyperParams& p, const EvalPoint& pt, const EvalOptions& opt)
{
    check_hypotheses(HyperFunction::ext_lauricella_fd3, p, pt, opt);
    if (opt.method == Method::series)
        return appell_type_series(p, {{Role::B, pt.z}, {Role::Bp, pt.w}, {Role::Bpp, pt.v}}, opt,
                                  "ext_lauricella_fd3");
    return appell_type_integral(p, {{Role::B, pt.z}, {Role::Bp, pt.w}, {Role::Bpp, pt.v}}, false, opt);
}

EvalResult eval_ext_appell_f2(const HyperParams& p, const EvalPoint& pt, const EvalOptions& opt)
{
    check_hypotheses(HyperFunction::ext_appell_f2, p, pt, opt);
    const ComplexMatrix& a = *p.A;
    const ComplexMatrix& b = *p.B;
    const ComplexMatrix& bp = *p.Bp;
    const ComplexMatrix& c = *p.C;
    const ComplexMatrix& cp = *p.Cp;
    const Eigen::Index r = a.rows();
    ComplexMatrix xs;
    const ComplexMatrix& x = x_or_zero(p, r, xs);
    const ComplexMatrix id = identity(r);
    const ComplexMatrix norm = gamma_matrix(c) * gamma_matrix(cp) * gamma_inverse(b) * gamma_inverse(bp) *
                               gamma_inverse(c - b) * gamma_inverse(cp - bp);

    if (opt.method == Method::series) {
        const double rho = std::abs(pt.z) + std::abs(pt.w);
        ExtendedBetaMoments mu(b, c - b, x, opt.quad, moment_guess(rho, opt.series));
        ExtendedBetaMoments mv(bp, cp - bp, x, opt.quad, moment_guess(rho, opt.series));
        const int cap = opt.series.max_total_degree;
        const std::vector<Complex> zp = powers(pt.z, cap);
        const std::vector<Complex> wp = powers(pt.w, cap);
        ComplexMatrix ahat = id; // (A)_N / N!
        auto shell = [&](int n) -> ComplexMatrix {
            if (n > 0)
                ahat = ahat * (a + (n - 1.0) * id) / static_cast<double>(n);
            ComplexMatrix inner = zeros(r);
            double binom = 1.0;
            for (int m = 0; m <= n; ++m) {
                const Complex coef = binom * zp[static_cast<std::size_t>(m)] * wp[static_cast<std::size_t>(n - m)];
                if (coef != Complex(0.0, 0.0))
                    inner += coef * (mu[static_cast<std::size_t>(m)] * mv[static_cast<std::size_t>(n - m)]);
                binom = binom * (n - m) / (m + 1.0);
            }
            return ahat * inner;
        };
        SeriesOutcome s = sum_shells(shell, r, opt.series, "ext_appell_f2");
        EvalResult res;
        res.value = s.sum * norm;
        res.error_estimate = (s.last_shell + mu.error_estimate() + mv.error_estimate()) * frobenius(norm);
        res.terms = s.shells;
        return res;
    }

    const ExpPlan neg_a(-a);
    const ExpPlan bl(b - id), br(c - b - id);
    const ExpPlan bpl(bp - id), bpr(cp - bp - id);
    const ExpPlan damp(x);
    const double floor = damping_floor(x);
    // One-variable factors are cached per abscissa: the tensor rule revisits each one
    // once per node of the other axis.
    struct Cache {
        std::vector<std::pair<double, ComplexMatrix>> entries;
        const ComplexMatrix* find(double u) const
        {
            auto it = std::lower_bound(entries.begin(), entries.end(), u,
                                       [](const auto& e, double key) { return e.first < key; });
            return (it != entries.end() && it->first == u) ? &it->second : nullptr;
        }
        const ComplexMatrix& insert(double u, ComplexMatrix m)
        {
            auto it = std::lower_bound(entries.begin(), entries.end(), u,
                                       [](const auto& e, double key) { return e.first < key; });
            return entries.insert(it, {u, std::move(m)})->second;
        }
    };
    Cache cu, cv;
    auto factor = [&](Cache& cache, const ExpPlan& l, const ExpPlan& rt, UnitNode n) -> const ComplexMatrix& {
        if (const ComplexMatrix* hit = cache.find(n.u))
            return *hit;
        bool vanished = false;
        const ComplexMatrix e = damping(damp, floor, 1.0 / (n.u * n.complement), r, vanished);
        if (vanished)
            return cache.insert(n.u, e);
        return cache.insert(n.u, l.pow_from_log(std::log(n.u)) * rt.pow_from_log(std::log(n.complement)) * e);
    };
    const Complex z = pt.z, w = pt.w;
    auto integrand = [&](UnitNode nu, UnitNode nv) -> ComplexMatrix {
        const ComplexMatrix& fu = factor(cu, bl, br, nu);
        const ComplexMatrix& fv = factor(cv, bpl, bpr, nv);
        if (is_zero(fu) || is_zero(fv))
            return zeros(r);
        // exp(-X s_u - X s_v) = exp(-X s_u) exp(-X s_v): the factors commute with each other
        return neg_a.pow(1.0 - z * nu.u - w * nv.u) * fu * fv;
    };
    return from_quadrature(integrate_unit_square(SquareIntegrand(integrand), opt.quad), id, norm);
}

EvalResult evaluate(HyperFunction f, const HyperParams& p, const EvalPoint& pt, const EvalOptions& opt)
{
    switch (f) {
    case HyperFunction::gauss_2f1: return eval_gauss_2f1(p, pt, opt);
    case HyperFunction::ext_gauss: return eval_ext_gauss(p, pt, opt);
    case HyperFunction::ext_kummer: return eval_ext_kummer(p, pt, opt);
    case HyperFunction::ext_appell_f1: return eval_ext_appell_f1(p, pt, opt);
    case HyperFunction::ext_appell_f2: return eval_ext_appell_f2(p, pt, opt);
    case HyperFunction::ext_lauricella_fd3: return eval_ext_lauricella_fd3(p, pt, opt);
    }
    throw DomainError("unknown function");
}

} // namespace hypermat
