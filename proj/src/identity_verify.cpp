#include "hypermat/identity_verify.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>
#include <utility>

#include "json.hpp"

#include "hypermat/frac_calc.hpp"
#include "hypermat/gamma_beta.hpp"
#include "rng.hpp"
#include "scalar_reference.hpp"

namespace hypermat {

namespace {

struct IdentityInfo {
    IdentityId id;
    std::string_view name;
    double tolerance;
    bool probe;
};

constexpr std::array<IdentityInfo, 17> kIdentities = {{
    {IdentityId::THM_3_1, "THM_3_1", 1e-6, false},
    {IdentityId::THM_3_2, "THM_3_2", 1e-6, false},
    {IdentityId::THM_3_3, "THM_3_3", 1e-6, false},
    {IdentityId::THM_4_2, "THM_4_2", 1e-7, false},
    {IdentityId::THM_4_3, "THM_4_3", 1e-7, false},
    {IdentityId::THM_4_4, "THM_4_4", 1e-7, false},
    {IdentityId::THM_4_5, "THM_4_5", 1e-7, false},
    {IdentityId::THM_4_6, "THM_4_6", 1e-6, true},
    {IdentityId::THM_4_6_VARIANT, "THM_4_6_VARIANT", 1e-6, true},
    {IdentityId::THM_5_1, "THM_5_1", 1e-6, false},
    {IdentityId::THM_5_2, "THM_5_2", 1e-6, false},
    {IdentityId::EQ_2_5, "EQ_2_5", 1e-10, false},
    {IdentityId::EQ_2_6, "EQ_2_6", 1e-9, false},
    {IdentityId::X_ZERO_REDUCTIONS, "X_ZERO_REDUCTIONS", 1e-8, false},
    {IdentityId::SCALAR_REDUCTION, "SCALAR_REDUCTION", 1e-9, false},
    {IdentityId::EQ_2_14_PROBE, "EQ_2_14_PROBE", 1e-6, true},
    {IdentityId::B_FACTORIZATION_PROBE, "B_FACTORIZATION_PROBE", 1e-6, true},
}};

const IdentityInfo& info(IdentityId id)
{
    for (const auto& i : kIdentities)
        if (i.id == id)
            return i;
    throw DomainError("unknown identity");
}

using detail::Rng;

// Identities whose statement is scalar-only run at r = 1 regardless of the request.
bool scalar_only(IdentityId id)
{
    return id == IdentityId::SCALAR_REDUCTION || id == IdentityId::B_FACTORIZATION_PROBE;
}

// ---- argument sampling ----

Complex sample_disc(Rng& rng, double radius)
{
    const double rho = radius * std::sqrt(rng.uniform());
    const double theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
    return std::polar(rho, theta);
}

// Uniform in the disc of the given radius, rejecting the outer 0.05 band.
Complex sample_inside(Rng& rng, double radius)
{
    for (;;) {
        const Complex z = sample_disc(rng, radius);
        if (std::abs(z) <= radius - 0.05)
            return z;
    }
}

// Nonzero and away from the branch cut of the principal logarithm.
Complex sample_segment_end(Rng& rng, double lo, double hi)
{
    const double rho = rng.uniform(lo, hi);
    const double theta = rng.uniform(-0.75, 0.75) * std::numbers::pi;
    return std::polar(rho, theta);
}

Complex sample_order_gap(Rng& rng)
{
    return {rng.uniform(0.4, 1.5), rng.uniform(-0.1, 0.1)};
}

// ---- family layouts ----

std::vector<RoleSpec> layout_for(IdentityId id)
{
    std::vector<RoleSpec> roles = default_role_layout();
    if (id == IdentityId::THM_4_6 || id == IdentityId::THM_4_6_VARIANT) {
        for (auto& spec : roles)
            if (spec.role == "B'")
                spec.window = {0.3, 0.8};
    }
    return roles;
}

struct Outcome {
    std::vector<EvalPoint> points;
    std::vector<double> residuals;
};

EvalOptions options(const VerifyConfig& cfg, Method m)
{
    EvalOptions o;
    o.method = m;
    o.series = cfg.series;
    o.quad = cfg.quad;
    return o;
}

FracOptions frac_options(const VerifyConfig& cfg)
{
    return {cfg.series, cfg.quad};
}

// Every fifth family drops the damping matrix, exercising the X = O limit.
ComplexMatrix damping_for(const CommutingFamily& fam, int index)
{
    if (index % 5 == 4)
        return zeros(fam.r);
    return fam.at("X");
}

// ---- per-identity checks (one family) ----

void check_cross_method(HyperFunction f, const CommutingFamily& fam, int index, Rng& rng, const VerifyConfig& cfg,
                        Outcome& out)
{
    HyperParams p = HyperParams::from_family(fam);
    p.X = damping_for(fam, index);
    for (int k = 0; k < cfg.points_per_family; ++k) {
        EvalPoint pt;
        switch (f) {
        case HyperFunction::gauss_2f1:
        case HyperFunction::ext_gauss:
            pt.z = sample_inside(rng, 0.5);
            break;
        case HyperFunction::ext_kummer:
            pt.z = sample_disc(rng, 1.0);
            break;
        case HyperFunction::ext_appell_f1:
            pt.z = sample_inside(rng, 0.5);
            pt.w = sample_inside(rng, 0.5);
            break;
        case HyperFunction::ext_lauricella_fd3:
            pt.z = sample_inside(rng, 0.5);
            pt.w = sample_inside(rng, 0.5);
            pt.v = sample_inside(rng, 0.5);
            break;
        case HyperFunction::ext_appell_f2:
            do {
                pt.z = sample_disc(rng, 0.5);
                pt.w = sample_disc(rng, 0.5);
            } while (std::abs(pt.z) + std::abs(pt.w) > 0.45);
            break;
        }
        const EvalResult s = evaluate(f, p, pt, options(cfg, Method::series));
        const EvalResult q = evaluate(f, p, pt, options(cfg, Method::integral));
        out.points.push_back(pt);
        out.residuals.push_back(relative_residual(s.value, q.value));
    }
}

FracOrder sample_pair(Rng& rng, const ComplexMatrix& x)
{
    FracOrder o;
    o.lambda = Complex(rng.uniform(0.2, 0.6), rng.uniform(-0.1, 0.1));
    o.mu = *o.lambda + sample_order_gap(rng);
    o.X = x;
    return o;
}

void check_frac(IdentityId id, const CommutingFamily& fam, int index, Rng& rng, const VerifyConfig& cfg, Outcome& out)
{
    const ComplexMatrix x = damping_for(fam, index);
    const ComplexMatrix& a = fam.at("A");
    const FracOptions fo = frac_options(cfg);
    for (int k = 0; k < cfg.points_per_family; ++k) {
        EvalPoint pt;
        ComplexMatrix lhs, rhs;
        if (id == IdentityId::THM_4_2) {
            FracOrder o;
            o.mu = Complex(rng.uniform(-1.5, -0.2), rng.uniform(-0.3, 0.3));
            o.X = x;
            pt.z = sample_segment_end(rng, 0.1, 0.95);
            const ExpPlan power(a);
            lhs = ext_rl_derivative([&](Complex t) { return ComplexMatrix(power.pow(t)); }, o, pt.z, cfg.quad).value;
            rhs = frac_power_rule(a, o, pt.z);
        } else {
            const FracOrder o = sample_pair(rng, x);
            pt.z = sample_segment_end(rng, 0.05, 0.45);
            const ComplexMatrix& b = fam.at("B");
            if (id == IdentityId::THM_4_3) {
                lhs = frac_operator_gauss(a, b, o, pt.z, fo).value;
                rhs = frac_transform_gauss(a, b, o, pt.z, fo);
            } else if (id == IdentityId::THM_4_4) {
                pt.w = sample_disc(rng, 1.0);
                pt.v = sample_disc(rng, 1.0);
                lhs = frac_operator_f1(a, b, fam.at("B'"), o, pt.w, pt.v, pt.z, fo).value;
                rhs = frac_transform_f1(a, b, fam.at("B'"), o, pt.w, pt.v, pt.z, fo);
            } else {
                // the scalars a, b ride in (w, v); c is not recorded
                pt.w = sample_disc(rng, 1.0);
                pt.v = sample_disc(rng, 1.0);
                const Complex sc = sample_disc(rng, 1.0);
                lhs = frac_operator_fd3(a, b, fam.at("B'"), fam.at("B''"), o, pt.w, pt.v, sc, pt.z, fo).value;
                rhs = frac_transform_fd3(a, b, fam.at("B'"), fam.at("B''"), o, pt.w, pt.v, sc, pt.z, fo);
            }
        }
        out.points.push_back(pt);
        out.residuals.push_back(relative_residual(lhs, rhs));
    }
}

void check_thm_4_6(bool variant, const CommutingFamily& fam, int index, Rng& rng, const VerifyConfig& cfg,
                   Outcome& out)
{
    const ComplexMatrix x = damping_for(fam, index);
    for (int k = 0; k < cfg.points_per_family; ++k) {
        FracOrder o;
        o.lambda = rng.uniform(0.2, 0.5);
        o.mu = rng.uniform(1.5, 2.0);
        o.X = x;
        EvalPoint pt;
        do {
            pt.w = sample_disc(rng, 0.5); // x
            pt.z = sample_segment_end(rng, 0.05, 0.45);
        } while (std::abs(pt.w) + std::abs(pt.z) > 0.45);
        const F2TransformReport rep =
            frac_transform_f2(fam.at("A"), fam.at("B"), fam.at("B'"), fam.at("C"), o, pt.w, pt.z, frac_options(cfg));
        out.points.push_back(pt);
        out.residuals.push_back(variant ? rep.residual_variant : rep.residual_mu);
    }
}

// Sums shells term(n) until three successive ones fall below term_tol (1 + ||sum||).
template <class Term>
ComplexMatrix sum_generating(Term&& term, Eigen::Index r, const SeriesConfig& sc)
{
    ComplexMatrix sum = zeros(r);
    int small = 0;
    double last = 0.0;
    for (int n = 0; n <= sc.max_total_degree; ++n) {
        const ComplexMatrix t = term(n);
        sum += t;
        last = frobenius(t);
        if (last < sc.term_tol * (1.0 + frobenius(sum))) {
            if (++small >= sc.consecutive_small)
                return sum;
        } else {
            small = 0;
        }
    }
    throw NumericalError("generating series not converged", last);
}

void check_generating(IdentityId id, const CommutingFamily& fam, int index, Rng& rng, const VerifyConfig& cfg,
                      Outcome& out)
{
    const ComplexMatrix x = damping_for(fam, index);
    const ComplexMatrix& a = fam.at("A");
    const ComplexMatrix& b = fam.at("B");
    const Eigen::Index r = a.rows();
    const ComplexMatrix eye = identity(r);
    for (int k = 0; k < cfg.points_per_family; ++k) {
        const FracOrder o = sample_pair(rng, x);
        const Complex g = o.mu - *o.lambda;
        EvalPoint pt;
        pt.z = sample_disc(rng, 0.3);
        pt.w = sample_disc(rng, 0.2); // t
        const Complex t = pt.w;
        ComplexMatrix lhs, rhs;
        if (id == IdentityId::THM_5_1) {
            ExtGaussSeries f(b, b + g * eye, x, cfg.series, cfg.quad);
            ComplexMatrix coef = eye; // (A)_n t^n / n!
            lhs = sum_generating(
                [&](int n) {
                    if (n > 0)
                        coef = coef * (a + (n - 1.0) * eye) * (t / static_cast<double>(n));
                    return ComplexMatrix(coef * f(a + static_cast<double>(n) * eye, pt.z).value);
                },
                r, cfg.series);
            rhs = mat_neg_power(a, t) * f(a, pt.z / (1.0 - t)).value;
        } else {
            const ComplexMatrix& bp = fam.at("B'");
            ExtGaussSeries f(a, a + g * eye, x, cfg.series, cfg.quad);
            ComplexMatrix coef = eye; // (B')_n t^n / n!
            lhs = sum_generating(
                [&](int n) {
                    if (n > 0)
                        coef = coef * (bp + (n - 1.0) * eye) * (t / static_cast<double>(n));
                    return ComplexMatrix(coef * f(b - static_cast<double>(n) * eye, pt.z).value);
                },
                r, cfg.series);
            HyperParams p;
            p.A = a;
            p.B = b;
            p.Bp = bp;
            p.C = a + g * eye;
            p.X = x;
            rhs = mat_neg_power(bp, t) *
                  eval_ext_appell_f1(p, {pt.z, -pt.z * t / (1.0 - t), 0.0}, options(cfg, Method::series)).value;
        }
        out.points.push_back(pt);
        out.residuals.push_back(relative_residual(lhs, rhs));
    }
}

void check_kernels(IdentityId id, const CommutingFamily& fam, Rng& rng, const VerifyConfig& cfg, Outcome& out)
{
    const ComplexMatrix& a = fam.at("A");
    const ComplexMatrix& b = fam.at("B");
    if (id == IdentityId::EQ_2_5) {
        for (int k = 0; k < cfg.points_per_family; ++k) {
            const int n = 1 + static_cast<int>(rng.uniform() * 8.0);
            const ComplexMatrix rhs = gamma_inverse(a) * gamma_matrix(a + static_cast<double>(n) * identity(a.rows()));
            out.points.push_back({Complex(n, 0.0), 0.0, 0.0});
            out.residuals.push_back(relative_residual(pochhammer(a, n), rhs));
        }
        return;
    }
    // EQ_2_6
    out.points.push_back({});
    out.residuals.push_back(relative_residual(beta_matrix(a, b, cfg.quad), beta_matrix_gamma_form(a, b)));
}

void check_x_zero(const CommutingFamily& fam, Rng& rng, const VerifyConfig& cfg, Outcome& out)
{
    const Eigen::Index r = fam.r;
    const ComplexMatrix o = zeros(r);
    const ComplexMatrix& a = fam.at("A");
    const ComplexMatrix& b = fam.at("B");
    const ComplexMatrix& c = fam.at("C");
    const EvalOptions so = options(cfg, Method::series);

    // extended beta at X = O against Gamma(A) Gamma(B) Gamma^-1(A + B)
    out.points.push_back({});
    out.residuals.push_back(relative_residual(extended_beta(a, b, o, cfg.quad).value, beta_matrix_gamma_form(a, b)));

    HyperParams p = HyperParams::from_family(fam);
    for (int k = 0; k < cfg.points_per_family; ++k) {
        EvalPoint pt{sample_inside(rng, 0.5), sample_inside(rng, 0.5), 0.0};
        // EGHMF(X = O) = 2F1
        HyperParams g = p;
        g.X = o;
        out.points.push_back(pt);
        out.residuals.push_back(
            relative_residual(eval_ext_gauss(g, pt, so).value, eval_gauss_2f1(g, pt, so).value));
        // FD3(v = 0) = F1
        out.points.push_back(pt);
        out.residuals.push_back(
            relative_residual(eval_ext_lauricella_fd3(p, pt, so).value, eval_ext_appell_f1(p, pt, so).value));
        // F1(w = 0) = EGHMF(B, A; C; z)
        HyperParams swapped;
        swapped.A = b;
        swapped.B = a;
        swapped.C = c;
        swapped.X = p.X;
        const EvalPoint on_axis{pt.z, 0.0, 0.0};
        out.points.push_back(on_axis);
        out.residuals.push_back(relative_residual(eval_ext_appell_f1(p, on_axis, so).value,
                                                  eval_ext_gauss(swapped, on_axis, so).value));
    }
}

double re(const ComplexMatrix& m)
{
    return m(0, 0).real();
}

double scalar_residual(Complex lhs, Complex rhs)
{
    return std::abs(lhs - rhs) / (1.0 + std::max(std::abs(lhs), std::abs(rhs)));
}

void check_scalar(const CommutingFamily& fam, int index, Rng& rng, const VerifyConfig& cfg, Outcome& out)
{
    HyperParams p = HyperParams::from_family(fam);
    p.X = damping_for(fam, index);
    const double a = re(*p.A), b = re(*p.B), bp = re(*p.Bp), bpp = re(*p.Bpp), c = re(*p.C), cp = re(*p.Cp);
    const double x = re(*p.X);

    // one point per evaluator, both methods against the scalar oracle
    EvalPoint pt{sample_inside(rng, 0.5), sample_inside(rng, 0.5), sample_inside(rng, 0.5)};
    EvalPoint f2pt;
    do {
        f2pt.z = sample_disc(rng, 0.5);
        f2pt.w = sample_disc(rng, 0.5);
    } while (std::abs(f2pt.z) + std::abs(f2pt.w) > 0.45);
    const Complex kz = sample_disc(rng, 1.0);

    struct Case {
        HyperFunction f;
        EvalPoint pt;
        Complex expected;
    };
    const std::vector<Case> cases = {
        {HyperFunction::gauss_2f1, pt, reference::gauss_2f1(a, b, c, pt.z)},
        {HyperFunction::ext_gauss, pt, reference::ext_gauss(a, b, c, x, pt.z)},
        {HyperFunction::ext_kummer, {kz, 0.0, 0.0}, reference::ext_kummer(b, c, x, kz)},
        {HyperFunction::ext_appell_f1, pt, reference::ext_appell_f1(a, b, bp, c, x, pt.z, pt.w)},
        {HyperFunction::ext_appell_f2, f2pt, reference::ext_appell_f2(a, b, bp, c, cp, x, f2pt.z, f2pt.w)},
        {HyperFunction::ext_lauricella_fd3, pt,
         reference::ext_lauricella_fd3(a, b, bp, bpp, c, x, pt.z, pt.w, pt.v)},
    };
    for (const Case& cs : cases) {
        for (Method m : {Method::series, Method::integral}) {
            const EvalResult res = evaluate(cs.f, p, cs.pt, options(cfg, m));
            out.points.push_back(cs.pt);
            out.residuals.push_back(scalar_residual(res.value(0, 0), cs.expected));
        }
    }

    // power rule against the scalar oracle
    FracOrder o;
    o.mu = rng.uniform(-1.5, -0.2);
    o.X = *p.X;
    const double z = rng.uniform(0.1, 0.95);
    out.points.push_back({z, 0.0, 0.0});
    out.residuals.push_back(
        scalar_residual(frac_power_rule(*p.A, o, z)(0, 0), reference::frac_power(a, o.mu.real(), x, z)));
}

void check_kummer_literal(const CommutingFamily& fam, int index, Rng& rng, const VerifyConfig& cfg, Outcome& out)
{
    HyperParams p = HyperParams::from_family(fam);
    p.X = damping_for(fam, index);
    EvalOptions lit = options(cfg, Method::integral);
    lit.kummer = KummerKernel::literal;
    for (int k = 0; k < cfg.points_per_family; ++k) {
        const EvalPoint pt{sample_disc(rng, 1.0), 0.0, 0.0};
        out.points.push_back(pt);
        out.residuals.push_back(relative_residual(eval_ext_kummer(p, pt, options(cfg, Method::series)).value,
                                                  eval_ext_kummer(p, pt, lit).value));
    }
}

// Gamma_x(a) = integral of t^(a-1) exp(-t - x/t) over (0, inf).
double extended_gamma(double a, double x, const QuadratureConfig& cfg)
{
    auto f = [a, x](double t) {
        ComplexMatrix m(1, 1);
        m(0, 0) = (x > 0.0 && x / t > 745.0) ? 0.0 : std::exp((a - 1.0) * std::log(t) - t - x / t);
        return m;
    };
    return re(integrate_half_line(f, cfg).value);
}

void check_b_factorization(const CommutingFamily& fam, const VerifyConfig& cfg, Outcome& out)
{
    const double a = re(fam.at("A")), b = re(fam.at("B")), x = re(fam.at("X"));
    const double lhs = re(extended_beta(fam.at("A"), fam.at("B"), fam.at("X"), cfg.quad).value);
    const double rhs = extended_gamma(a, x, cfg.quad) * extended_gamma(b, x, cfg.quad) /
                       extended_gamma(a + b, x, cfg.quad);
    out.points.push_back({});
    out.residuals.push_back(scalar_residual(lhs, rhs));
}

void check_family(IdentityId id, const CommutingFamily& fam, int index, Rng& rng, const VerifyConfig& cfg,
                  Outcome& out)
{
    switch (id) {
    case IdentityId::THM_3_1: return check_cross_method(HyperFunction::ext_appell_f1, fam, index, rng, cfg, out);
    case IdentityId::THM_3_2: return check_cross_method(HyperFunction::ext_appell_f2, fam, index, rng, cfg, out);
    case IdentityId::THM_3_3: return check_cross_method(HyperFunction::ext_lauricella_fd3, fam, index, rng, cfg, out);
    case IdentityId::THM_4_2:
    case IdentityId::THM_4_3:
    case IdentityId::THM_4_4:
    case IdentityId::THM_4_5: return check_frac(id, fam, index, rng, cfg, out);
    case IdentityId::THM_4_6: return check_thm_4_6(false, fam, index, rng, cfg, out);
    case IdentityId::THM_4_6_VARIANT: return check_thm_4_6(true, fam, index, rng, cfg, out);
    case IdentityId::THM_5_1:
    case IdentityId::THM_5_2: return check_generating(id, fam, index, rng, cfg, out);
    case IdentityId::EQ_2_5:
    case IdentityId::EQ_2_6: return check_kernels(id, fam, rng, cfg, out);
    case IdentityId::X_ZERO_REDUCTIONS: return check_x_zero(fam, rng, cfg, out);
    case IdentityId::SCALAR_REDUCTION: return check_scalar(fam, index, rng, cfg, out);
    case IdentityId::EQ_2_14_PROBE: return check_kummer_literal(fam, index, rng, cfg, out);
    case IdentityId::B_FACTORIZATION_PROBE: return check_b_factorization(fam, cfg, out);
    }
}

[[noreturn]] void rethrow_with_context(const std::string& context)
{
    try {
        throw;
    } catch (const HypothesisError& e) {
        throw HypothesisError(e.hypothesis(), context);
    } catch (const NumericalError& e) {
        throw NumericalError(context + ": " + e.what(), e.estimate());
    } catch (const DomainError& e) {
        throw DomainError(context + ": " + e.what());
    } catch (const std::exception& e) {
        throw Error(context + ": " + e.what());
    }
}

// Runs job(i) for i in [0, n) on a small pool; results land by index, so the
// outcome does not depend on scheduling. The first failure by index is rethrown.
template <class Job>
void parallel_for(int n, unsigned threads, Job&& job)
{
    unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max(n, 1)));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < n; i = next++) {
            try {
                job(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

Verdict judge(IdentityId id, const std::vector<double>& residuals, double tol)
{
    if (info(id).probe)
        return Verdict::probe_only;
    for (double r : residuals)
        if (!(r <= tol))
            return Verdict::fail;
    return Verdict::pass;
}

} // namespace

const std::vector<IdentityId>& all_identities()
{
    static const std::vector<IdentityId> ids = [] {
        std::vector<IdentityId> v;
        for (const auto& i : kIdentities)
            v.push_back(i.id);
        return v;
    }();
    return ids;
}

std::string_view identity_name(IdentityId id)
{
    return info(id).name;
}

std::optional<IdentityId> identity_from_name(std::string_view name)
{
    for (const auto& i : kIdentities)
        if (i.name == name)
            return i.id;
    return std::nullopt;
}

bool is_probe(IdentityId id)
{
    return info(id).probe;
}

double default_tolerance(IdentityId id)
{
    return info(id).tolerance;
}

std::string_view verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::probe_only: return "probe-only";
    }
    return "?";
}

VerifyReport verify_identity(IdentityId id, std::uint64_t seed, int r, int n_families, const VerifyConfig& cfg)
{
    if (r < 1 || r > 3)
        throw DomainError("verification dimension must be 1, 2 or 3");
    if (n_families < 1)
        throw DomainError("need at least one family");
    if (cfg.points_per_family < 1)
        throw DomainError("need at least one point per family");
    cfg.series.validate();
    cfg.quad.validate();
    const int dim = scalar_only(id) ? 1 : r;
    const std::vector<RoleSpec> roles = layout_for(id);
    const auto id_index = static_cast<std::uint64_t>(id);

    std::vector<Outcome> outcomes(static_cast<std::size_t>(n_families));
    parallel_for(n_families, cfg.threads, [&](int i) {
        const std::string context =
            std::string(identity_name(id)) + " r=" + std::to_string(dim) + " family " + std::to_string(i);
        try {
            CommutingFamily fam =
                random_commuting_family(detail::derive_seed(seed, id_index, static_cast<std::uint64_t>(dim),
                                                            static_cast<std::uint64_t>(i)),
                                        dim, roles);
            if (cfg.family_mutator)
                cfg.family_mutator(fam);
            Rng rng(detail::derive_seed(seed ^ 0x5eedULL, id_index, static_cast<std::uint64_t>(dim),
                                        static_cast<std::uint64_t>(i)));
            check_family(id, fam, i, rng, cfg, outcomes[static_cast<std::size_t>(i)]);
        } catch (...) {
            rethrow_with_context(context);
        }
    });

    VerifyReport rep;
    rep.id = id;
    rep.seed = seed;
    rep.r = dim;
    rep.tolerance = cfg.tolerance.value_or(default_tolerance(id));
    for (Outcome& o : outcomes) {
        rep.points.insert(rep.points.end(), o.points.begin(), o.points.end());
        rep.residuals.insert(rep.residuals.end(), o.residuals.begin(), o.residuals.end());
    }
    rep.verdict = judge(id, rep.residuals, rep.tolerance);
    return rep;
}

std::vector<double> cross_method_residuals(HyperFunction f, std::uint64_t seed, int r, int n_families,
                                           const VerifyConfig& cfg)
{
    const std::vector<RoleSpec> roles = default_role_layout();
    std::vector<Outcome> outcomes(static_cast<std::size_t>(n_families));
    parallel_for(n_families, cfg.threads, [&](int i) {
        const std::string context =
            std::string(function_name(f)) + " r=" + std::to_string(r) + " family " + std::to_string(i);
        try {
            const auto tag = 0x100ULL + static_cast<std::uint64_t>(f);
            CommutingFamily fam = random_commuting_family(
                detail::derive_seed(seed, tag, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(i)), r, roles);
            if (cfg.family_mutator)
                cfg.family_mutator(fam);
            Rng rng(detail::derive_seed(seed ^ 0x5eedULL, tag, static_cast<std::uint64_t>(r),
                                        static_cast<std::uint64_t>(i)));
            check_cross_method(f, fam, i, rng, cfg, outcomes[static_cast<std::size_t>(i)]);
        } catch (...) {
            rethrow_with_context(context);
        }
    });
    std::vector<double> out;
    for (const Outcome& o : outcomes)
        out.insert(out.end(), o.residuals.begin(), o.residuals.end());
    return out;
}

std::optional<Profile> profile_from_name(std::string_view name)
{
    if (name == "quick")
        return Profile::quick;
    if (name == "full")
        return Profile::full;
    return std::nullopt;
}

ProfileShape profile_shape(Profile p)
{
    if (p == Profile::quick)
        return {{1, 2}, 10};
    return {{1, 2, 3}, 50};
}

VerifyReport verify_profile(IdentityId id, std::uint64_t seed, Profile profile, const VerifyConfig& cfg)
{
    const ProfileShape shape = profile_shape(profile);
    VerifyReport merged;
    merged.id = id;
    merged.seed = seed;
    merged.tolerance = cfg.tolerance.value_or(default_tolerance(id));
    merged.r = 1;
    std::vector<int> dims = shape.dims;
    if (scalar_only(id))
        dims = {1};
    for (int r : dims) {
        VerifyReport part = verify_identity(id, seed, r, shape.n_families, cfg);
        merged.r = std::max(merged.r, part.r);
        merged.points.insert(merged.points.end(), part.points.begin(), part.points.end());
        merged.residuals.insert(merged.residuals.end(), part.residuals.begin(), part.residuals.end());
    }
    merged.verdict = judge(id, merged.residuals, merged.tolerance);
    return merged;
}

std::vector<VerifyReport> run_suite(std::uint64_t seed, Profile profile, const VerifyConfig& cfg)
{
    std::vector<VerifyReport> out;
    for (IdentityId id : all_identities())
        out.push_back(verify_profile(id, seed, profile, cfg));
    return out;
}

bool suite_passed(const std::vector<VerifyReport>& reports)
{
    return std::all_of(reports.begin(), reports.end(),
                       [](const VerifyReport& r) { return r.verdict != Verdict::fail; });
}

std::string report_to_json(const VerifyReport& report)
{
    nlohmann::ordered_json j;
    j["identity"] = identity_name(report.id);
    j["seed"] = report.seed;
    j["r"] = report.r;
    j["residuals"] = report.residuals;
    j["tolerance"] = report.tolerance;
    j["verdict"] = verdict_name(report.verdict);
    return j.dump();
}

} // namespace hypermat
