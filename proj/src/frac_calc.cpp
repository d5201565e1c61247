#include "hypermat/frac_calc.hpp"

#include <cmath>

#include "hypermat/hypotheses.hpp"

namespace hypermat {

namespace {

// exp(-s X) is zero to double precision once s beta(X) passes this.
constexpr double kDampingCutoff = 700.0;

ComplexMatrix damping_or_zero(const FracOrder& order, Eigen::Index r)
{
    if (order.X.size() == 0)
        return zeros(r);
    if (order.X.rows() != r)
        throw DomainError("X has the wrong dimension for the integrand");
    return order.X;
}

Complex gap(const FracOrder& order)
{
    // mu - lambda for pairs; -nu in general
    return -order.effective();
}

ComplexMatrix prefactor(const ComplexMatrix& a, const FracOrder& order, Complex z)
{
    const ComplexMatrix id = identity(a.rows());
    const Complex g = gap(order);
    return gamma_matrix(a) * gamma_inverse(a + g * id) * mat_complex_power(a + (g - 1.0) * id, z);
}

void require_pair(const FracOrder& order)
{
    if (!order.lambda)
        throw DomainError("this transform needs the pair (lambda, mu)");
    order.validate();
}

EvalOptions eval_options(const FracOptions& opt)
{
    EvalOptions e;
    e.series = opt.series;
    e.quad = opt.quad;
    return e;
}

} // namespace

void FracOrder::validate() const
{
    if (lambda) {
        if (!(mu.real() > lambda->real() && lambda->real() > 0.0))
            throw HypothesisError("Re(mu) > Re(lambda) > 0", "");
    } else if (!(mu.real() < 0.0)) {
        throw HypothesisError("Re(mu) < 0", "");
    }
    if (X.size() != 0) {
        require_finite(X, "X");
        require_positive_stable_or_zero(X, "X");
    }
}

QuadratureResult ext_rl_derivative(const SegmentFunction& f, const FracOrder& order, Complex z,
                                   const QuadratureConfig& cfg)
{
    order.validate();
    if (z == Complex(0.0, 0.0))
        throw DomainError("fractional derivative needs z != 0");
    const Complex nu = order.effective();
    const Complex log_z = principal_log(z, "fractional derivative argument");

    // Dimension from one evaluation away from the endpoints.
    const Eigen::Index r = f(0.5 * z).rows();
    const ComplexMatrix x = damping_or_zero(order, r);
    const ExpPlan damp(x);
    const double floor = damp.zero() ? 0.0 : stability(x).beta;
    const Complex kernel_exp = -nu - 1.0;

    auto integrand = [&](UnitNode n) -> ComplexMatrix {
        const double s = 1.0 / (n.u * n.complement);
        if (floor > 0.0 && s * floor > kDampingCutoff)
            return zeros(r);
        ComplexMatrix v = f(z * n.u) * std::exp(kernel_exp * std::log(n.complement));
        if (!damp.zero())
            v = v * damp.exp_times(Complex(-s, 0.0));
        return v;
    };
    QuadratureResult res = integrate_unit_interval(UnitIntegrand(integrand), cfg);
    const Complex scale = std::exp(-nu * log_z) * rgamma_scalar(-nu);
    res.value *= scale;
    res.error_estimate *= std::abs(scale);
    return res;
}

ComplexMatrix frac_power_rule(const ComplexMatrix& a, const FracOrder& order, Complex z)
{
    order.validate();
    require_positive_stable(a, "A");
    const Eigen::Index r = a.rows();
    const ComplexMatrix id = identity(r);
    const Complex nu = order.effective();
    const ComplexMatrix x = damping_or_zero(order, r);
    const ComplexMatrix beta = extended_beta(a + id, -nu * id, x).value;
    return mat_complex_power(a - nu * id, z) * beta * rgamma_scalar(-nu);
}

ComplexMatrix frac_transform_gauss(const ComplexMatrix& a, const ComplexMatrix& b, const FracOrder& order,
                                   Complex z, const FracOptions& opt)
{
    require_pair(order);
    const Eigen::Index r = a.rows();
    HyperParams p;
    p.A = b;
    p.B = a;
    p.C = a + gap(order) * identity(r);
    p.X = damping_or_zero(order, r);
    return prefactor(a, order, z) * eval_ext_gauss(p, {z, 0.0, 0.0}, eval_options(opt)).value;
}

ComplexMatrix frac_transform_f1(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& bp,
                                const FracOrder& order, Complex sa, Complex sb, Complex z, const FracOptions& opt)
{
    require_pair(order);
    const Eigen::Index r = a.rows();
    HyperParams p;
    p.A = a;
    p.B = b;
    p.Bp = bp;
    p.C = a + gap(order) * identity(r);
    p.X = damping_or_zero(order, r);
    return prefactor(a, order, z) * eval_ext_appell_f1(p, {sa * z, sb * z, 0.0}, eval_options(opt)).value;
}

ComplexMatrix frac_transform_fd3(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& bp,
                                 const ComplexMatrix& bpp, const FracOrder& order, Complex sa, Complex sb,
                                 Complex sc, Complex z, const FracOptions& opt)
{
    require_pair(order);
    const Eigen::Index r = a.rows();
    HyperParams p;
    p.A = a;
    p.B = b;
    p.Bp = bp;
    p.Bpp = bpp;
    p.C = a + gap(order) * identity(r);
    p.X = damping_or_zero(order, r);
    return prefactor(a, order, z) *
           eval_ext_lauricella_fd3(p, {sa * z, sb * z, sc * z}, eval_options(opt)).value;
}

QuadratureResult frac_operator_gauss(const ComplexMatrix& a, const ComplexMatrix& b, const FracOrder& order,
                                     Complex z, const FracOptions& opt)
{
    require_pair(order);
    const ExpPlan pa(a - identity(a.rows()));
    const ExpPlan pb(-b);
    return ext_rl_derivative([&](Complex t) { return ComplexMatrix(pa.pow(t) * pb.pow(1.0 - t)); }, order, z,
                             opt.quad);
}

QuadratureResult frac_operator_f1(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& bp,
                                  const FracOrder& order, Complex sa, Complex sb, Complex z, const FracOptions& opt)
{
    require_pair(order);
    const ExpPlan pa(a - identity(a.rows()));
    const ExpPlan pb(-b);
    const ExpPlan pbp(-bp);
    return ext_rl_derivative(
        [&](Complex t) { return ComplexMatrix(pa.pow(t) * pb.pow(1.0 - sa * t) * pbp.pow(1.0 - sb * t)); }, order,
        z, opt.quad);
}

QuadratureResult frac_operator_fd3(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& bp,
                                   const ComplexMatrix& bpp, const FracOrder& order, Complex sa, Complex sb,
                                   Complex sc, Complex z, const FracOptions& opt)
{
    require_pair(order);
    const ExpPlan pa(a - identity(a.rows()));
    const ExpPlan pb(-b);
    const ExpPlan pbp(-bp);
    const ExpPlan pbpp(-bpp);
    return ext_rl_derivative(
        [&](Complex t) {
            return ComplexMatrix(pa.pow(t) * pb.pow(1.0 - sa * t) * pbp.pow(1.0 - sb * t) * pbpp.pow(1.0 - sc * t));
        },
        order, z, opt.quad);
}

F2TransformReport frac_transform_f2(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& bp,
                                    const ComplexMatrix& c, const FracOrder& order, Complex x, Complex z,
                                    const FracOptions& opt)
{
    require_pair(order);
    if (!(std::abs(x) + std::abs(z) < 1.0))
        throw DomainError("F2 transform requires |x| + |z| < 1");
    const Eigen::Index r = a.rows();
    const ComplexMatrix id = identity(r);
    const ComplexMatrix xm = damping_or_zero(order, r);
    const Complex g = gap(order);

    // Operator side, with F^(X)(A, B; C; .) evaluated from cached moments at every node.
    ExtGaussSeries inner(b, c, xm, opt.series, opt.quad);
    const ExpPlan pbp(bp - id);
    const ExpPlan pa(-a);
    F2TransformReport rep;
    rep.lhs = ext_rl_derivative(
                  [&](Complex t) {
                      const Complex one_minus_t = 1.0 - t;
                      return ComplexMatrix(pbp.pow(t) * pa.pow(one_minus_t) * inner(a, x / one_minus_t).value);
                  },
                  order, z, opt.quad)
                  .value;

    const ComplexMatrix lead = mat_complex_power(bp + (g - 1.0) * id, z) * rgamma_scalar(g);
    const ComplexMatrix tail = gamma_normalizer(c, b);
    const EvalOptions eo = eval_options(opt);
    auto f2 = [&](const ComplexMatrix& cp) {
        HyperParams p;
        p.A = a;
        p.B = b;
        p.Bp = bp;
        p.C = c;
        p.Cp = cp;
        p.X = xm;
        return eval_ext_appell_f2(p, {x, z, 0.0}, eo).value;
    };
    rep.rhs_mu = lead * f2(order.mu * id) * tail;
    rep.rhs_variant = lead * f2(g * id) * tail;
    const ComplexMatrix cp = bp + g * id;
    rep.rhs_termwise = lead * f2(cp) * gamma_inverse(cp) * gamma_matrix(bp) * gamma_scalar(g);
    rep.residual_mu = relative_residual(rep.lhs, rep.rhs_mu);
    rep.residual_variant = relative_residual(rep.lhs, rep.rhs_variant);
    rep.residual_termwise = relative_residual(rep.lhs, rep.rhs_termwise);
    return rep;
}

} // namespace hypermat
