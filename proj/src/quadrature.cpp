#include "hypermat/quadrature.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

namespace hypermat {

namespace {

constexpr int kMaxSupportedLevel = 16;
constexpr int kMinLevel = 3;

struct Node {
    double u;          // abscissa (unit interval) or t (half line)
    double complement; // 1 - u on the unit interval, unused on the half line
    double jac;        // dx-weight before multiplying by h
};

// ---- tanh-sinh on (0, 1): u = 1 / (1 + exp(-pi sinh x)) ----

const double kTanhSinhXMax = std::asinh(700.0 / std::numbers::pi);

bool tanh_sinh_node(double x, Node& n)
{
    const double s = std::numbers::pi * std::sinh(x);
    const double e = std::exp(-std::abs(s));
    const double small = e / (1.0 + e);
    const double large = 1.0 / (1.0 + e);
    n.u = s >= 0.0 ? large : small;
    n.complement = s >= 0.0 ? small : large;
    n.jac = std::numbers::pi * std::cosh(x) * n.u * n.complement;
    return n.u > 0.0 && n.complement > 0.0 && n.jac > 0.0 && std::isfinite(n.jac);
}

// ---- exp-sinh on (0, inf): t = exp(pi/2 sinh x) ----

const double kExpSinhXMax = std::asinh(2.0 * 700.0 / std::numbers::pi);

bool exp_sinh_node(double x, Node& n)
{
    const double s = 0.5 * std::numbers::pi * std::sinh(x);
    n.u = std::exp(s);
    n.complement = 0.0;
    n.jac = 0.5 * std::numbers::pi * std::cosh(x) * n.u;
    return n.u > 0.0 && std::isfinite(n.u) && n.jac > 0.0 && std::isfinite(n.jac);
}

// Nested level tables: level 0 holds the integer multiples of h = 1, level l
// the odd multiples of 2^-l. Built once per (rule, level), read-only afterwards.
class NestedTable {
public:
    using Maker = bool (*)(double, Node&);

    NestedTable(Maker make, double xmax) : make_(make), xmax_(xmax) {}

    const std::vector<Node>& level(int l) const
    {
        std::call_once(once_[l], [this, l] { build(l); });
        return levels_[l];
    }

    static double step(int l) { return std::ldexp(1.0, -l); }

private:
    void build(int l) const
    {
        std::vector<Node>& out = levels_[l];
        const double h = step(l);
        const long kmax = static_cast<long>(std::floor(xmax_ / h));
        const long stride = l == 0 ? 1 : 2;
        const long start = l == 0 ? -kmax : -(kmax % 2 == 0 ? kmax - 1 : kmax);
        for (long k = start; k <= kmax; k += stride) {
            Node n{};
            if (make_(static_cast<double>(k) * h, n))
                out.push_back(n);
        }
    }

    Maker make_;
    double xmax_;
    mutable std::array<std::once_flag, kMaxSupportedLevel + 1> once_;
    mutable std::array<std::vector<Node>, kMaxSupportedLevel + 1> levels_;
};

const NestedTable& tanh_sinh_table()
{
    static const NestedTable table(&tanh_sinh_node, kTanhSinhXMax);
    return table;
}

const NestedTable& exp_sinh_table()
{
    static const NestedTable table(&exp_sinh_node, kExpSinhXMax);
    return table;
}

// ---- composite Gauss-Legendre: 2^l panels of an 8-point rule on (0, 1) ----

struct GaussRule {
    std::array<double, 8> x{}; // on (-1, 1)
    std::array<double, 8> w{};
};

const GaussRule& gauss8()
{
    static const GaussRule rule = [] {
        GaussRule g;
        constexpr int n = 8;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16)
                    break;
            }
            g.x[i] = x;
            g.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return g;
    }();
    return rule;
}

std::vector<Node> gauss_level(int l)
{
    const GaussRule& g = gauss8();
    const long panels = 1L << l;
    const double width = 1.0 / static_cast<double>(panels);
    std::vector<Node> nodes;
    nodes.reserve(static_cast<std::size_t>(panels) * 8);
    for (long p = 0; p < panels; ++p) {
        const double a = p * width;
        for (int i = 0; i < 8; ++i) {
            // u measured from the nearer endpoint keeps the complement exact
            const double half = 0.5 * width;
            const double u = a + half * (1.0 + g.x[i]);
            const double comp = (static_cast<double>(panels - p) * width) - half * (1.0 + g.x[i]);
            nodes.push_back({u, comp, half * g.w[i]});
        }
    }
    return nodes;
}

bool within(double delta, double value_norm, const QuadratureConfig& cfg)
{
    return delta <= std::max(cfg.atol, cfg.rtol * value_norm);
}

void check_finite(const ComplexMatrix& m, double where)
{
    if (!m.allFinite())
        throw NumericalError("integrand is not finite at abscissa " + std::to_string(where), 0.0);
}

// Nested refinement over a tanh-sinh/exp-sinh table for `count` integrals.
template <class Eval>
BatchQuadratureResult nested_batch(const NestedTable& table, Eval&& eval, std::size_t count, Eigen::Index rows,
                                   const QuadratureConfig& cfg)
{
    std::vector<ComplexMatrix> sums(count, ComplexMatrix::Zero(rows, rows));
    std::vector<ComplexMatrix> fresh(count, ComplexMatrix::Zero(rows, rows));
    std::vector<ComplexMatrix> node_values(count, ComplexMatrix::Zero(rows, rows));
    double last_delta = std::numeric_limits<double>::infinity();
    for (int l = 0; l <= cfg.max_level; ++l) {
        for (auto& f : fresh)
            f.setZero();
        for (const Node& n : table.level(l)) {
            eval(n, node_values);
            for (std::size_t k = 0; k < count; ++k) {
                check_finite(node_values[k], n.u);
                fresh[k] += n.jac * node_values[k];
            }
        }
        const double h = NestedTable::step(l);
        bool converged = l >= kMinLevel;
        double worst = 0.0;
        for (std::size_t k = 0; k < count; ++k) {
            ComplexMatrix next = (l == 0 ? ComplexMatrix::Zero(rows, rows) : ComplexMatrix(0.5 * sums[k])) +
                                 h * fresh[k];
            const double delta = (next - sums[k]).norm();
            worst = std::max(worst, delta);
            if (!within(delta, next.norm(), cfg))
                converged = false;
            sums[k] = std::move(next);
        }
        last_delta = worst;
        if (converged)
            return {std::move(sums), worst, l};
    }
    throw NumericalError("quadrature did not converge by level " + std::to_string(cfg.max_level), last_delta);
}

// Non-nested refinement: every level re-evaluates a fresh node set.
template <class Eval>
BatchQuadratureResult gauss_batch(Eval&& eval, std::size_t count, Eigen::Index rows, const QuadratureConfig& cfg)
{
    std::vector<ComplexMatrix> prev(count, ComplexMatrix::Zero(rows, rows));
    std::vector<ComplexMatrix> node_values(count, ComplexMatrix::Zero(rows, rows));
    double last_delta = std::numeric_limits<double>::infinity();
    for (int l = 0; l <= cfg.max_level; ++l) {
        std::vector<ComplexMatrix> sums(count, ComplexMatrix::Zero(rows, rows));
        for (const Node& n : gauss_level(l)) {
            eval(n, node_values);
            for (std::size_t k = 0; k < count; ++k) {
                check_finite(node_values[k], n.u);
                sums[k] += n.jac * node_values[k];
            }
        }
        bool converged = l >= kMinLevel;
        double worst = 0.0;
        for (std::size_t k = 0; k < count; ++k) {
            const double delta = (sums[k] - prev[k]).norm();
            worst = std::max(worst, delta);
            if (!within(delta, sums[k].norm(), cfg))
                converged = false;
        }
        prev = std::move(sums);
        last_delta = worst;
        if (converged)
            return {std::move(prev), worst, l};
    }
    throw NumericalError("quadrature did not converge by level " + std::to_string(cfg.max_level), last_delta);
}

Eigen::Index probe_rows(const UnitIntegrand& f)
{
    const ComplexMatrix m = f(UnitNode{0.5, 0.5});
    require_square(m, "integrand value");
    return m.rows();
}

} // namespace

void QuadratureConfig::validate() const
{
    if (!(atol > 0.0) || !(rtol > 0.0))
        throw DomainError("quadrature tolerances must be positive");
    if (max_level < 4 || max_level > kMaxSupportedLevel)
        throw DomainError("quadrature max_level must lie in [4, 16]");
}

BatchQuadratureResult integrate_unit_interval_batch(const BatchIntegrand& f, std::size_t count, Eigen::Index rows,
                                                    const QuadratureConfig& cfg)
{
    cfg.validate();
    auto eval = [&f](const Node& n, std::vector<ComplexMatrix>& out) { f(UnitNode{n.u, n.complement}, out); };
    if (cfg.rule == QuadratureRule::gauss_legendre_adaptive)
        return gauss_batch(eval, count, rows, cfg);
    return nested_batch(tanh_sinh_table(), eval, count, rows, cfg);
}

QuadratureResult integrate_unit_interval(const UnitIntegrand& f, const QuadratureConfig& cfg)
{
    const Eigen::Index rows = probe_rows(f);
    auto batch = integrate_unit_interval_batch(
        [&f](UnitNode n, std::vector<ComplexMatrix>& out) { out[0] = f(n); }, 1, rows, cfg);
    return {std::move(batch.values[0]), batch.error_estimate, batch.level};
}

QuadratureResult integrate_unit_interval(const std::function<ComplexMatrix(double)>& f, const QuadratureConfig& cfg)
{
    return integrate_unit_interval(UnitIntegrand([&f](UnitNode n) { return f(n.u); }), cfg);
}

QuadratureResult integrate_unit_square(const SquareIntegrand& f, const QuadratureConfig& cfg)
{
    cfg.validate();
    const ComplexMatrix probe = f(UnitNode{0.5, 0.5}, UnitNode{0.5, 0.5});
    require_square(probe, "integrand value");
    const Eigen::Index rows = probe.rows();

    auto pair_value = [&f](const Node& a, const Node& b) {
        ComplexMatrix v = f(UnitNode{a.u, a.complement}, UnitNode{b.u, b.complement});
        check_finite(v, a.u);
        return v;
    };

    double last_delta = std::numeric_limits<double>::infinity();
    if (cfg.rule == QuadratureRule::gauss_legendre_adaptive) {
        ComplexMatrix prev = ComplexMatrix::Zero(rows, rows);
        for (int l = 0; l <= cfg.max_level; ++l) {
            const std::vector<Node> nodes = gauss_level(l);
            ComplexMatrix sum = ComplexMatrix::Zero(rows, rows);
            for (const Node& a : nodes)
                for (const Node& b : nodes)
                    sum += (a.jac * b.jac) * pair_value(a, b);
            const double delta = (sum - prev).norm();
            prev = std::move(sum);
            last_delta = delta;
            if (l >= kMinLevel && within(delta, prev.norm(), cfg))
                return {std::move(prev), delta, l};
        }
        throw NumericalError("quadrature did not converge by level " + std::to_string(cfg.max_level), last_delta);
    }

    // S_l = S_{l-1} / 4 + h_l^2 * (sum over pairs with at least one new node)
    const NestedTable& table = tanh_sinh_table();
    std::vector<Node> old_nodes;
    ComplexMatrix sum = ComplexMatrix::Zero(rows, rows);
    for (int l = 0; l <= cfg.max_level; ++l) {
        const std::vector<Node>& fresh = table.level(l);
        ComplexMatrix add = ComplexMatrix::Zero(rows, rows);
        for (const Node& a : fresh) {
            for (const Node& b : fresh)
                add += (a.jac * b.jac) * pair_value(a, b);
            for (const Node& b : old_nodes) {
                add += (a.jac * b.jac) * pair_value(a, b);
                add += (a.jac * b.jac) * pair_value(b, a);
            }
        }
        const double h = NestedTable::step(l);
        ComplexMatrix next = (l == 0 ? ComplexMatrix::Zero(rows, rows) : ComplexMatrix(0.25 * sum)) + (h * h) * add;
        const double delta = (next - sum).norm();
        sum = std::move(next);
        last_delta = delta;
        old_nodes.insert(old_nodes.end(), fresh.begin(), fresh.end());
        if (l >= kMinLevel && within(delta, sum.norm(), cfg))
            return {std::move(sum), delta, l};
    }
    throw NumericalError("quadrature did not converge by level " + std::to_string(cfg.max_level), last_delta);
}

QuadratureResult integrate_half_line(const HalfLineIntegrand& f, const QuadratureConfig& cfg)
{
    cfg.validate();
    const ComplexMatrix probe = f(1.0);
    require_square(probe, "integrand value");
    const Eigen::Index rows = probe.rows();
    BatchQuadratureResult batch;
    if (cfg.rule == QuadratureRule::gauss_legendre_adaptive) {
        // t = u / (1 - u)
        auto eval = [&f](const Node& n, std::vector<ComplexMatrix>& out) {
            const double t = n.u / n.complement;
            out[0] = f(t) / (n.complement * n.complement);
        };
        batch = gauss_batch(eval, 1, rows, cfg);
    } else {
        auto eval = [&f](const Node& n, std::vector<ComplexMatrix>& out) { out[0] = f(n.u); };
        batch = nested_batch(exp_sinh_table(), eval, 1, rows, cfg);
    }
    return {std::move(batch.values[0]), batch.error_estimate, batch.level};
}

QuadratureResult integrate_segment(const SegmentIntegrand& f, Complex z, const QuadratureConfig& cfg)
{
    if (z == Complex(0.0, 0.0))
        throw DomainError("segment integral needs z != 0");
    QuadratureResult res = integrate_unit_interval(UnitIntegrand([&f, z](UnitNode n) { return f(z * n.u); }), cfg);
    res.value *= z;
    res.error_estimate *= std::abs(z);
    return res;
}

} // namespace hypermat
