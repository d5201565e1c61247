#include "hypermat/matrix_core.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace hypermat {

namespace {

std::string shape_of(const ComplexMatrix& m)
{
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

bool on_negative_real_axis(Complex v)
{
    return v.imag() == 0.0 && v.real() <= 0.0;
}

double norm1(const ComplexMatrix& m)
{
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

} // namespace

ComplexMatrix make_matrix(std::size_t rows, std::size_t cols, std::span<const Complex> row_major)
{
    if (rows == 0 || cols == 0)
        throw DomainError("matrix dimensions must be positive");
    if (row_major.size() != rows * cols)
        throw DomainError("matrix data has " + std::to_string(row_major.size()) + " entries, expected " +
                          std::to_string(rows * cols));
    ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row_major[i * cols + j];
    require_finite(m, "matrix");
    return m;
}

ComplexMatrix identity(Eigen::Index r)
{
    return ComplexMatrix::Identity(r, r);
}

ComplexMatrix zeros(Eigen::Index r)
{
    return ComplexMatrix::Zero(r, r);
}

void require_square(const ComplexMatrix& m, std::string_view what)
{
    if (m.rows() == 0 || m.rows() != m.cols())
        throw DomainError(std::string(what) + " must be square, got " + shape_of(m));
}

void require_finite(const ComplexMatrix& m, std::string_view what)
{
    if (!m.allFinite())
        throw DomainError(std::string(what) + " has non-finite entries");
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, std::string_view what)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DomainError(std::string(what) + ": dimension mismatch " + shape_of(a) + " vs " + shape_of(b));
}

double frobenius(const ComplexMatrix& m)
{
    return m.norm();
}

bool is_zero(const ComplexMatrix& m)
{
    return (m.array() == Complex(0.0, 0.0)).all();
}

double relative_residual(const ComplexMatrix& lhs, const ComplexMatrix& rhs)
{
    require_same_shape(lhs, rhs, "residual");
    const double scale = 1.0 + std::max(lhs.norm(), rhs.norm());
    return (lhs - rhs).norm() / scale;
}

double commutator_ratio(const ComplexMatrix& m, const ComplexMatrix& n)
{
    require_same_shape(m, n, "commutator");
    const double denom = m.norm() * n.norm();
    if (denom == 0.0)
        return 0.0;
    return (m * n - n * m).norm() / denom;
}

bool commutes(const ComplexMatrix& m, const ComplexMatrix& n, double tol)
{
    return commutator_ratio(m, n) <= tol;
}

ComplexVector eigenvalues(const ComplexMatrix& m)
{
    require_square(m, "eigenvalue input");
    require_finite(m, "eigenvalue input");
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigenvalue iteration did not converge", 0.0);
    return solver.eigenvalues();
}

StabilityReport stability(const ComplexMatrix& m)
{
    const ComplexVector ev = eigenvalues(m);
    StabilityReport rep;
    rep.alpha = ev.real().maxCoeff();
    rep.beta = ev.real().minCoeff();
    rep.positive_stable = rep.beta > 0.0;
    return rep;
}

Spectral::Spectral(const ComplexMatrix& m)
{
    require_square(m, "matrix function input");
    require_finite(m, "matrix function input");
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigendecomposition did not converge", 0.0);
    values_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
    Eigen::JacobiSVD<ComplexMatrix> svd(vectors_);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    condition_ = smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
    if (well_conditioned())
        inverse_ = vectors_.partialPivLu().inverse();
}

ExpPlan::ExpPlan(ComplexMatrix m)
    : m_(std::move(m))
{
    require_square(m_, "matrix function input");
    require_finite(m_, "matrix function input");
    zero_ = is_zero(m_);
    if (!zero_) {
        Spectral s(m_);
        if (s.well_conditioned())
            spectral_.emplace(std::move(s));
    }
}

ComplexMatrix ExpPlan::exp_times(Complex c) const
{
    if (zero_ || c == Complex(0.0, 0.0))
        return identity(m_.rows());
    if (spectral_)
        return spectral_->map([c](Complex l) { return std::exp(c * l); });
    return expm_pade(c * m_);
}

ComplexMatrix ExpPlan::pow(double t) const
{
    if (!(t > 0.0))
        throw DomainError("real matrix power needs t > 0, got " + std::to_string(t));
    return exp_times(Complex(std::log(t), 0.0));
}

ComplexMatrix ExpPlan::pow(Complex base) const
{
    return exp_times(principal_log(base, "matrix power base"));
}

Complex principal_log(Complex base, std::string_view what)
{
    if (on_negative_real_axis(base)) {
        std::ostringstream os;
        os << what << " " << base << " lies on the branch cut (-inf, 0]";
        throw DomainError(os.str());
    }
    return std::log(base);
}

ComplexMatrix expm_pade(const ComplexMatrix& a_in)
{
    require_square(a_in, "expm input");
    require_finite(a_in, "expm input");
    static constexpr std::array<double, 14> b = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;

    const Eigen::Index r = a_in.rows();
    const double nrm = norm1(a_in);
    int s = 0;
    if (nrm > theta13)
        s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    const ComplexMatrix a = a_in / std::ldexp(1.0, s);
    const ComplexMatrix id = identity(r);
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;
    const ComplexMatrix u =
        a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const ComplexMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    ComplexMatrix result = (v - u).partialPivLu().solve(v + u);
    for (int k = 0; k < s; ++k)
        result = result * result;
    return result;
}

ComplexMatrix sqrtm_db(const ComplexMatrix& m)
{
    require_square(m, "sqrtm input");
    ComplexMatrix y = m;
    ComplexMatrix z = identity(m.rows());
    for (int it = 0; it < 100; ++it) {
        const ComplexMatrix yinv = y.partialPivLu().inverse();
        const ComplexMatrix zinv = z.partialPivLu().inverse();
        ComplexMatrix ynext = 0.5 * (y + zinv);
        z = 0.5 * (z + yinv);
        const double delta = (ynext - y).norm();
        y = std::move(ynext);
        if (delta <= 1e-15 * y.norm())
            return y;
    }
    throw NumericalError("Denman-Beavers square root did not converge", (y * y - m).norm());
}

ComplexMatrix logm_iss(const ComplexMatrix& m)
{
    require_square(m, "logm input");
    require_finite(m, "logm input");
    const ComplexVector ev = eigenvalues(m);
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (on_negative_real_axis(ev(i)))
            throw DomainError("matrix logarithm: eigenvalue on the branch cut (-inf, 0]");

    const Eigen::Index r = m.rows();
    const ComplexMatrix id = identity(r);
    ComplexMatrix a = m;
    int k = 0;
    while ((a - id).norm() > 0.25) {
        a = sqrtm_db(a);
        if (++k > 60)
            throw NumericalError("inverse scaling and squaring did not reach the identity", (a - id).norm());
    }
    // log(A) = 2 atanh(T), T = (A - I)(A + I)^-1
    const ComplexMatrix t = (a - id) * (a + id).partialPivLu().inverse();
    const ComplexMatrix t2 = t * t;
    ComplexMatrix power = t;
    ComplexMatrix sum = t;
    for (int j = 3; j < 200; j += 2) {
        power = power * t2;
        const ComplexMatrix term = power / static_cast<double>(j);
        sum += term;
        if (term.norm() <= 1e-17 * sum.norm())
            break;
    }
    return std::ldexp(2.0, k) * sum;
}

ComplexMatrix mat_exp(const ComplexMatrix& m)
{
    return ExpPlan(m).exp_times(Complex(1.0, 0.0));
}

ComplexMatrix mat_log(const ComplexMatrix& m)
{
    require_square(m, "logm input");
    require_finite(m, "logm input");
    Spectral s(m);
    for (Eigen::Index i = 0; i < s.eigenvalues().size(); ++i)
        if (on_negative_real_axis(s.eigenvalues()(i)))
            throw DomainError("matrix logarithm: eigenvalue on the branch cut (-inf, 0]");
    if (s.well_conditioned())
        return s.map([](Complex l) { return std::log(l); });
    return logm_iss(m);
}

ComplexMatrix mat_real_power(const ComplexMatrix& m, double t)
{
    return ExpPlan(m).pow(t);
}

ComplexMatrix mat_complex_power(const ComplexMatrix& m, Complex base)
{
    return ExpPlan(m).pow(base);
}

ComplexMatrix mat_neg_power(const ComplexMatrix& m, Complex z)
{
    if (!(std::abs(z) < 1.0))
        throw DomainError("(1 - z)^(-M) needs |z| < 1");
    return ExpPlan(m).exp_times(-std::log(Complex(1.0, 0.0) - z));
}

} // namespace hypermat
