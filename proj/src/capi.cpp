#include "hypermat/hypermat.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include "hypermat/frac_calc.hpp"
#include "hypermat/gamma_beta.hpp"
#include "hypermat/identity_verify.hpp"
#include "json_io.hpp"

struct hm_matrix {
    hypermat::ComplexMatrix m;
};

struct hm_params {
    hypermat::HyperParams p;
};

namespace {

using namespace hypermat;

thread_local std::string g_last_error;
thread_local std::string g_last_hypothesis;

class InvalidArgument : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

hm_status fail(hm_status s, const char* what)
{
    g_last_error = what;
    return s;
}

// Runs f, translating exceptions into status codes and the thread-local message.
template <class F>
hm_status guarded(F&& f) noexcept
{
    g_last_error.clear();
    g_last_hypothesis.clear();
    try {
        f();
        return HM_OK;
    } catch (const HypothesisError& e) {
        g_last_hypothesis = e.hypothesis();
        return fail(HM_ERR_HYPOTHESIS, e.what());
    } catch (const DomainError& e) {
        return fail(HM_ERR_DOMAIN, e.what());
    } catch (const NumericalError& e) {
        return fail(HM_ERR_NUMERICAL, e.what());
    } catch (const InvalidArgument& e) {
        return fail(HM_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(HM_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(HM_ERR_INTERNAL, "unknown exception");
    }
}

template <class T>
void require_ptr(const T* p, const char* what)
{
    if (!p)
        throw InvalidArgument(std::string(what) + " is null");
}

const ComplexMatrix& mat(const hm_matrix* m, const char* what)
{
    require_ptr(m, what);
    return m->m;
}

void emit(ComplexMatrix value, hm_matrix** out)
{
    require_ptr(out, "out");
    *out = new hm_matrix{std::move(value)};
}

void emit(const std::string& s, char** out)
{
    require_ptr(out, "out");
    char* buf = static_cast<char*>(std::malloc(s.size() + 1));
    if (!buf)
        throw std::bad_alloc();
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out = buf;
}

Complex cx(hm_complex z) { return {z.re, z.im}; }

std::vector<std::string> split_csv(const char* csv)
{
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos)
            throw InvalidArgument("empty role in role list");
        out.push_back(item.substr(b, e - b + 1));
    }
    if (out.empty())
        throw InvalidArgument("empty role list");
    return out;
}

} // namespace

extern "C" {

const char* hm_version(void) { return "0.1.0"; }
const char* hm_last_error(void) { return g_last_error.c_str(); }
const char* hm_last_hypothesis(void) { return g_last_hypothesis.c_str(); }
void hm_string_free(char* s) { std::free(s); }

hm_status hm_matrix_new(size_t rows, size_t cols, const hm_complex* entries, hm_matrix** out)
{
    return guarded([&] {
        require_ptr(entries, "entries");
        std::vector<Complex> data(rows * cols);
        for (size_t i = 0; i < data.size(); ++i)
            data[i] = cx(entries[i]);
        if (rows == 0 || rows != cols)
            throw DomainError("matrix must be square with positive dimension");
        emit(make_matrix(rows, cols, data), out);
    });
}

void hm_matrix_free(hm_matrix* m) { delete m; }
size_t hm_matrix_rows(const hm_matrix* m) { return m ? static_cast<size_t>(m->m.rows()) : 0; }
size_t hm_matrix_cols(const hm_matrix* m) { return m ? static_cast<size_t>(m->m.cols()) : 0; }

hm_status hm_matrix_get(const hm_matrix* m, size_t row, size_t col, hm_complex* out)
{
    return guarded([&] {
        const ComplexMatrix& a = mat(m, "matrix");
        require_ptr(out, "out");
        if (row >= static_cast<size_t>(a.rows()) || col >= static_cast<size_t>(a.cols()))
            throw InvalidArgument("index out of range");
        const Complex v = a(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
        *out = {v.real(), v.imag()};
    });
}

hm_status hm_matrix_data(const hm_matrix* m, hm_complex* out)
{
    return guarded([&] {
        const ComplexMatrix& a = mat(m, "matrix");
        require_ptr(out, "out");
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index k = 0; k < a.cols(); ++k)
                out[i * a.cols() + k] = {a(i, k).real(), a(i, k).imag()};
    });
}

hm_status hm_mat_exp(const hm_matrix* a, hm_matrix** out)
{
    return guarded([&] { emit(mat_exp(mat(a, "a")), out); });
}

hm_status hm_mat_log(const hm_matrix* a, hm_matrix** out)
{
    return guarded([&] { emit(mat_log(mat(a, "a")), out); });
}

hm_status hm_mat_real_power(const hm_matrix* a, double t, hm_matrix** out)
{
    return guarded([&] { emit(mat_real_power(mat(a, "a"), t), out); });
}

hm_status hm_mat_neg_power(const hm_matrix* a, hm_complex z, hm_matrix** out)
{
    return guarded([&] { emit(mat_neg_power(mat(a, "a"), cx(z)), out); });
}

hm_status hm_stability(const hm_matrix* a, double* alpha, double* beta, int* positive_stable)
{
    return guarded([&] {
        const StabilityReport s = stability(mat(a, "a"));
        if (alpha)
            *alpha = s.alpha;
        if (beta)
            *beta = s.beta;
        if (positive_stable)
            *positive_stable = s.positive_stable ? 1 : 0;
    });
}

hm_status hm_gamma(const hm_matrix* a, hm_matrix** out)
{
    return guarded([&] { emit(gamma_matrix(mat(a, "a")), out); });
}

hm_status hm_gamma_limit(const hm_matrix* a, long n, hm_matrix** out)
{
    return guarded([&] { emit(gamma_limit(mat(a, "a"), n), out); });
}

hm_status hm_reciprocal_gamma(const hm_matrix* a, int n, hm_matrix** out)
{
    return guarded([&] { emit(reciprocal_gamma(mat(a, "a"), n), out); });
}

hm_status hm_pochhammer(const hm_matrix* a, int n, hm_matrix** out)
{
    return guarded([&] { emit(pochhammer(mat(a, "a"), n), out); });
}

hm_status hm_beta(const hm_matrix* a, const hm_matrix* b, hm_matrix** out)
{
    return guarded([&] { emit(beta_matrix(mat(a, "a"), mat(b, "b")), out); });
}

hm_status hm_ext_beta(const hm_matrix* a, const hm_matrix* b, const hm_matrix* x, hm_matrix** out,
                      double* error_estimate)
{
    return guarded([&] {
        const ComplexMatrix& am = mat(a, "a");
        const ComplexMatrix xm = x ? x->m : zeros(am.rows());
        QuadratureResult q = extended_beta(am, mat(b, "b"), xm);
        if (error_estimate)
            *error_estimate = q.error_estimate;
        emit(std::move(q.value), out);
    });
}

hm_status hm_frac_power_rule(const hm_matrix* a, hm_complex mu, const hm_matrix* x, hm_complex z, hm_matrix** out)
{
    return guarded([&] {
        FracOrder order;
        order.mu = cx(mu);
        if (x)
            order.X = x->m;
        emit(frac_power_rule(mat(a, "a"), order, cx(z)), out);
    });
}

hm_status hm_params_new(hm_params** out)
{
    return guarded([&] {
        require_ptr(out, "out");
        *out = new hm_params{};
    });
}

void hm_params_free(hm_params* p) { delete p; }

hm_status hm_params_set(hm_params* p, const char* role, const hm_matrix* m)
{
    return guarded([&] {
        require_ptr(p, "params");
        require_ptr(role, "role");
        const auto r = role_from_name(role);
        if (!r)
            throw InvalidArgument(std::string("unknown role \"") + role + "\"");
        p->p.slot(*r) = mat(m, "matrix");
    });
}

hm_status hm_eval(const char* function, const char* method, const hm_params* p, hm_complex z, hm_complex w,
                  hm_complex v, hm_matrix** out, double* error_estimate)
{
    return guarded([&] {
        require_ptr(function, "function");
        require_ptr(p, "params");
        const auto f = function_from_name(function);
        if (!f)
            throw InvalidArgument(std::string("unknown function \"") + function + "\"");
        EvalOptions opt;
        if (method) {
            const auto m = method_from_name(method);
            if (!m)
                throw InvalidArgument(std::string("unknown method \"") + method + "\"");
            opt.method = *m;
        }
        EvalResult res = evaluate(*f, p->p, {cx(z), cx(w), cx(v)}, opt);
        if (error_estimate)
            *error_estimate = res.error_estimate;
        emit(std::move(res.value), out);
    });
}

hm_status hm_eval_json(const char* input, const char* function, const char* method, char** out)
{
    return guarded([&] {
        require_ptr(input, "input");
        const json_io::EvalRequest req =
            json_io::parse_eval_request(input, function ? std::optional<std::string>(function) : std::nullopt,
                                        method ? std::optional<std::string>(method) : std::nullopt);
        emit(json_io::run_eval_request(req).dump(), out);
    });
}

hm_status hm_gen_family_json(uint64_t seed, int r, const char* roles_csv, double window_lo, double window_hi,
                             char** out)
{
    return guarded([&] {
        if (r < 1)
            throw InvalidArgument("r must be at least 1");
        const bool uniform = window_lo != 0.0 || window_hi != 0.0;
        std::vector<RoleSpec> specs = default_role_layout();
        if (roles_csv) {
            std::vector<RoleSpec> chosen;
            for (const std::string& name : split_csv(roles_csv)) {
                if (!role_from_name(name))
                    throw InvalidArgument("unknown role \"" + name + "\"");
                auto it = std::find_if(specs.begin(), specs.end(), [&](const RoleSpec& s) { return s.role == name; });
                chosen.push_back(*it);
            }
            specs = std::move(chosen);
        }
        if (uniform)
            for (RoleSpec& s : specs)
                s.window = {window_lo, window_hi};
        emit(json_io::family_to_json(random_commuting_family(seed, r, specs)).dump(), out);
    });
}

size_t hm_identity_count(void) { return all_identities().size(); }

const char* hm_identity_name(size_t index)
{
    const auto& ids = all_identities();
    return index < ids.size() ? identity_name(ids[index]).data() : nullptr;
}

hm_status hm_verify_json(uint64_t seed, const char* profile, const char* identity, double tolerance, char** out,
                         int* passed)
{
    return guarded([&] {
        const auto prof = profile_from_name(profile ? profile : "quick");
        if (!prof)
            throw InvalidArgument("profile must be quick or full");
        VerifyConfig cfg;
        if (tolerance > 0.0)
            cfg.tolerance = tolerance;
        std::vector<VerifyReport> reports;
        if (identity) {
            const auto id = identity_from_name(identity);
            if (!id)
                throw InvalidArgument(std::string("unknown identity \"") + identity + "\"");
            reports.push_back(verify_profile(*id, seed, *prof, cfg));
        } else {
            reports = run_suite(seed, *prof, cfg);
        }
        std::string text;
        for (const VerifyReport& rep : reports)
            text += report_to_json(rep) + "\n";
        if (passed)
            *passed = suite_passed(reports) ? 1 : 0;
        emit(text, out);
    });
}

} // extern "C"
