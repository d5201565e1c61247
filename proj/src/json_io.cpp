#include "json_io.hpp"

#include <cmath>
#include <set>

#include "hypermat/gamma_beta.hpp"

namespace hypermat::json_io {

namespace {

Complex complex_from_json(const Json& j, std::string_view what)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw DomainError(std::string(what) + " must be a number or [re, im]");
}

void reject_unknown(const Json& j, const std::set<std::string>& allowed, std::string_view what)
{
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            throw DomainError("unknown field \"" + item.key() + "\" in " + std::string(what));
}

double positive_number(const Json& j, std::string_view what)
{
    if (!j.is_number())
        throw DomainError(std::string(what) + " must be a number");
    return j.get<double>();
}

int integer(const Json& j, std::string_view what)
{
    if (!j.is_number_integer())
        throw DomainError(std::string(what) + " must be an integer");
    return j.get<int>();
}

void apply_options(const Json& j, EvalOptions& opt)
{
    if (!j.is_object())
        throw DomainError("options must be an object");
    reject_unknown(j,
                   {"term_tol", "consecutive_small", "max_total_degree", "atol", "rtol", "max_level", "rule",
                    "kummer_kernel", "relax_numerator"},
                   "options");
    if (j.contains("term_tol"))
        opt.series.term_tol = positive_number(j["term_tol"], "term_tol");
    if (j.contains("consecutive_small"))
        opt.series.consecutive_small = integer(j["consecutive_small"], "consecutive_small");
    if (j.contains("max_total_degree"))
        opt.series.max_total_degree = integer(j["max_total_degree"], "max_total_degree");
    if (j.contains("atol"))
        opt.quad.atol = positive_number(j["atol"], "atol");
    if (j.contains("rtol"))
        opt.quad.rtol = positive_number(j["rtol"], "rtol");
    if (j.contains("max_level"))
        opt.quad.max_level = integer(j["max_level"], "max_level");
    if (j.contains("rule")) {
        const std::string rule = j["rule"].is_string() ? j["rule"].get<std::string>() : "";
        if (rule == "tanh_sinh")
            opt.quad.rule = QuadratureRule::tanh_sinh;
        else if (rule == "gauss_legendre_adaptive")
            opt.quad.rule = QuadratureRule::gauss_legendre_adaptive;
        else
            throw DomainError("rule must be tanh_sinh or gauss_legendre_adaptive");
    }
    if (j.contains("kummer_kernel")) {
        const std::string k = j["kummer_kernel"].is_string() ? j["kummer_kernel"].get<std::string>() : "";
        if (k == "exponential")
            opt.kummer = KummerKernel::with_exponential;
        else if (k == "literal")
            opt.kummer = KummerKernel::literal;
        else
            throw DomainError("kummer_kernel must be exponential or literal");
    }
    if (j.contains("relax_numerator")) {
        if (!j["relax_numerator"].is_boolean())
            throw DomainError("relax_numerator must be a boolean");
        opt.relax_numerator = j["relax_numerator"].get<bool>();
    }
    opt.series.validate();
    opt.quad.validate();
}

} // namespace

Json parse(std::string_view text)
{
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("invalid JSON: ") + e.what());
    }
}

Json matrix_to_json(const ComplexMatrix& m)
{
    Json data = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index k = 0; k < m.cols(); ++k)
            data.push_back({m(i, k).real(), m(i, k).imag()});
    Json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["data"] = std::move(data);
    return j;
}

ComplexMatrix matrix_from_json(const Json& j, std::string_view what)
{
    if (!j.is_object())
        throw DomainError(std::string(what) + " must be a matrix object");
    reject_unknown(j, {"rows", "cols", "data"}, what);
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw DomainError(std::string(what) + " needs rows, cols and data");
    const int rows = integer(j["rows"], "rows");
    const int cols = integer(j["cols"], "cols");
    if (rows < 1 || cols != rows)
        throw DomainError(std::string(what) + " must be square with positive dimension");
    const Json& data = j["data"];
    if (!data.is_array())
        throw DomainError(std::string(what) + ".data must be an array");
    std::vector<Complex> entries;
    entries.reserve(data.size());
    for (const Json& e : data)
        entries.push_back(complex_from_json(e, std::string(what) + ".data entry"));
    return make_matrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), entries);
}

Json family_to_json(const CommutingFamily& family)
{
    Json j;
    j["seed"] = family.seed;
    j["r"] = family.r;
    Json members = Json::object();
    // role order as in the parameter lists, not alphabetical
    for (Role role : {Role::A, Role::B, Role::Bp, Role::Bpp, Role::C, Role::Cp, Role::X}) {
        const std::string name(role_name(role));
        auto it = family.members.find(name);
        if (it != family.members.end())
            members[name] = matrix_to_json(it->second);
    }
    for (const auto& [name, m] : family.members)
        if (!role_from_name(name))
            members[name] = matrix_to_json(m);
    j["members"] = std::move(members);
    return j;
}

EvalRequest parse_eval_request(std::string_view text, std::optional<std::string> function,
                               std::optional<std::string> method)
{
    const Json doc = parse(text);
    if (!doc.is_object())
        throw DomainError("eval input must be a JSON object");
    reject_unknown(doc, {"function", "method", "seed", "r", "members", "z", "w", "v", "options"}, "eval input");

    if (!function && doc.contains("function")) {
        if (!doc["function"].is_string())
            throw DomainError("function must be a string");
        function = doc["function"].get<std::string>();
    }
    if (!method && doc.contains("method")) {
        if (!doc["method"].is_string())
            throw DomainError("method must be a string");
        method = doc["method"].get<std::string>();
    }
    if (!function)
        throw DomainError("no function given");

    EvalRequest req;
    if (*function == "beta")
        req.kernel = Kernel::beta;
    else if (*function == "ext_beta")
        req.kernel = Kernel::ext_beta;
    else if (*function == "gamma")
        req.kernel = Kernel::gamma;
    else if (auto f = function_from_name(*function))
        req.function = *f;
    else
        throw DomainError("unknown function \"" + *function + "\"");

    if (method) {
        const auto m = method_from_name(*method);
        if (!m)
            throw DomainError("method must be series or integral");
        req.method = *m;
    }

    if (!doc.contains("members") || !doc["members"].is_object())
        throw DomainError("eval input needs a \"members\" object of role matrices");
    for (const auto& item : doc["members"].items()) {
        const auto role = role_from_name(item.key());
        if (!role)
            throw DomainError("unknown role \"" + item.key() + "\"");
        req.params.slot(*role) = matrix_from_json(item.value(), item.key());
    }
    if (doc.contains("r")) {
        const int r = integer(doc["r"], "r");
        for (Role role : {Role::A, Role::B, Role::Bp, Role::Bpp, Role::C, Role::Cp, Role::X})
            if (const auto& m = req.params.slot(role); m && m->rows() != r)
                throw DomainError("member " + std::string(role_name(role)) + " does not match r");
    }
    if (doc.contains("seed") && !doc["seed"].is_number_integer())
        throw DomainError("seed must be an integer");
    if (doc.contains("z"))
        req.point.z = complex_from_json(doc["z"], "z");
    if (doc.contains("w"))
        req.point.w = complex_from_json(doc["w"], "w");
    if (doc.contains("v"))
        req.point.v = complex_from_json(doc["v"], "v");
    if (doc.contains("options"))
        apply_options(doc["options"], req.options);
    return req;
}

Json run_eval_request(const EvalRequest& req)
{
    Json out;
    if (req.function) {
        EvalOptions opt = req.options;
        opt.method = req.method.value_or(Method::series);
        const EvalResult res = evaluate(*req.function, req.params, req.point, opt);
        out["result"] = matrix_to_json(res.value);
        out["method"] = method_name(res.method);
        out["error_estimate"] = res.error_estimate;
        return out;
    }
    if (req.method == Method::series)
        throw DomainError("only the integral method is available for beta, ext_beta and gamma");
    const HyperParams& p = req.params;
    switch (req.kernel) {
    case Kernel::beta:
        out["result"] = matrix_to_json(beta_matrix(p.require(Role::A), p.require(Role::B), req.options.quad));
        out["method"] = "integral";
        out["error_estimate"] = 0.0;
        break;
    case Kernel::ext_beta: {
        const ComplexMatrix& a = p.require(Role::A);
        const ComplexMatrix x = p.X ? *p.X : zeros(a.rows());
        const QuadratureResult q = extended_beta(a, p.require(Role::B), x, req.options.quad);
        out["result"] = matrix_to_json(q.value);
        out["method"] = "integral";
        out["error_estimate"] = q.error_estimate;
        break;
    }
    case Kernel::gamma:
        if (req.method == Method::integral) {
            out["result"] = matrix_to_json(gamma_quadrature(p.require(Role::A), req.options.quad));
            out["method"] = "integral";
        } else {
            out["result"] = matrix_to_json(gamma_matrix(p.require(Role::A)));
            out["method"] = "spectral";
        }
        out["error_estimate"] = 0.0;
        break;
    case Kernel::none:
        throw DomainError("no function given");
    }
    return out;
}

} // namespace hypermat::json_io
