#pragma once

// JSON encodings shared by the C API and the command-line tool.
//   matrix:  {"rows": r, "cols": r, "data": [[re, im], ...]} row-major
//   family:  {"seed": s, "r": r, "members": {"A": matrix, ...}}
//   eval request: a family object, optionally with "function", "method",
//   "z", "w", "v" (number or [re, im]) and "options"; unknown keys are rejected.

#include <optional>
#include <string>
#include <string_view>

#include "hypermat/commuting_family.hpp"
#include "hypermat/hyper_series.hpp"
#include "json.hpp"

namespace hypermat::json_io {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, std::string_view what);

Json family_to_json(const CommutingFamily& family);

/// Kernels evaluated outside the hypergeometric dispatch.
enum class Kernel { none, beta, ext_beta, gamma };

struct EvalRequest {
    std::optional<HyperFunction> function;
    Kernel kernel = Kernel::none;
    std::optional<Method> method; ///< unset: series for hypergeometric functions
    HyperParams params;
    EvalPoint point;
    EvalOptions options;
};

/// `function` / `method` given here take precedence over the same keys in the document.
/// Throws DomainError on malformed or unknown input.
EvalRequest parse_eval_request(std::string_view text, std::optional<std::string> function,
                               std::optional<std::string> method);

/// {"result": matrix, "method": str, "error_estimate": float}
Json run_eval_request(const EvalRequest& request);

/// Parses a document, throwing DomainError with the parser message on failure.
Json parse(std::string_view text);

} // namespace hypermat::json_io
