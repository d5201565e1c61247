// hypermat-cli: eval, verify and gen-family over the C interface.
// Exit codes: 0 ok, 1 verification failure, 2 input or hypothesis error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hypermat/hypermat.h"

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFail = 1;
constexpr int kInputError = 2;
constexpr int kNumericalError = 3;

int exit_code(hm_status s)
{
    switch (s) {
    case HM_OK:
        return kOk;
    case HM_ERR_HYPOTHESIS:
    case HM_ERR_DOMAIN:
    case HM_ERR_INVALID_ARGUMENT:
        return kInputError;
    case HM_ERR_NUMERICAL:
    case HM_ERR_INTERNAL:
        break;
    }
    return kNumericalError;
}

int report_failure(hm_status s)
{
    std::cerr << "hypermat-cli: " << hm_last_error() << "\n";
    return exit_code(s);
}

// Owns a string returned by the library.
struct LibString {
    char* s = nullptr;
    ~LibString() { hm_string_free(s); }
};

std::optional<std::string> read_input(const std::string& path)
{
    if (path.empty() || path == "-")
        return std::string(std::istreambuf_iterator<char>(std::cin), {});
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    return std::string(std::istreambuf_iterator<char>(in), {});
}

// Writes to the output path, or stdout when it is empty or "-".
class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary | std::ios::trunc);
            stream_ = &file_;
        }
    }
    bool ok() const { return static_cast<bool>(*stream_); }
    void write(const std::string& s)
    {
        *stream_ << s;
        stream_->flush();
    }

private:
    std::ofstream file_;
    std::ostream* stream_ = &std::cout;
};

const char* opt_cstr(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

struct EvalArgs {
    std::string function, method, input, output;
};

int run_eval(const EvalArgs& a)
{
    const auto text = read_input(a.input);
    if (!text) {
        std::cerr << "hypermat-cli: cannot read " << a.input << "\n";
        return kInputError;
    }
    LibString out;
    const hm_status s = hm_eval_json(text->c_str(), opt_cstr(a.function), opt_cstr(a.method), &out.s);
    if (s != HM_OK)
        return report_failure(s);
    Output o(a.output);
    if (!o.ok()) {
        std::cerr << "hypermat-cli: cannot write " << a.output << "\n";
        return kInputError;
    }
    o.write(std::string(out.s) + "\n");
    return kOk;
}

struct VerifyArgs {
    std::uint64_t seed = 42;
    std::string profile = "quick", identity, output;
    double tol = 0.0;
};

int run_verify(const VerifyArgs& a)
{
    Output o(a.output);
    if (!o.ok()) {
        std::cerr << "hypermat-cli: cannot write " << a.output << "\n";
        return kInputError;
    }
    bool all_passed = true;
    auto one = [&](const char* identity) -> int {
        LibString out;
        int passed = 0;
        const hm_status s = hm_verify_json(a.seed, a.profile.c_str(), identity, a.tol, &out.s, &passed);
        if (s != HM_OK)
            return report_failure(s);
        o.write(out.s);
        all_passed = all_passed && passed != 0;
        return kOk;
    };
    if (!a.identity.empty()) {
        if (const int rc = one(a.identity.c_str()))
            return rc;
    } else {
        // One identity at a time so reports stream as they finish.
        for (size_t i = 0; i < hm_identity_count(); ++i)
            if (const int rc = one(hm_identity_name(i)))
                return rc;
    }
    return all_passed ? kOk : kVerifyFail;
}

struct FamilyArgs {
    std::uint64_t seed = 42;
    int r = 2;
    std::string roles, output;
    std::vector<double> window;
};

int run_gen_family(const FamilyArgs& a)
{
    double lo = 0.0, hi = 0.0;
    if (!a.window.empty()) {
        lo = a.window[0];
        hi = a.window[1];
    }
    LibString out;
    const hm_status s = hm_gen_family_json(a.seed, a.r, opt_cstr(a.roles), lo, hi, &out.s);
    if (s != HM_OK)
        return report_failure(s);
    Output o(a.output);
    if (!o.ok()) {
        std::cerr << "hypermat-cli: cannot write " << a.output << "\n";
        return kInputError;
    }
    o.write(std::string(out.s) + "\n");
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Extended beta, hypergeometric and fractional-calculus matrix functions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", hm_version());

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "Evaluate a function on a JSON parameter family");
    eval->add_option("--function", ea.function,
                     "gauss_2f1, ext_gauss, ext_kummer, ext_appell_f1, ext_appell_f2, ext_lauricella_fd3, "
                     "beta, ext_beta or gamma (overrides \"function\" in the input)");
    eval->add_option("--method", ea.method, "series or integral (overrides \"method\" in the input)")
        ->check(CLI::IsMember({"series", "integral"}));
    eval->add_option("--input", ea.input, "input JSON path, - for stdin")->default_val("-");
    eval->add_option("--output", ea.output, "output path, - for stdout")->default_val("-");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run identity verification and stream NDJSON reports");
    verify->add_option("--seed", va.seed, "base seed")->default_val(42);
    verify->add_option("--profile", va.profile, "quick or full")
        ->default_val("quick")
        ->check(CLI::IsMember({"quick", "full"}));
    verify->add_option("--identity", va.identity, "run a single identity, e.g. THM_3_1");
    verify->add_option("--tol", va.tol, "tolerance overriding every per-identity default")
        ->check(CLI::PositiveNumber);
    verify->add_option("--output", va.output, "output path, - for stdout")->default_val("-");

    FamilyArgs fa;
    auto* family = app.add_subcommand("gen-family", "Emit a random commuting positive-stable family as JSON");
    family->add_option("--seed", fa.seed, "seed")->default_val(42);
    family->add_option("--r", fa.r, "matrix dimension")->default_val(2)->check(CLI::PositiveNumber);
    family->add_option("--roles", fa.roles, "comma-separated roles, e.g. A,B,C,X (default: all)");
    family->add_option("--window", fa.window, "spectral window lo hi applied to every role")->expected(2);
    family->add_option("--output", fa.output, "output path, - for stdout")->default_val("-");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    if (*eval)
        return run_eval(ea);
    if (*verify)
        return run_verify(va);
    return run_gen_family(fa);
}
