// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// Usage: hypermat_acceptance [report-dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hypermat/gamma_beta.hpp"
#include "hypermat/identity_verify.hpp"
#include "json.hpp"

using namespace hypermat;

namespace {

constexpr std::uint64_t kSeed = 42;

struct Criterion {
    Criterion(int n, std::string t) : number(n), title(std::move(t)) {}

    int number;
    std::string title;
    bool ok = true;
    std::vector<std::string> notes;

    void require(bool cond, const std::string& what)
    {
        ok = ok && cond;
        notes.push_back((cond ? "" : "FAILED ") + what);
    }
};

std::string sci(double v)
{
    std::ostringstream os;
    os.precision(2);
    os << std::scientific << v;
    return os.str();
}

double worst(const std::vector<double>& v)
{
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string ndjson(const std::vector<VerifyReport>& reports)
{
    std::string s;
    for (const auto& r : reports)
        s += report_to_json(r) + "\n";
    return s;
}

const VerifyReport& find(const std::vector<VerifyReport>& reports, IdentityId id)
{
    return *std::find_if(reports.begin(), reports.end(), [&](const VerifyReport& r) { return r.id == id; });
}

// Runs `body`, turning any exception into a failed requirement.
template <class F>
void guarded(Criterion& c, F&& body)
{
    try {
        body();
    } catch (const std::exception& e) {
        c.require(false, std::string("exception: ") + e.what());
    }
}

void print(const Criterion& c)
{
    std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << c.number << ": " << c.title;
    for (std::size_t i = 0; i < c.notes.size(); ++i)
        std::cout << (i == 0 ? " [" : "; ") << c.notes[i];
    std::cout << (c.notes.empty() ? "" : "]") << std::endl;
}

bool schema_valid(const std::string& line)
{
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || j.size() != 6)
        return false;
    if (!j.contains("identity") || !j["identity"].is_string() || !identity_from_name(j["identity"].get<std::string>()))
        return false;
    if (!j.contains("seed") || !j["seed"].is_number_unsigned())
        return false;
    if (!j.contains("r") || !j["r"].is_number_integer())
        return false;
    if (!j.contains("tolerance") || !j["tolerance"].is_number())
        return false;
    if (!j.contains("residuals") || !j["residuals"].is_array() || j["residuals"].empty())
        return false;
    for (const auto& v : j["residuals"])
        if (!v.is_number())
            return false;
    if (!j.contains("verdict") || !j["verdict"].is_string())
        return false;
    const std::string v = j["verdict"].get<std::string>();
    return v == "pass" || v == "fail" || v == "probe-only";
}

} // namespace

int main(int argc, char** argv)
{
    const std::filesystem::path out_dir = argc > 1 ? argv[1] : ".";
    std::filesystem::create_directories(out_dir);
    std::vector<Criterion> results;

    // quick suite twice: timing for 1, probes for 7, determinism for 8
    auto t0 = std::chrono::steady_clock::now();
    std::vector<VerifyReport> quick;
    std::string quick_error;
    try {
        quick = run_suite(kSeed, Profile::quick);
    } catch (const std::exception& e) {
        quick_error = e.what();
    }
    const double quick_seconds = seconds_since(t0);

    {
        Criterion c{1, "series and integral representations agree to 1e-6"};
        guarded(c, [&] {
            c.require(quick_error.empty(), "quick suite ran" + (quick_error.empty() ? "" : ": " + quick_error));
            c.require(quick_seconds <= 120.0, "quick suite " + sci(quick_seconds) + " s <= 120 s");
            t0 = std::chrono::steady_clock::now();
            const std::vector<VerifyReport> full = run_suite(kSeed, Profile::full);
            const double full_seconds = seconds_since(t0);
            c.require(full_seconds <= 600.0, "full suite " + sci(full_seconds) + " s <= 600 s");
            for (IdentityId id : {IdentityId::THM_3_1, IdentityId::THM_3_2, IdentityId::THM_3_3}) {
                const VerifyReport& r = find(full, id);
                c.require(worst(r.residuals) <= 1e-6 && r.r == 3,
                          std::string(identity_name(id)) + " max " + sci(worst(r.residuals)) + " over " +
                              std::to_string(r.residuals.size()));
            }
            for (HyperFunction f : {HyperFunction::ext_gauss, HyperFunction::ext_kummer}) {
                std::vector<double> all;
                for (int r : {1, 2, 3}) {
                    const auto res = cross_method_residuals(f, kSeed, r, 50);
                    all.insert(all.end(), res.begin(), res.end());
                }
                c.require(worst(all) <= 1e-6,
                          std::string(function_name(f)) + " max " + sci(worst(all)) + " over " +
                              std::to_string(all.size()));
            }
        });
        print(c);
        results.push_back(c);
    }

    {
        Criterion c{2, "reduction chain"};
        guarded(c, [&] {
            double beta_worst = 0.0;
            for (int r : {1, 2, 3})
                for (int i = 0; i < 10; ++i) {
                    const CommutingFamily f = random_commuting_family(kSeed + 1000 * r + i, r, default_role_layout());
                    const ComplexMatrix& a = f.at("A");
                    const ComplexMatrix& b = f.at("B");
                    const ComplexMatrix e = extended_beta(a, b, zeros(r)).value;
                    beta_worst = std::max({beta_worst, relative_residual(e, beta_matrix(a, b)),
                                           relative_residual(e, beta_matrix_gamma_form(a, b))});
                }
            c.require(beta_worst <= 1e-10, "B(A,B;O) = B(A,B) max " + sci(beta_worst));
            std::vector<double> all;
            for (int r : {1, 2, 3}) {
                const VerifyReport rep = verify_identity(IdentityId::X_ZERO_REDUCTIONS, kSeed, r, 10);
                all.insert(all.end(), rep.residuals.begin(), rep.residuals.end());
            }
            c.require(worst(all) <= 1e-8, "EGHMF(X=O)=2F1, FD3(v=0)=F1, F1(w=0)=EGHMF max " + sci(worst(all)));
        });
        print(c);
        results.push_back(c);
    }

    {
        Criterion c{3, "scalar reduction against independent oracles"};
        guarded(c, [&] {
            const VerifyReport rep = verify_identity(IdentityId::SCALAR_REDUCTION, kSeed, 1, 20);
            c.require(worst(rep.residuals) <= 1e-9, "20 draws, max " + sci(worst(rep.residuals)));
            HyperParams p;
            p.A = identity(1);
            p.B = identity(1);
            p.C = 2.0 * identity(1);
            p.X = zeros(1);
            double closed = 0.0;
            for (Method m : {Method::series, Method::integral}) {
                EvalOptions o;
                o.method = m;
                closed = std::max(closed, std::abs(eval_gauss_2f1(p, {0.5, 0.0, 0.0}, o).value(0, 0) -
                                                   2.0 * std::log(2.0)));
                closed = std::max(closed, std::abs(eval_ext_kummer(p, {1.0, 0.0, 0.0}, o).value(0, 0) -
                                                   (std::exp(1.0) - 1.0)));
            }
            c.require(closed <= 1e-9, "2F1(1,1;2;1/2) = 2 ln 2 and 1F1(1;2;1) = e - 1, max " + sci(closed));
        });
        print(c);
        results.push_back(c);
    }

    {
        Criterion c{4, "gamma and beta kernel identities"};
        guarded(c, [&] {
            std::vector<double> poch, fact;
            for (int r : {1, 2, 3}) {
                const VerifyReport p5 = verify_identity(IdentityId::EQ_2_5, kSeed, r, 20);
                const VerifyReport p6 = verify_identity(IdentityId::EQ_2_6, kSeed, r, 20);
                poch.insert(poch.end(), p5.residuals.begin(), p5.residuals.end());
                fact.insert(fact.end(), p6.residuals.begin(), p6.residuals.end());
            }
            c.require(worst(poch) <= 1e-10, "Pochhammer-gamma max " + sci(worst(poch)));
            c.require(worst(fact) <= 1e-9, "beta factorization max " + sci(worst(fact)));
            double inf_worst = 0.0, limit_worst = 0.0;
            for (int r : {1, 2, 3})
                for (int i = 0; i < 10; ++i) {
                    const CommutingFamily f = random_commuting_family(kSeed + 7000 + 100 * r + i, r,
                                                                      default_role_layout());
                    const ComplexMatrix& a = f.at("A");
                    const ComplexMatrix& b = f.at("B");
                    inf_worst = std::max(inf_worst, relative_residual(beta_matrix_infinite_form(a, b),
                                                                      beta_matrix_gamma_form(a, b)));
                    if (r <= 2)
                        limit_worst =
                            std::max(limit_worst, relative_residual(gamma_limit(a, 100000), gamma_matrix(a)));
                }
            c.require(inf_worst <= 1e-8, "infinite-interval form max " + sci(inf_worst));
            c.require(limit_worst <= 1e-4, "limit formula at n = 1e5 max " + sci(limit_worst));
        });
        print(c);
        results.push_back(c);
    }

    {
        Criterion c{5, "fractional-derivative closed forms to 1e-7"};
        guarded(c, [&] {
            for (IdentityId id : {IdentityId::THM_4_2, IdentityId::THM_4_3, IdentityId::THM_4_4, IdentityId::THM_4_5}) {
                std::vector<double> all;
                for (int r : {1, 2}) {
                    VerifyConfig cfg;
                    cfg.tolerance = 1e-7;
                    const VerifyReport rep = verify_identity(id, kSeed, r, 25, cfg);
                    all.insert(all.end(), rep.residuals.begin(), rep.residuals.end());
                }
                c.require(worst(all) <= 1e-7, std::string(identity_name(id)) + " max " + sci(worst(all)));
            }
        });
        print(c);
        results.push_back(c);
    }

    {
        Criterion c{6, "generating relations to 1e-6"};
        guarded(c, [&] {
            for (IdentityId id : {IdentityId::THM_5_1, IdentityId::THM_5_2}) {
                std::vector<double> all;
                for (int r : {1, 2, 3}) {
                    const VerifyReport rep = verify_identity(id, kSeed, r, 25);
                    all.insert(all.end(), rep.residuals.begin(), rep.residuals.end());
                }
                c.require(worst(all) <= 1e-6, std::string(identity_name(id)) + " max " + sci(worst(all)));
            }
        });
        print(c);
        results.push_back(c);
    }

    {
        Criterion c{7, "probe reports emitted and schema-valid"};
        guarded(c, [&] {
            c.require(quick.size() == 17, std::to_string(quick.size()) + " reports");
            const std::filesystem::path path = out_dir / "acceptance_quick_reports.ndjson";
            {
                std::ofstream os(path, std::ios::binary | std::ios::trunc);
                os << ndjson(quick);
            }
            std::ifstream in(path);
            std::string line;
            int lines = 0, valid = 0;
            while (std::getline(in, line)) {
                ++lines;
                valid += schema_valid(line) ? 1 : 0;
            }
            c.require(lines == 17 && valid == 17, std::to_string(valid) + "/" + std::to_string(lines) +
                                                       " schema-valid lines in " + path.string());
            for (IdentityId id : {IdentityId::THM_4_6, IdentityId::THM_4_6_VARIANT, IdentityId::EQ_2_14_PROBE,
                                  IdentityId::B_FACTORIZATION_PROBE}) {
                const VerifyReport& r = find(quick, id);
                c.require(r.verdict == Verdict::probe_only && !r.residuals.empty(),
                          std::string(identity_name(id)) + " probe-only, max " + sci(worst(r.residuals)));
            }
            c.require(suite_passed(quick), "quick suite passes with probes present");
        });
        print(c);
        results.push_back(c);
    }

    {
        Criterion c{8, "run_suite is byte-identical across runs"};
        guarded(c, [&] {
            const std::string first = ndjson(quick);
            const std::string second = ndjson(run_suite(kSeed, Profile::quick));
            c.require(!first.empty() && first == second, std::to_string(first.size()) + " bytes compared");
        });
        print(c);
        results.push_back(c);
    }

    const bool all = std::all_of(results.begin(), results.end(), [](const Criterion& c) { return c.ok; });
    return all ? 0 : 1;
}
