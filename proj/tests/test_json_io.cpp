#include "doctest.h"
#include "hypermat/errors.hpp"
#include "json_io.hpp"
#include "support.hpp"

using namespace hypermat;
using namespace hypermat::json_io;
using namespace hmtest;

TEST_CASE("matrix encoding round trips")
{
    const ComplexMatrix m = mat(2, {Complex(1.0, -2.0), 3.5, 0.0, Complex(0.0, 1e-300)});
    const Json j = matrix_to_json(m);
    CHECK(j["rows"] == 2);
    CHECK(j["data"].size() == 4);
    CHECK(matrix_from_json(j, "M") == m);
    CHECK(matrix_from_json(Json::parse(j.dump()), "M") == m);
}

TEST_CASE("matrix decoding is strict")
{
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows":2,"cols":2,"data":[1,2,3]})"), "M"), DomainError);
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows":1,"cols":1,"data":[1],"extra":0})"), "M"), DomainError);
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows":1,"cols":1,"data":["x"]})"), "M"), DomainError);
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows":2,"cols":1,"data":[1,2]})"), "M"), DomainError);
    CHECK(matrix_from_json(Json::parse(R"({"rows":1,"cols":1,"data":[[0.5,-1]]})"), "M")(0, 0) == Complex(0.5, -1.0));
}

TEST_CASE("eval requests")
{
    const std::string doc = R"({"members":{"A":{"rows":1,"cols":1,"data":[1]},
        "B":{"rows":1,"cols":1,"data":[1]},"C":{"rows":1,"cols":1,"data":[2]}},
        "z":0.5,"function":"ext_gauss","options":{"term_tol":1e-14}})";
    const EvalRequest req = parse_eval_request(doc, std::string("gauss_2f1"), std::nullopt);
    CHECK(req.function == HyperFunction::gauss_2f1);
    CHECK(req.point.z == Complex(0.5, 0.0));
    CHECK(req.options.series.term_tol == 1e-14);
    const Json out = run_eval_request(req);
    CHECK(out["method"] == "series");
    CHECK(std::abs(out["result"]["data"][0][0].get<double>() - 2.0 * std::log(2.0)) < 1e-12);

    CHECK_THROWS_AS(parse_eval_request(R"({"members":{}, "colour":1})", std::string("ext_gauss"), std::nullopt),
                    DomainError);
    CHECK_THROWS_AS(parse_eval_request(R"({"members":{"Q":{"rows":1,"cols":1,"data":[1]}}})",
                                       std::string("ext_gauss"), std::nullopt),
                    DomainError);
    CHECK_THROWS_AS(parse_eval_request(R"({"members":{}})", std::string("hyp0f1"), std::nullopt), DomainError);
    CHECK_THROWS_AS(parse_eval_request("{not json", std::string("ext_gauss"), std::nullopt), DomainError);
    CHECK_THROWS_AS(parse_eval_request(R"({"members":{},"options":{"term_tol":1e-14,"tol":1}})",
                                       std::string("ext_gauss"), std::nullopt),
                    DomainError);
}

TEST_CASE("families serialize in role order and feed back as eval input")
{
    const CommutingFamily fam = random_commuting_family(21, 2, default_role_layout());
    Json j = family_to_json(fam);
    std::vector<std::string> keys;
    for (const auto& item : j["members"].items())
        keys.push_back(item.key());
    CHECK(keys == std::vector<std::string>{"A", "B", "B'", "B''", "C", "C'", "X"});
    j["z"] = {0.2, 0.1};
    j["w"] = -0.3;
    const EvalRequest req = parse_eval_request(j.dump(), std::string("ext_appell_f1"), std::string("integral"));
    CHECK(req.method == Method::integral);
    CHECK(*req.params.A == fam.at("A"));
    CHECK_NOTHROW(run_eval_request(req));
}
