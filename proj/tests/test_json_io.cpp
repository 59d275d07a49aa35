#include <doctest.h>

#include "wpw/errors.hpp"
#include "wpw/json_io.hpp"

#include <cmath>

using namespace wpw;

TEST_CASE("weight JSON round-trip is exact for every family") {
    std::vector<WeightFunction> ws;
    ws.push_back(WeightFunction::constant(2.5, 1.0));
    ws.push_back(WeightFunction::exponential(-3.7, 2.0));
    ws.push_back(WeightFunction::log_quadratic(4.0, 0.3333333333333333, 1.0));
    ws.push_back(WeightFunction::power(1.5, -0.1, 0.5));
    ws.push_back(WeightFunction::piecewise_log_linear({0.0, 0.4, 1.0}, {0.1, 0.7, -0.2}));
    ws.push_back(WeightFunction::product(
        {WeightFunction::exponential(0.1, 1.0), WeightFunction::log_quadratic(1.0, 0.5, 1.0)}));
    for (std::uint64_t seed = 0; seed < 25; ++seed)
        ws.push_back(random_log_concave(seed, 1.0));

    for (std::size_t i = 0; i < ws.size(); ++i) {
        CAPTURE(i);
        const std::string text = weight_to_json(ws[i]);
        WeightFunction back = weight_from_json(text);
        CHECK(back.family() == ws[i].family());
        CHECK(back.length() == ws[i].length());
        for (int k = 0; k <= 64; ++k) {
            const double x = ws[i].length() * k / 64.0;
            CHECK(back.evaluate(x) == ws[i].evaluate(x)); // bitwise round-trip
        }
        // serialization is deterministic
        CHECK(weight_to_json(back) == text);
    }
}

TEST_CASE("weight JSON rejects malformed input") {
    CHECK_THROWS_AS(weight_from_json("not json"), Error);
    CHECK_THROWS_AS(weight_from_json("{\"family\":\"nope\",\"params\":{},\"L\":1.0}"), Error);
    CHECK_THROWS_AS(weight_from_json("{\"family\":\"constant\",\"params\":{},\"L\":1.0}"),
                    Error);
}

TEST_CASE("eigen result serialization carries the trace") {
    auto prob = EigenProblem(WeightFunction::constant(1.0, 1.0), PExponent(2.0));
    auto r = first_nontrivial_eigenvalue(prob, 1e-9);
    const std::string j = eigen_result_to_json(r);
    CHECK(j.find("\"lambda\"") != std::string::npos);
    CHECK(j.find("\"x_zero\"") != std::string::npos);
    CHECK(j.find("\"trace\"") != std::string::npos);

    const std::string csv = trace_to_csv(r);
    CHECK(csv.rfind("x,u\n", 0) == 0);
    // one row per trace point plus the header
    std::size_t rows = 0;
    for (char ch : csv)
        rows += (ch == '\n');
    CHECK(rows == r.trace.size() + 1);
}

TEST_CASE("certificate CSV and JSONL formats") {
    std::vector<BoundCertificate> cs;
    cs.push_back(make_certificate("proposition_1d", 2.0, 1.0, 10.0, 1e-6, "a"));
    cs.push_back(make_certificate("theorem_2d", 3.0, 1.4142, 8.0, 1e-6, "b"));
    const std::string csv = certificates_to_csv(cs);
    CHECK(csv.rfind("kind,p,scale,lambda,bound,margin,pass\n", 0) == 0);
    const std::string jsonl = certificates_to_jsonl(cs);
    std::size_t lines = 0;
    for (char ch : jsonl)
        lines += (ch == '\n');
    CHECK(lines == 2);
    // deterministic byte-for-byte
    CHECK(certificates_to_jsonl(cs) == jsonl);
}

TEST_CASE("decomposition JSON and SVG") {
    auto sq = ConvexPolygon::rectangle(0, 0, 1, 1);
    ScalarField u = linear_field({1.0, 0.0}, 0.5);
    auto dec = decompose(sq, u, Weight2D::constant(1.0), PExponent(2.0), 0.5, 1e-7);
    const std::string j = decomposition_to_json(dec);
    CHECK(j.find("\"slices\"") != std::string::npos);
    CHECK(j.find("\"width\"") != std::string::npos);
    const std::string svg = decomposition_to_svg(dec);
    CHECK(svg.rfind("<svg", 0) == 0);
    std::size_t polys = 0;
    for (std::size_t pos = svg.find("<polygon"); pos != std::string::npos;
         pos = svg.find("<polygon", pos + 1))
        ++polys;
    CHECK(polys == dec.slices.size());
}
