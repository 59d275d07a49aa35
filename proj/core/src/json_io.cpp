#include "wpw/json_io.hpp"
#include "wpw/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace wpw {

using nlohmann::json;

namespace {

json weight_to_json_obj(const WeightFunction& w) {
    json j;
    j["L"] = w.length();
    struct Visitor {
        json& j;
        double L;
        void operator()(const WeightFunction::ConstantP& p) const {
            j["family"] = "constant";
            j["params"] = {{"c", p.c}};
        }
        void operator()(const WeightFunction::ExponentialP& p) const {
            j["family"] = "exponential";
            j["params"] = {{"kappa", p.kappa}};
        }
        void operator()(const WeightFunction::LogQuadraticP& p) const {
            j["family"] = "log_quadratic";
            j["params"] = {{"a", p.a}, {"m", p.m}};
        }
        void operator()(const WeightFunction::PowerP& p) const {
            j["family"] = "power";
            j["params"] = {{"alpha", p.alpha}, {"x0", p.x0}};
        }
        void operator()(const WeightFunction::PiecewiseP& p) const {
            j["family"] = "piecewise_log_linear";
            j["params"] = {{"breakpoints", p.breakpoints}, {"logvalues", p.logvalues}};
        }
        void operator()(const WeightFunction::ProductP& p) const {
            j["family"] = "product";
            json factors = json::array();
            for (const auto& f : p.factors)
                factors.push_back(weight_to_json_obj(f));
            j["params"] = {{"factors", std::move(factors)}};
        }
    };
    std::visit(Visitor{j, w.length()}, w.params());
    return j;
}

WeightFunction weight_from_json_obj(const json& j) {
    const std::string family = j.at("family").get<std::string>();
    const json& p = j.at("params");
    if (family == "product") {
        std::vector<WeightFunction> factors;
        for (const auto& f : p.at("factors"))
            factors.push_back(weight_from_json_obj(f));
        return WeightFunction::product(std::move(factors));
    }
    const double L = j.at("L").get<double>();
    if (family == "constant")
        return WeightFunction::constant(p.at("c").get<double>(), L);
    if (family == "exponential")
        return WeightFunction::exponential(p.at("kappa").get<double>(), L);
    if (family == "log_quadratic")
        return WeightFunction::log_quadratic(p.at("a").get<double>(), p.at("m").get<double>(),
                                             L);
    if (family == "power")
        return WeightFunction::power(p.at("alpha").get<double>(), p.at("x0").get<double>(), L);
    if (family == "piecewise_log_linear")
        return WeightFunction::piecewise_log_linear(
            p.at("breakpoints").get<std::vector<double>>(),
            p.at("logvalues").get<std::vector<double>>());
    throw DomainError("unknown weight family '" + family + "'");
}

json certificate_to_json_obj(const BoundCertificate& c) {
    json j;
    j["kind"] = c.kind;
    j["p"] = c.p;
    j["scale"] = c.scale;
    j["lambda"] = c.computed_lambda;
    j["bound"] = c.bound;
    j["margin"] = c.margin;
    j["rel_tol"] = c.rel_tol;
    if (c.oracle_lambda != 0.0) {
        j["oracle_lambda"] = c.oracle_lambda;
        j["oracle_rel_tol"] = c.oracle_rel_tol;
    }
    j["pass"] = c.pass;
    j["provenance"] = c.provenance;
    return j;
}

} // namespace

std::string weight_to_json(const WeightFunction& w) { return weight_to_json_obj(w).dump(); }

WeightFunction weight_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DomainError(std::string("weight JSON parse failure: ") + e.what());
    }
    try {
        return weight_from_json_obj(j);
    } catch (const json::exception& e) {
        throw DomainError(std::string("weight JSON schema failure: ") + e.what());
    }
}

std::string eigen_result_to_json(const EigenResult& r) {
    json j;
    j["lambda"] = r.lambda;
    j["x_zero"] = r.x_zero;
    j["bracket"] = {r.bracket.first, r.bracket.second};
    j["residual"] = r.shoot_residual;
    std::vector<double> xs, us;
    xs.reserve(r.trace.size());
    us.reserve(r.trace.size());
    for (const auto& [x, u] : r.trace) {
        xs.push_back(x);
        us.push_back(u);
    }
    j["trace"] = {{"x", std::move(xs)}, {"u", std::move(us)}};
    return j.dump();
}

std::string trace_to_csv(const EigenResult& r) {
    std::string out = "x,u\n";
    char buf[64];
    for (const auto& [x, u] : r.trace) {
        std::snprintf(buf, sizeof buf, "%.9e,%.9e\n", x, u);
        out += buf;
    }
    return out;
}

std::string certificate_to_json(const BoundCertificate& c) {
    return certificate_to_json_obj(c).dump();
}

BoundCertificate certificate_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
        BoundCertificate c;
        c.kind = j.at("kind").get<std::string>();
        c.p = j.at("p").get<double>();
        c.scale = j.at("scale").get<double>();
        c.computed_lambda = j.at("lambda").get<double>();
        c.bound = j.at("bound").get<double>();
        c.margin = j.at("margin").get<double>();
        c.rel_tol = j.at("rel_tol").get<double>();
        if (j.contains("oracle_lambda")) {
            c.oracle_lambda = j["oracle_lambda"].get<double>();
            c.oracle_rel_tol = j.value("oracle_rel_tol", 0.0);
        }
        c.pass = j.at("pass").get<bool>();
        c.provenance = j.value("provenance", "");
        return c;
    } catch (const json::exception& e) {
        throw DomainError(std::string("certificate JSON failure: ") + e.what());
    }
}

std::string certificates_to_jsonl(const std::vector<BoundCertificate>& cs) {
    std::string out;
    for (const auto& c : cs) {
        out += certificate_to_json_obj(c).dump();
        out += '\n';
    }
    return out;
}

std::string certificates_to_csv(const std::vector<BoundCertificate>& cs) {
    std::string out = "kind,p,scale,lambda,bound,margin,pass\n";
    char buf[256];
    for (const auto& c : cs) {
        std::snprintf(buf, sizeof buf, "%s,%.12g,%.12g,%.12g,%.12g,%.12g,%d\n",
                      c.kind.c_str(), c.p, c.scale, c.computed_lambda, c.bound, c.margin,
                      c.pass ? 1 : 0);
        out += buf;
    }
    return out;
}

std::string decomposition_to_json(const Decomposition& d) {
    json j;
    j["epsilon"] = d.epsilon;
    j["moment_tol"] = d.moment_tol;
    json slices = json::array();
    for (const Slice& s : d.slices) {
        json js;
        json verts = json::array();
        for (const Vec2& v : s.polygon.vertices())
            verts.push_back({v.x, v.y});
        js["vertices"] = std::move(verts);
        js["origin"] = {s.origin.x, s.origin.y};
        js["e1"] = {s.e1.x, s.e1.y};
        js["length"] = s.length;
        js["width"] = s.width;
        js["moment"] = s.moment;
        slices.push_back(std::move(js));
    }
    j["slices"] = std::move(slices);
    return j.dump();
}

std::string decomposition_to_svg(const Decomposition& d) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    double dmax = 0.0;
    for (const Slice& s : d.slices) {
        dmax = std::max(dmax, s.length);
        for (const Vec2& v : s.polygon.vertices()) {
            xmin = std::min(xmin, v.x);
            xmax = std::max(xmax, v.x);
            ymin = std::min(ymin, v.y);
            ymax = std::max(ymax, v.y);
        }
    }
    const double w = xmax - xmin, h = ymax - ymin;
    const double scale = 600.0 / std::max(w, h);
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w * scale + 20
        << "\" height=\"" << h * scale + 20 << "\" viewBox=\"0 0 " << w * scale + 20 << " "
        << h * scale + 20 << "\">\n";
    auto tx = [&](double x) { return 10.0 + (x - xmin) * scale; };
    auto ty = [&](double y) { return 10.0 + (ymax - y) * scale; }; // flip y for SVG
    for (const Slice& s : d.slices) {
        const double hue = dmax > 0.0 ? 240.0 * (1.0 - s.length / dmax) : 0.0;
        svg << "<polygon points=\"";
        for (const Vec2& v : s.polygon.vertices())
            svg << tx(v.x) << "," << ty(v.y) << " ";
        svg << "\" fill=\"hsl(" << hue
            << ",70%,60%)\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace wpw
