// wpw: weighted Poincare-Wirtinger toolkit command line front end.
//
// Subcommands: pip, eig1d, oracle1d, verify-prop, slice, verify-2d, report.
// Exit status: 0 on success with all certificates passing, 1 when any
// certificate fails or a solver signals, 2 on usage errors. JSON outputs are
// byte-identical across runs for identical configuration and seed.

#include <CLI11.hpp>
#include <json.hpp>

#include "wpw/bounds.hpp"
#include "wpw/errors.hpp"
#include "wpw/json_io.hpp"
#include "wpw/rayleigh.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace {

using namespace wpw;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DomainError("cannot open output file '" + path + "'");
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DomainError("cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(std::stod(item));
    if (out.empty())
        throw DomainError("expected a comma-separated list of numbers");
    return out;
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const auto s = std::stoull(text);
        return {s, s + 1};
    }
    const auto a = std::stoull(text.substr(0, dots));
    const auto b = std::stoull(text.substr(dots + 2));
    if (b < a)
        throw DomainError("seed range must be ascending");
    return {a, b + 1}; // inclusive notation a..b
}

// weight option: either a named family with parameters or a JSON file/string
struct WeightOpts {
    std::string family = "constant";
    std::string json;
    double c = 1.0, kappa = 1.0, a = 1.0, m = 0.5, alpha = 1.0, x0 = 0.0;
    std::uint64_t seed = 0;
    double L = 1.0;

    WeightFunction build() const {
        if (!json.empty()) {
            if (json.front() == '{')
                return weight_from_json(json);
            return weight_from_json(read_file(json));
        }
        if (family == "constant")
            return WeightFunction::constant(c, L);
        if (family == "exponential")
            return WeightFunction::exponential(kappa, L);
        if (family == "log-quadratic")
            return WeightFunction::log_quadratic(a, m, L);
        if (family == "power")
            return WeightFunction::power(alpha, x0, L);
        if (family == "random")
            return random_log_concave(seed, L);
        throw DomainError("unknown weight family '" + family + "'");
    }
};

void add_weight_opts(CLI::App* cmd, WeightOpts& w) {
    cmd->add_option("--weight", w.family,
                    "weight family: constant|exponential|log-quadratic|power|random")
        ->capture_default_str();
    cmd->add_option("--weight-json", w.json, "weight as JSON text or a path to a JSON file");
    cmd->add_option("--c", w.c, "constant value")->capture_default_str();
    cmd->add_option("--kappa", w.kappa, "exponential log-slope")->capture_default_str();
    cmd->add_option("--a", w.a, "log-quadratic curvature")->capture_default_str();
    cmd->add_option("--m", w.m, "log-quadratic mode")->capture_default_str();
    cmd->add_option("--alpha", w.alpha, "power exponent")->capture_default_str();
    cmd->add_option("--x0", w.x0, "power offset")->capture_default_str();
    cmd->add_option("--seed", w.seed, "seed for --weight random")->capture_default_str();
    cmd->add_option("--L", w.L, "interval length")->capture_default_str();
}

ConvexPolygon build_polygon(const std::string& spec) {
    if (spec == "square")
        return ConvexPolygon::rectangle(0, 0, 1, 1);
    if (spec.rfind("disk:", 0) == 0)
        return ConvexPolygon::regular(std::stoi(spec.substr(5)), 1.0);
    if (spec.rfind("seed:", 0) == 0)
        return random_convex_polygon(std::stoull(spec.substr(5)));
    // otherwise a JSON file with {"vertices": [[x, y], ...]}
    const auto j = nlohmann::json::parse(read_file(spec));
    std::vector<Vec2> verts;
    for (const auto& v : j.at("vertices"))
        verts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    return ConvexPolygon(std::move(verts));
}

Weight2D build_weight_2d(const std::string& spec) {
    if (spec == "const" || spec == "constant")
        return Weight2D::constant(1.0);
    if (spec.rfind("explin:", 0) == 0) {
        auto v = parse_list(spec.substr(7));
        if (v.size() != 2)
            throw DomainError("explin needs gx,gy");
        return Weight2D::log_linear({v[0], v[1]});
    }
    if (spec.rfind("gauss:", 0) == 0) {
        auto v = parse_list(spec.substr(6));
        if (v.size() != 3)
            throw DomainError("gauss needs a,mx,my");
        return Weight2D::gaussian(v[0], 0.0, v[0], {v[1], v[2]});
    }
    if (spec.rfind("seed:", 0) == 0)
        return random_weight_2d(std::stoull(spec.substr(5)));
    throw DomainError("unknown 2D weight '" + spec + "'");
}

int report_certificates(const std::vector<BoundCertificate>& certs) {
    int failures = 0;
    for (const auto& c : certs)
        if (!c.pass) {
            ++failures;
            std::cerr << "FAIL " << c.kind << " " << c.provenance << " margin=" << c.margin
                      << "\n";
        }
    std::printf("%zu certificates, %d failing\n", certs.size(), failures);
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted Poincare-Wirtinger sharp-bound toolkit"};
    app.require_subcommand(1);

    // ---- pip ----
    double pip_p = 2.0, pip_tol = 1e-10;
    bool pip_quad = false;
    std::string pip_json;
    auto* pip = app.add_subcommand("pip", "generalized constant pi_p");
    pip->add_option("--p", pip_p, "exponent p > 1")->required();
    pip->add_option("--tol", pip_tol, "quadrature tolerance")->capture_default_str();
    pip->add_flag("--quadrature", pip_quad, "print the quadrature value instead of closed form");
    pip->add_option("--json", pip_json, "write {p, closed, quadrature, error} to a file");

    // ---- eig1d ----
    WeightOpts ew;
    double e_p = 2.0, e_tol = 1e-9;
    std::string e_json, e_csv;
    auto* eig = app.add_subcommand("eig1d", "first nontrivial Neumann eigenvalue by shooting");
    add_weight_opts(eig, ew);
    eig->add_option("--p", e_p, "exponent p > 1")->capture_default_str();
    eig->add_option("--tol", e_tol, "relative bracket tolerance")->capture_default_str();
    eig->add_option("--json", e_json, "write the EigenResult as JSON");
    eig->add_option("--trace-csv", e_csv, "write the eigenfunction trace as x,u CSV");

    // ---- oracle1d ----
    WeightOpts ow;
    double o_p = 2.0, o_tol = 1e-9;
    int o_nodes = 2001;
    std::string o_method = "riccati", o_json;
    std::uint64_t o_seed = 0;
    auto* ora = app.add_subcommand("oracle1d", "independent eigenvalue oracles");
    ora->add_option("--method", o_method, "riccati|rayleigh")->capture_default_str();
    ora->add_option("--p", o_p, "exponent p > 1")->capture_default_str();
    ora->add_option("--nodes", o_nodes, "mesh nodes (rayleigh)")->capture_default_str();
    ora->add_option("--tol", o_tol, "tolerance")->capture_default_str();
    ora->add_option("--opt-seed", o_seed, "multistart seed (rayleigh)")->capture_default_str();
    ora->add_option("--json", o_json, "write the result as JSON");
    add_weight_opts(ora, ow);

    // ---- verify-prop ----
    std::string vp_seeds = "0..99", vp_ps = "1.5,2,3", vp_jsonl, vp_csv;
    double vp_L = 1.0, vp_tol = 1e-6;
    auto* vp = app.add_subcommand("verify-prop",
                                  "sharp 1D bound certificates over random weights");
    vp->add_option("--seeds", vp_seeds, "inclusive seed range a..b")->capture_default_str();
    vp->add_option("--p", vp_ps, "comma list of exponents")->capture_default_str();
    vp->add_option("--L", vp_L, "interval length")->capture_default_str();
    vp->add_option("--tol", vp_tol, "relative bound slack")->capture_default_str();
    vp->add_option("--jsonl", vp_jsonl, "write certificates as JSON lines");
    vp->add_option("--csv", vp_csv, "write the aggregate CSV");

    // ---- slice ----
    std::string s_poly = "square", s_w2d = "const", s_json, s_svg;
    double s_eps = 0.2, s_tol = 1e-6, s_p = 2.0;
    std::vector<double> s_grad{1.0, 0.0};
    auto* sl = app.add_subcommand("slice", "Payne-Weinberger decomposition of a polygon");
    sl->add_option("--polygon", s_poly, "square|disk:N|seed:N|file.json")
        ->capture_default_str();
    sl->add_option("--weight-2d", s_w2d, "const|explin:gx,gy|gauss:a,mx,my|seed:N")
        ->capture_default_str();
    sl->add_option("--epsilon", s_eps, "strip width bound")->capture_default_str();
    sl->add_option("--tol", s_tol, "relative moment/area tolerance")->capture_default_str();
    sl->add_option("--p", s_p, "exponent p > 1")->capture_default_str();
    sl->add_option("--grad", s_grad, "test field gradient gx gy")->expected(2);
    sl->add_option("--json", s_json, "write the decomposition as JSON");
    sl->add_option("--svg", s_svg, "render the decomposition as SVG");

    // ---- verify-2d ----
    std::string v2_poly = "square", v2_w2d = "const", v2_json;
    double v2_p = 2.0, v2_h = 0.05, v2_tol = 0.0;
    auto* v2 = app.add_subcommand("verify-2d", "sharp 2D bound certificate by FEM");
    v2->add_option("--polygon", v2_poly, "square|disk:N|seed:N|file.json")
        ->capture_default_str();
    v2->add_option("--weight-2d", v2_w2d, "const|explin:gx,gy|gauss:a,mx,my|seed:N")
        ->capture_default_str();
    v2->add_option("--p", v2_p, "exponent p > 1")->capture_default_str();
    v2->add_option("--mesh-h", v2_h, "target mesh edge length")->capture_default_str();
    v2->add_option("--tol", v2_tol, "relative bound slack")->capture_default_str();
    v2->add_option("--json", v2_json, "write the certificate as JSON");

    // ---- report ----
    std::vector<std::string> r_in;
    std::string r_csv;
    auto* rp = app.add_subcommand("report", "aggregate certificate JSONL files into CSV");
    rp->add_option("--in", r_in, "certificate JSONL inputs")->required();
    rp->add_option("--csv", r_csv, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*pip) {
            const PExponent p(pip_p);
            const double closed = pi_p_closed(p);
            const QuadResult q = pi_p_quadrature_result(p, pip_tol);
            std::printf("%.16g\n", pip_quad ? q.value : closed);
            if (!pip_json.empty()) {
                nlohmann::json j;
                j["p"] = pip_p;
                j["closed"] = closed;
                j["quadrature"] = q.value;
                j["error_estimate"] = q.error;
                write_file(pip_json, j.dump() + "\n");
            }
            return q.converged ? 0 : 1;
        }

        if (*eig) {
            EigenProblem prob(ew.build(), PExponent(e_p));
            EigenResult r = first_nontrivial_eigenvalue(prob, e_tol);
            const double bound = std::pow(pi_p_closed(prob.p) / prob.L, e_p);
            std::printf("lambda = %.12g  (bound %.12g, x_zero %.9g, residual %.3g)\n",
                        r.lambda, bound, r.x_zero, r.shoot_residual);
            if (!e_json.empty())
                write_file(e_json, eigen_result_to_json(r) + "\n");
            if (!e_csv.empty())
                write_file(e_csv, trace_to_csv(r));
            return r.lambda >= bound * (1.0 - 1e-6) ? 0 : 1;
        }

        if (*ora) {
            double value = 0.0;
            nlohmann::json j;
            if (o_method == "riccati") {
                value = exponential_eigenvalue(PExponent(o_p), ow.kappa, ow.L, o_tol);
                j = {{"method", "riccati"},
                     {"p", o_p},
                     {"kappa", ow.kappa},
                     {"L", ow.L},
                     {"lambda", value}};
            } else if (o_method == "rayleigh") {
                MinimizeResult r =
                    minimize_quotient(ow.build(), PExponent(o_p), o_nodes, o_tol, o_seed);
                value = r.lambda_h;
                j = {{"method", "rayleigh"},
                     {"p", o_p},
                     {"n_nodes", o_nodes},
                     {"lambda_h", value},
                     {"converged", r.converged}};
            } else {
                std::cerr << "error: unknown oracle method '" << o_method << "'\n";
                return 2;
            }
            std::printf("%.14g\n", value);
            if (!o_json.empty())
                write_file(o_json, j.dump() + "\n");
            return 0;
        }

        if (*vp) {
            const auto [s0, s1] = parse_seed_range(vp_seeds);
            const auto ps = parse_list(vp_ps);
            auto certs = verify_proposition(s0, s1, ps, vp_L, vp_tol);
            if (!vp_jsonl.empty())
                write_file(vp_jsonl, certificates_to_jsonl(certs));
            if (!vp_csv.empty())
                write_file(vp_csv, certificates_to_csv(certs));
            return report_certificates(certs);
        }

        if (*sl) {
            const ConvexPolygon poly = build_polygon(s_poly);
            const Weight2D w2 = build_weight_2d(s_w2d);
            const PExponent p(s_p);
            ScalarField base = linear_field({s_grad[0], s_grad[1]}, 0.0);
            const double shift = zero_moment_shift(poly, base, w2, p);
            ScalarField u = linear_field({s_grad[0], s_grad[1]}, shift);
            SlicingReport rep = verify_slicing_bound(poly, u, w2, p, s_eps, s_tol);
            std::printf("%d slices, max |moment| %.3g (tol %.3g), min margin %.6g, "
                        "max residual rate %.3g\n",
                        rep.slice_count, rep.max_moment, rep.moment_tol, rep.min_margin,
                        rep.max_residual_rate);
            if (!s_json.empty() || !s_svg.empty()) {
                const Decomposition dec = decompose(poly, u, w2, p, s_eps, s_tol);
                if (!s_json.empty())
                    write_file(s_json, decomposition_to_json(dec) + "\n");
                if (!s_svg.empty())
                    write_file(s_svg, decomposition_to_svg(dec));
            }
            return report_certificates(rep.certificates);
        }

        if (*v2) {
            const BoundCertificate c = verify_theorem_2d(
                build_polygon(v2_poly), build_weight_2d(v2_w2d), PExponent(v2_p), v2_h,
                v2_tol, v2_poly + " w=" + v2_w2d + " h=" + std::to_string(v2_h));
            std::printf("lambda_h = %.12g, bound = %.12g, margin = %.6g: %s\n",
                        c.computed_lambda, c.bound, c.margin, c.pass ? "pass" : "FAIL");
            if (!v2_json.empty())
                write_file(v2_json, certificate_to_json(c) + "\n");
            return c.pass ? 0 : 1;
        }

        if (*rp) {
            std::vector<BoundCertificate> certs;
            for (const auto& path : r_in) {
                std::istringstream in(read_file(path));
                std::string line;
                while (std::getline(in, line))
                    if (!line.empty())
                        certs.push_back(certificate_from_json(line));
            }
            std::sort(certs.begin(), certs.end(),
                      [](const BoundCertificate& a, const BoundCertificate& b) {
                          return std::tie(a.kind, a.p, a.scale, a.provenance) <
                                 std::tie(b.kind, b.p, b.scale, b.provenance);
                      });
            const std::string csv = certificates_to_csv(certs);
            if (!r_csv.empty())
                write_file(r_csv, csv);
            else
                std::fputs(csv.c_str(), stdout);
            return report_certificates(certs);
        }
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
