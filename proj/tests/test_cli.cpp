#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string cli_bin() {
    const char* env = std::getenv("WPW_CLI_BIN");
    REQUIRE(env != nullptr);
    return env;
}

struct RunResult {
    int status;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = cli_bin() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    while (fgets(buf.data(), static_cast<int>(buf.size()), pipe))
        out += buf.data();
    const int rc = pclose(pipe);
    return {WEXITSTATUS(rc), out};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("pip prints pi for p = 2") {
    auto r = run("pip --p 2");
    CHECK(r.status == 0);
    CHECK(r.out.rfind("3.141592653589793", 0) == 0);
}

TEST_CASE("pip quadrature route agrees") {
    auto r = run("pip --p 3 --quadrature --tol 1e-11");
    CHECK(r.status == 0);
    const double v = std::stod(r.out);
    CHECK(v == doctest::Approx(3.0469919990461722).epsilon(1e-9));
}

TEST_CASE("eig1d on the constant weight hits the sharp constant") {
    auto r = run("eig1d --weight constant --p 3 --L 1");
    CHECK(r.status == 0);
    CHECK(r.out.find("lambda = 28.288761") != std::string::npos);
}

TEST_CASE("invalid parameters exit with the usage status") {
    CHECK(run("eig1d --weight constant --p 0.5").status == 2);
    CHECK(run("eig1d --weight nosuch").status == 2);
    CHECK(run("pip").status != 0);
}

TEST_CASE("oracle1d riccati matches the closed form") {
    auto r = run("oracle1d --method riccati --p 2 --kappa 2 --L 1");
    CHECK(r.status == 0);
    CHECK(std::stod(r.out) == doctest::Approx(10.8696044010893586).epsilon(1e-8));
}

TEST_CASE("verify-prop produces passing certificates and deterministic JSON") {
    const std::string j1 = "/tmp/wpw_cli_certs1.jsonl";
    const std::string j2 = "/tmp/wpw_cli_certs2.jsonl";
    const std::string csv = "/tmp/wpw_cli_certs.csv";
    auto r1 = run("verify-prop --seeds 0..5 --p 2 --L 1 --jsonl " + j1 + " --csv " + csv);
    CHECK(r1.status == 0);
    auto r2 = run("verify-prop --seeds 0..5 --p 2 --L 1 --jsonl " + j2);
    CHECK(r2.status == 0);
    const std::string a = slurp(j1), b = slurp(j2);
    CHECK(!a.empty());
    CHECK(a == b); // byte-identical given identical config and seed
    CHECK(slurp(csv).rfind("kind,p,scale,lambda,bound,margin,pass\n", 0) == 0);

    auto rr = run("report --in " + j1 + " --csv /tmp/wpw_cli_report.csv");
    CHECK(rr.status == 0);
    CHECK(slurp("/tmp/wpw_cli_report.csv").rfind("kind,p,scale", 0) == 0);
}

TEST_CASE("slice writes JSON and SVG artifacts") {
    auto r = run("slice --polygon square --epsilon 0.5 --json /tmp/wpw_cli_dec.json "
                 "--svg /tmp/wpw_cli_dec.svg");
    CHECK(r.status == 0);
    CHECK(slurp("/tmp/wpw_cli_dec.json").find("\"slices\"") != std::string::npos);
    CHECK(slurp("/tmp/wpw_cli_dec.svg").rfind("<svg", 0) == 0);
}

TEST_CASE("verify-2d certifies the square") {
    auto r = run("verify-2d --polygon square --mesh-h 0.1 --json /tmp/wpw_cli_2d.json");
    CHECK(r.status == 0);
    CHECK(r.out.find("pass") != std::string::npos);
    CHECK(slurp("/tmp/wpw_cli_2d.json").find("\"kind\":\"theorem_2d\"") != std::string::npos);
}
