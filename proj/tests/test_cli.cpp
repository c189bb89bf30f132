#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "cli.hpp"
#include "qlayout/exhaustive.hpp"
#include "support.hpp"

using namespace qlayout;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("qlayout_test_" + name)).string();
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string read(const std::string& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit 2") {
    CHECK(cli({}).code == exit_usage);
    CHECK(cli({"frobnicate"}).code == exit_usage);
    CHECK(cli({"solve", "--arch", "line:3"}).code == exit_usage);
    CHECK(cli({"solve", "--program", qlt::fixture("triangle.json"), "--arch", "ring:3"}).code == exit_usage);
    CHECK(cli({"solve", "--program", qlt::fixture("triangle.json"), "--arch", "grid:2x2", "--alternating", "auto",
               "--solver", "internal"})
              .code == exit_usage);
    CHECK(cli({"solve", "--program", "/nonexistent.json", "--arch", "line:3"}).code == exit_usage);
    CHECK(cli({"--help"}).code == exit_ok);
}

TEST_CASE("solve, write and verify") {
    const std::string sol = temp_path("triangle_solution.json");
    Run r = cli({"solve", "--program", qlt::fixture("triangle.json"), "--arch", "line:3", "--solver", "internal",
                 "--out", sol});
    REQUIRE(r.code == exit_ok);
    CHECK(r.out.find("depth=3 swaps=0 absorbed=1") != std::string::npos);
    Run v = cli({"verify", "--program", qlt::fixture("triangle.json"), "--arch", "line:3", "--solution", sol});
    CHECK(v.code == exit_ok);
    CHECK(v.out.rfind("OK", 0) == 0);

    MappingSolution s = load_solution(sol);
    s.placements[0].edge = 1 - s.placements[0].edge;
    const std::string bad = temp_path("triangle_tampered.json");
    write(bad, solution_to_json(s));
    Run t = cli({"verify", "--program", qlt::fixture("triangle.json"), "--arch", "line:3", "--solution", bad});
    CHECK(t.code == exit_verify_failed);
    CHECK(t.out.find("INVALID") != std::string::npos);
    CHECK(t.out.find("mapping implied by spacetime coordinates") != std::string::npos);
}

TEST_CASE("emit-smt") {
    Run r = cli({"emit-smt", "--program", qlt::fixture("one_gate.json"), "--arch", "line:2", "--horizon", "1"});
    REQUIRE(r.code == exit_ok);
    CHECK(r.out.find("(declare-const pi_q0_t0 Int)") != std::string::npos);
    CHECK(r.out.find("(check-sat)") != std::string::npos);
    const std::string path = temp_path("one_gate.smt2");
    CHECK(cli({"emit-smt", "--program", qlt::fixture("one_gate.json"), "--arch", "line:2", "--horizon", "2",
               "--absorb", "off", "--budget", "0", "--out", path})
              .code == exit_ok);
    CHECK(read(path).find("(declare-const s_e0_t1 Bool)") != std::string::npos);
    CHECK(cli({"emit-smt", "--program", qlt::fixture("one_gate.json"), "--arch", "line:2"}).code == exit_usage);
}

TEST_CASE("certify") {
    const std::string cert = temp_path("cert.json");
    Run r = cli({"certify", "--program", qlt::fixture("triangle.json"), "--arch", "line:3", "--alternating", "auto",
                 "--solver", "internal", "--certificate", cert});
    REQUIRE(r.code == exit_ok);
    CHECK(read(cert).find("\"certified_floor\": 3") != std::string::npos);
}

TEST_CASE("no solution exits 1 and timeouts exit 3") {
    CHECK(cli({"solve", "--program", qlt::fixture("triangle.json"), "--arch", "line:3", "--solver",
               "cat >/dev/null; echo unsat"})
              .code == exit_verify_failed);
    CHECK(cli({"solve", "--program", qlt::fixture("triangle.json"), "--arch", "line:3", "--solver", "sleep 30",
               "--timeout", "0.2"})
              .code == exit_timeout);
}

TEST_CASE("bench writes csv and json") {
    const std::string prefix = temp_path("bench");
    Run r = cli({"bench", "--family", "all-to-all", "--n", "3", "--modes", "exact,absorb-off", "--solver",
                 "internal", "--out", prefix});
    REQUIRE(r.code == exit_ok);
    CHECK(read(prefix + ".csv").rfind("family,n,seed,mode", 0) == 0);
    CHECK(read(prefix + ".json").find("absorb-off") != std::string::npos);
}

TEST_CASE("executable exit codes") {
    const std::string bin = QLAYOUT_CLI;
    const std::string bad = temp_path("exe_tampered.json");
    auto r = internal_exhaustive(qlt::triangle(), build_line(3), true, 4);
    REQUIRE(r.has_value());
    MappingSolution s = r->witness;
    s.mapping[0] = {0, 0, 1};
    write(bad, solution_to_json(s));
    int st = std::system((bin + " verify --program " + qlt::fixture("triangle.json") + " --arch line:3 --solution " +
                          bad + " >/dev/null")
                             .c_str());
    REQUIRE(WIFEXITED(st));
    CHECK(WEXITSTATUS(st) == 1);
    st = std::system((bin + " solve >/dev/null 2>&1").c_str());
    REQUIRE(WIFEXITED(st));
    CHECK(WEXITSTATUS(st) == 2);
}

}
