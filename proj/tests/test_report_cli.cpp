#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "bessel/dimension.hpp"
#include "bessel/kernels.hpp"
#include "bessel/report.hpp"

using namespace bessel;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(BESSEL_BEL_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = ::popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    RunResult res;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0) res.out.append(buf.data(), got);
    const int status = ::pclose(p);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

VerificationReport sample_report() {
    VerificationReport r;
    r.name = "r1";
    r.inputs = {{"delta", 1.5}, {"x", 2.0}, {"T", 0.25}, {"n", 100.0}, {"dt", 0.001}};
    r.analytic = 0.5;
    r.mc = McEstimate{0.25, 0.125, 100, 123456789012345678ull};
    r.tolerance_spec = "demo \"quoted\" spec";
    r.passed = true;
    r.note = "line1\nline2";
    r.witness = {{"gap", 1.0 / 3.0}};
    return r;
}

} // namespace

TEST_CASE("seventeen-digit doubles parse back exactly") {
    for (double v : {1.0 / 3.0, 0.1, 1e300, -2.5e-17, 0.0, 12345678.9012345}) {
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("CSV layout is pinned") {
    std::ostringstream empty;
    write_report_csv(empty, {});
    CHECK(empty.str() == "name,delta,x,T,n,dt,analytic,oracle,mc_mean,mc_se,passed\n");

    std::ostringstream one;
    write_report_csv(one, {sample_report()});
    CHECK(one.str() ==
          "name,delta,x,T,n,dt,analytic,oracle,mc_mean,mc_se,passed\n"
          "r1,1.5,2,0.25,100,0.001,0.5,,0.25,0.125,true\n");
}

TEST_CASE("JSONL round-trips every field bit-exactly") {
    VerificationReport soft = sample_report();
    soft.name = "soft";
    soft.passed = false;
    soft.inconclusive = true;
    soft.oracle = 1.0 / 7.0;
    soft.mc.reset();

    std::stringstream ss;
    write_report_jsonl(ss, {sample_report(), soft});
    const std::vector<VerificationReport> back = read_report_jsonl(ss);
    REQUIRE(back.size() == 2);

    const VerificationReport& a = back[0];
    const VerificationReport orig = sample_report();
    CHECK(a.name == orig.name);
    CHECK(a.inputs == orig.inputs);
    CHECK(a.analytic == orig.analytic);
    CHECK_FALSE(a.oracle.has_value());
    REQUIRE(a.mc.has_value());
    CHECK(a.mc->mean == orig.mc->mean);
    CHECK(a.mc->std_error == orig.mc->std_error);
    CHECK(a.mc->n == orig.mc->n);
    CHECK(a.mc->seed == orig.mc->seed);
    CHECK(a.tolerance_spec == orig.tolerance_spec);
    CHECK(a.passed == orig.passed);
    CHECK(a.inconclusive == orig.inconclusive);
    CHECK(a.note == orig.note);
    CHECK(a.witness == orig.witness);

    CHECK(back[1].inconclusive);
    CHECK(back[1].oracle == soft.oracle);
    CHECK_FALSE(back[1].mc.has_value());
}

TEST_CASE("exit code policy") {
    VerificationReport pass = sample_report();
    VerificationReport hard = sample_report();
    hard.passed = false;
    VerificationReport soft = sample_report();
    soft.passed = false;
    soft.inconclusive = true;

    CHECK(exit_code_for({}) == 0);
    CHECK(exit_code_for({pass}) == 0);
    CHECK(exit_code_for({pass, hard}) == 2);
    CHECK(exit_code_for({pass, soft}) == 3);
    CHECK(exit_code_for({soft, hard}) == 2);
}

TEST_CASE("command line: evaluation commands print plain values") {
    const RunResult mass = run_cli("semigroup --delta 0 --x 1 --t 1 --f one");
    CHECK(mass.exit_code == 0);
    CHECK(mass.out == "1\n");

    const RunResult dens = run_cli("density --delta 2 --x 1 --y 1 --t 1");
    CHECK(dens.exit_code == 0);
    const double expected = transition_density({BesselDim::of(2.0), 1.0, 1.0, 1.0});
    CHECK(std::strtod(dens.out.c_str(), nullptr) == expected);

    const RunResult atom = run_cli("density --delta 0 --x 0.8 --y 1.1 --t 0.7");
    CHECK(atom.exit_code == 0);
    CHECK(atom.out.find("atom ") == 0);
    CHECK(atom.out.find("density ") != std::string::npos);
}

TEST_CASE("command line: derivative triple agreement") {
    const RunResult r = run_cli("derivative --delta 2 --x 1 --t 0.5 --f exp_neg_y2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("analytic ") != std::string::npos);
    CHECK(r.out.find("fd ") != std::string::npos);
}

TEST_CASE("command line: usage errors exit with code 1") {
    CHECK(run_cli("no-such-command").exit_code == 1);
    CHECK(run_cli("scaling --delta 3 --n 10").exit_code == 1);
    CHECK(run_cli("bel-mc --delta 2 --x 1 --t 0.5 --f exp_neg_y2").exit_code == 1); // missing --n
    CHECK(run_cli("").exit_code == 1); // a subcommand is required
}

TEST_CASE("command line: reports are byte-identical for identical config") {
    const std::string base =
        "bel-mc --delta 2 --x 1 --t 0.5 --f exp_neg_y2 --n 400 --dt 2e-3 --format csv";
    const RunResult a = run_cli(base + " --seed 7 --out cli_a.csv");
    const RunResult b = run_cli(base + " --seed 7 --out cli_b.csv");
    const RunResult c = run_cli(base + " --seed 8 --out cli_c.csv");
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    CHECK(c.exit_code == 0);
    CHECK(slurp("cli_a.csv") == slurp("cli_b.csv"));
    CHECK(slurp("cli_a.csv") != slurp("cli_c.csv"));
    std::remove("cli_a.csv");
    std::remove("cli_b.csv");
    std::remove("cli_c.csv");
}

TEST_CASE("command line: seed precedence is flags over config over environment") {
    {
        std::ofstream cfg("cli_cfg.json");
        cfg << "{\"bel-mc\": {\"seed\": 7}}\n";
    }
    const std::string base =
        "bel-mc --delta 2 --x 1 --t 0.5 --f exp_neg_y2 --n 400 --dt 2e-3 --format csv";

    // reference files for seeds 7 and 8
    REQUIRE(run_cli(base + " --seed 7 --out cli_s7.csv").exit_code == 0);
    REQUIRE(run_cli(base + " --seed 8 --out cli_s8.csv").exit_code == 0);

    // config alone supplies seed 7
    REQUIRE(run_cli(base + " --config cli_cfg.json --out cli_cfg_only.csv").exit_code == 0);
    CHECK(slurp("cli_cfg_only.csv") == slurp("cli_s7.csv"));

    // explicit flag beats the config value
    REQUIRE(run_cli(base + " --config cli_cfg.json --seed 8 --out cli_flag.csv").exit_code == 0);
    CHECK(slurp("cli_flag.csv") == slurp("cli_s8.csv"));

    // environment is the weakest source: config still wins
    {
        const std::string cmd = "BESSEL_BEL_SEED=8 " + std::string(BESSEL_BEL_CLI_PATH) + " " +
                                base + " --config cli_cfg.json --out cli_env_cfg.csv 2>/dev/null";
        REQUIRE(std::system(cmd.c_str()) == 0);
        CHECK(slurp("cli_env_cfg.csv") == slurp("cli_s7.csv"));
    }
    // environment applies when nothing else sets the seed
    {
        const std::string cmd = "BESSEL_BEL_SEED=8 " + std::string(BESSEL_BEL_CLI_PATH) + " " +
                                base + " --out cli_env.csv 2>/dev/null";
        REQUIRE(std::system(cmd.c_str()) == 0);
        CHECK(slurp("cli_env.csv") == slurp("cli_s8.csv"));
    }

    for (const char* f : {"cli_cfg.json", "cli_s7.csv", "cli_s8.csv", "cli_cfg_only.csv",
                          "cli_flag.csv", "cli_env_cfg.csv", "cli_env.csv"})
        std::remove(f);
}

TEST_CASE("command line: jsonl output parses back") {
    const RunResult r = run_cli(
        "martingale --delta 2 --x 1 --t-grid 0.5 --n 500 --dt 2e-3 --seed 3 --format jsonl "
        "--out cli_m.jsonl");
    CHECK(r.exit_code == 0);
    std::ifstream is("cli_m.jsonl");
    const std::vector<VerificationReport> reports = read_report_jsonl(is);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].name == "martingale_profile");
    CHECK(reports[0].passed);
    std::remove("cli_m.jsonl");
}
