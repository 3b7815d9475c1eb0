#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "mixbound/config.hpp"

using namespace mixbound;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    fs::path p = fs::temp_directory_path() / "mixbound_config_test";
    fs::create_directories(p);
    return p;
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("parse_config accepts a full document") {
    ExperimentConfig c = parse_config(R"({
        "command": "bound",
        "seed": 99,
        "target": {"kind": "gaussian", "d": 6, "sigma0_sq": 2.0},
        "kernel": {"kind": "rwm", "varsigma": 1.5},
        "minorant": {"kind": "strongly_logconcave", "m": 0.5,
                     "transfers": [{"kind": "density", "value": 0.9}]},
        "u0": 50.0, "eps_mix": 0.5, "n": 2000, "variant": 2,
        "dims": [2, 4], "metric": "flow", "functionals": ["x1", "norm_sq"],
        "init": "exact", "jobs": 2
    })");
    CHECK(c.command == "bound");
    CHECK(c.seed == 99);
    CHECK(c.seed_set);
    CHECK(c.target.kind == "gaussian");
    CHECK(c.target.d == 6);
    CHECK(c.kernel.varsigma == 1.5);
    CHECK(c.minorant.transfers.size() == 1);
    CHECK(c.u0 == 50.0);
    CHECK(c.variant == 2);
    CHECK(c.dims == std::vector<int>{2, 4});
    CHECK(c.functionals.size() == 2);
    CHECK(c.jobs == 2);
}

TEST_CASE("parse_config lists every violation") {
    try {
        parse_config(R"({
            "command": "explode",
            "eps_mix": -1,
            "variant": 7,
            "kernel": {"kind": "rwm"},
            "metric": "bogus"
        })");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.violations().size() == 5);
    }
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1,2,3]"), ConfigError);
}

TEST_CASE("builders construct the configured objects") {
    TargetConfig tc;
    tc.kind = "diag_gaussian";
    tc.variances = {0.5, 2.0};
    TargetSpec t = build_target(tc);
    CHECK(t.m == doctest::Approx(0.5));
    CHECK(t.L == doctest::Approx(2.0));

    MinorantConfig mc;
    mc.kind = "strongly_logconcave";
    mc.m = 1.0;
    mc.transfers.push_back({"density", 0.5});
    IsoMinorant m = build_minorant(mc);
    CHECK(m(0.25) == doctest::Approx(0.5 * 0.31777657268410693).epsilon(1e-12));

    Functional f = build_functional("x2");
    CHECK(f({3.0, 7.0}) == 7.0);
    CHECK(build_functional("norm_sq")({3.0, 4.0}) == doctest::Approx(25.0));
    CHECK(build_functional("norm")({3.0, 4.0}) == doctest::Approx(5.0));
    CHECK_THROWS_AS(build_functional("potato"), std::invalid_argument);

    TargetConfig pc;
    pc.kind = "pcn_gaussian";
    pc.variances = {1.0, 3.0};
    pc.psi = "quadratic";
    pc.L_psi = 0.5;
    PcnTarget pt = build_pcn_target(pc);
    CHECK(pt.trace_c == doctest::Approx(4.0));
    CHECK(pt.psi({2.0, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("bound command writes a report; exit codes honor the contract") {
    fs::path out = temp_dir() / "bound";
    ExperimentConfig c = parse_config(R"({
        "command": "bound",
        "target": {"kind": "gaussian", "d": 5},
        "kernel": {"kind": "rwm", "varsigma": 1.0},
        "u0": 100.0, "eps_mix": 0.5, "variant": 1
    })");
    c.out_dir = (out).string();
    CHECK(run_experiment(c) == 0);
    nlohmann::json j = read_json(out / "bound_report.json");
    CHECK(j["mixing_n"].get<long long>() >= 2);
    CHECK(j["alpha0_lower"].get<double>() == doctest::Approx(0.30326532985631671));
    CHECK(j["inputs"]["d"] == 5);
    // Round-trip exactness of serialized doubles.
    BoundReport r = rwm_mixing_time(1.0, 1.0, 5, 1.0, 100.0, 0.5, 1);
    CHECK(j["gap_lower"].get<double>() == r.gap_lower);
    CHECK(j["mixing_sufficient"].get<double>() == r.mixing_sufficient);
}

TEST_CASE("missing pieces yield config-error exit code 2") {
    ExperimentConfig c = parse_config(R"({"command": "bound"})");
    c.out_dir = (temp_dir() / "err").string();
    CHECK(run_experiment(c) == 2);
    ExperimentConfig v = parse_config(R"({"command": "verify"})");
    v.out_dir = c.out_dir;
    CHECK(run_experiment(v) == 2);
}

TEST_CASE("unreadable data files yield io-error exit code 3") {
    ExperimentConfig c = parse_config(R"({
        "command": "bound",
        "target": {"kind": "logistic", "data_csv": "/nonexistent/never.csv"},
        "kernel": {"kind": "rwm", "sigma": 0.5}
    })");
    c.out_dir = (temp_dir() / "io").string();
    CHECK(run_experiment(c) == 3);
}

TEST_CASE("sample command records chain statistics and a thinned trajectory") {
    fs::path out = temp_dir() / "sample";
    ExperimentConfig c = parse_config(R"({
        "command": "sample", "seed": 4,
        "target": {"kind": "gaussian", "d": 3},
        "kernel": {"kind": "rwm", "varsigma": 1.0},
        "n": 1000, "functionals": ["x1"], "init": "exact", "thin": 250
    })");
    c.out_dir = out.string();
    CHECK(run_experiment(c) == 0);
    nlohmann::json j = read_json(out / "chain_stats.json");
    CHECK(j["n_steps"] == 1000);
    CHECK(j["acceptance_rate"].get<double>() > 0.2);
    CHECK(j["functionals"].contains("x1"));
    std::ifstream traj(out / "trajectory.csv");
    REQUIRE(traj.good());
    int lines = 0;
    std::string line;
    while (std::getline(traj, line)) ++lines;
    CHECK(lines == 5);  // initial state + 4 thinned records
}

TEST_CASE("logistic target round-trips through a csv file") {
    fs::path csv = temp_dir() / "data.csv";
    {
        std::ofstream f(csv);
        f << "y,a1,a2\n1,0.5,1.0\n0,-0.4,0.2\n1,1.1,-0.3\n0,-0.9,-0.8\n";
    }
    TargetConfig tc;
    tc.kind = "logistic";
    tc.sigma0_sq = 2.0;
    tc.data_csv = csv.string();
    TargetSpec t = build_target(tc);
    CHECK(t.d == 2);
    CHECK(t.m == doctest::Approx(0.5));
    CHECK(norm(t.gradient(t.mode)) <= 1e-9);
}

TEST_CASE("scan command emits csv and json artifacts") {
    fs::path out = temp_dir() / "scan";
    ExperimentConfig c = parse_config(R"({
        "command": "scan", "seed": 2, "dims": [2, 4, 8],
        "metric": "acceptance", "n": 4000, "jobs": 3
    })");
    c.out_dir = out.string();
    CHECK(run_experiment(c) == 0);
    std::ifstream csv(out / "scan.csv");
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "d,estimate,std_error,lower_bound,upper_bound");
    int rows = 0;
    std::string line;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 3);
    nlohmann::json j = read_json(out / "scan.json");
    CHECK(j["rows"].size() == 3);
    CHECK(std::fabs(j["slope"].get<double>()) < 0.2);
}

TEST_CASE("verify suites report pass status") {
    fs::path out = temp_dir() / "verify";
    ExperimentConfig c = parse_config(R"({
        "command": "verify", "suite": "acceptance-floor", "seed": 3,
        "target": {"kind": "gaussian", "d": 6},
        "kernel": {"kind": "rwm", "varsigma": 1.0}, "n": 20000
    })");
    c.out_dir = out.string();
    CHECK(run_experiment(c) == 0);
    nlohmann::json j = read_json(out / "verify_acceptance-floor.json");
    CHECK(j["pass"] == true);
    CHECK(j["estimate"].get<double>() >=
          j["lower_bound"].get<double>() - 3.0 * j["std_error"].get<double>());
}
