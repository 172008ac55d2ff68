#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef SGRED_CLI_PATH
#error "SGRED_CLI_PATH must point at the built CLI"
#endif

namespace {

struct RunResult {
    int code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string out_file = "cli_test_stdout.tmp";
    std::string cmd = std::string(SGRED_CLI_PATH) + " " + args + " > " + out_file + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    std::remove(out_file.c_str());
    return {code, ss.str()};
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    f << text;
}

}  // namespace

TEST_CASE("fuchs with the default nu") {
    RunResult r = run("fuchs");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"pass\": true") != std::string::npos);
    CHECK(r.out.find("-1.0") != std::string::npos);
    CHECK(r.out.find("4.0") != std::string::npos);
}

TEST_CASE("fuchs indices do not depend on nu") {
    write_file("cfg_fuchs.json", R"({"nu": [2.0, 1.0]})");
    RunResult r = run("fuchs --config cfg_fuchs.json");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"pass\": true") != std::string::npos);
    std::remove("cfg_fuchs.json");
}

TEST_CASE("malformed configs exit with the config code") {
    write_file("cfg_bad.json", "{ not json");
    CHECK(run("fuchs --config cfg_bad.json").code == 1);
    std::remove("cfg_bad.json");
    write_file("cfg_bad2.json", R"({"nu": "one"})");
    CHECK(run("fuchs --config cfg_bad2.json").code == 1);
    std::remove("cfg_bad2.json");
    // missing required fields
    write_file("cfg_empty.json", "{}");
    CHECK(run("integrate --config cfg_empty.json").code == 1);
    CHECK(run("map --config cfg_empty.json").code == 1);
    CHECK(run("verify-reduction --config cfg_empty.json").code == 1);
    std::remove("cfg_empty.json");
}

TEST_CASE("integrate produces the trajectory CSV") {
    write_file("cfg_int.json", R"({
      "case": "zer",
      "nu": [1.0, 0.0],
      "constants": {"K5": [0, 0], "K6": [0, 0], "K7": [0, 0]},
      "initial_state": {"xi": [0, 0], "up": [2, 0], "vp": [5, 0]},
      "path": [[0, 0], [1, 0]],
      "tol": 1e-10
    })");
    RunResult r = run("integrate --config cfg_int.json --format csv --out traj.csv");
    CHECK(r.code == 0);
    std::ifstream csv("traj.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header ==
          "s,xi_re,xi_im,up_re,up_im,upp_re,upp_im,vp_re,vp_im,vpp_re,vpp_im,"
          "K2_re,K2_im,K4_re,K4_im,drift2,drift4");
    // the fixed point has zero drift columns
    std::string line, last;
    while (std::getline(csv, line))
        if (!line.empty()) last = line;
    CHECK(last.substr(last.size() - 4) == ",0,0");
    std::remove("cfg_int.json");
    std::remove("traj.csv");
}

TEST_CASE("integrate refuses a path through a declared pole") {
    write_file("cfg_pole.json", R"({
      "case": "rat",
      "initial_state": {"xi": [-0.5, 0], "up": [0.4, 0.1]},
      "path": [[-0.5, 0], [0.5, 0]]
    })");
    RunResult r = run("integrate --config cfg_pole.json");
    CHECK(r.code == 3);
    std::remove("cfg_pole.json");
}

TEST_CASE("map reports the target equation and guards") {
    write_file("cfg_map7.json", R"({
      "map_case": 7,
      "nu": [1.0, 0.0],
      "constants": {"K7": [-0.0625, 0], "K6": [0, 0.125], "K2": [0, 0]}
    })");
    RunResult r = run("map --config cfg_map7.json");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"equation\": \"PII\"") != std::string::npos);
    CHECK(r.out.find("\"alpha\"") != std::string::npos);
    std::remove("cfg_map7.json");

    // case 2 with K2 = 0 violates the printed guard
    write_file("cfg_map2.json", R"({
      "map_case": 2,
      "constants": {"K2": [0, 0], "K5": [0.3, 0]}
    })");
    CHECK(run("map --config cfg_map2.json").code == 4);
    std::remove("cfg_map2.json");
}

TEST_CASE("map with a bundled pullback") {
    write_file("cfg_map1.json", R"({
      "map_case": 1,
      "nu": [1.0, 0.0],
      "k": [1.0, 0.0],
      "constants": {"K5": [0.3, 0], "K6": [0.2, 0]},
      "initial_state": {"xi": [0.8, 0], "up": [0.4, 0.1], "upp": [-0.2, 0.3],
                        "vp": [0.5, -0.1], "vpp": [0.1, 0.2]},
      "path": [[0.8, 0], [1.6, 0.2]],
      "pullback": true
    })");
    RunResult r = run("map --config cfg_map1.json");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"equation\": \"CVI\"") != std::string::npos);
    CHECK(r.out.find("\"pass\": true") != std::string::npos);
    std::remove("cfg_map1.json");
}

TEST_CASE("verify-reduction passes the generic example and fails the exp case") {
    write_file("cfg_vr.json", R"({
      "reduction": "generic_example",
      "nu": [1.3, -0.2],
      "k": [1.0, 0.0],
      "constants": {"K5": [0, 1], "K6": [-0.2, 0.6], "K7": [0.3, 0.1]},
      "grid": {"x0": [1.1, 0.31], "y0": [2.3, -0.22], "t0": [0.25, 0.13],
               "dx": [0.07, 0.01], "dy": [0.08, -0.01], "dt": [0.025, 0.008],
               "nx": 2, "ny": 2, "nt": 2}
    })");
    RunResult r = run("verify-reduction --config cfg_vr.json --seed 3");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"pass\": true") != std::string::npos);
    std::remove("cfg_vr.json");

    write_file("cfg_exp.json", R"({
      "reduction": "exp_k5",
      "nu": [1.0, 0.2],
      "k": [0.9, 0.0],
      "constants": {"K5": [0.6, -0.3], "K6": [0.2, 0.4], "K7": [-0.3, 0.1]},
      "time_functions": {"lambda2": [[1.2, 0.1], [0.5, -0.2]],
                          "lambda3": [[0.3, -0.1], [1.1, 0.2]]},
      "grid": {"x0": [1.4, 0.2], "y0": [-0.8, -0.3], "t0": [0.31, 0.11],
               "nx": 2, "ny": 2, "nt": 1}
    })");
    RunResult rx = run("verify-reduction --config cfg_exp.json");
    CHECK(rx.code == 5);
    std::remove("cfg_exp.json");

    // constraint violation exits with the guard code
    write_file("cfg_bad.json", R"({
      "reduction": "generic_example",
      "constants": {"K5": [0.5, 0], "K6": [0, 0], "K7": [0, 0]},
      "grid": {}
    })");
    CHECK(run("verify-reduction --config cfg_bad.json").code == 4);
    std::remove("cfg_bad.json");
}

TEST_CASE("suite is deterministic and fault injection hits the right check") {
    RunResult a = run("suite --seed 7 --out suite_a.json");
    RunResult b = run("suite --seed 7 --out suite_b.json");
    CHECK(a.code == 0);
    CHECK(b.code == 0);
    std::ifstream fa("suite_a.json"), fb("suite_b.json");
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(!sa.str().empty());
    std::remove("suite_a.json");
    std::remove("suite_b.json");

    CHECK(run("suite --seed 7 --inject-fault nolog").code == 5);
    CHECK(run("suite --seed 7 --inject-fault conservation").code == 3);
    CHECK(run("suite --seed 7 --inject-fault indices").code == 2);
    CHECK(run("suite --inject-fault bogus").code == 1);
}
