#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#ifndef TVMDP_CLI_PATH
#define TVMDP_CLI_PATH "tvmdp"
#endif
#ifndef TVMDP_DATA_DIR
#define TVMDP_DATA_DIR "data"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(TVMDP_CLI_PATH) + " " + args + " 2>&1";
    RunResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) result.output.append(buf.data(), got);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string data(const std::string& name) { return std::string(TVMDP_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("cli: solve prints the expected start value") {
    auto r = run_cli("solve --gamma 0.75 " + data("two_option_delay.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"start_value\": \"42.1875\"") != std::string::npos);
    CHECK(r.output.find("\"s0\": \"early\"") != std::string::npos);
}

TEST_CASE("cli: byte-identical output on identical input") {
    const std::string args = "spe " + data("cycle_vs_steady.json");
    auto a = run_cli(args);
    auto b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.find("\"passed\": true") != std::string::npos);
}

TEST_CASE("cli: eps-spe emits a policy file that verifies") {
    const std::string out = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/tvmdp_dp.json";
    auto r = run_cli("eps-spe --eps 0.01 --c 0.4 --discount "
                     "'{\"type\":\"down_step\",\"gamma\":\"1/2\",\"T\":10}' --out " +
                     out + " " + data("crossing.json"));
    CHECK(r.exit_code == 0);
    auto v = run_cli("verify --eps 0.01 --discount '{\"type\":\"down_step\",\"gamma\":\"1/2\",\"T\":10}' " +
                     data("crossing.json") + " " + out);
    CHECK(v.exit_code == 0);
    CHECK(v.output.find("\"passed\": true") != std::string::npos);
    std::remove(out.c_str());
}

TEST_CASE("cli: verify exits 1 on a perturbed policy and lists the slack") {
    const std::string out = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/tvmdp_bad.json";
    {
        std::ofstream f(out);
        f << R"({"switch_time": 1,
                 "prefix": [{"s0": "stay", "s1": "back", "s2": "stay"}],
                 "tail": {"s0": "cycle", "s1": "back", "s2": "stay"}})";
    }
    auto r = run_cli("verify --eps 0 --exact " + data("cycle_vs_steady.json") + " " + out);
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("\"passed\": false") != std::string::npos);
    CHECK(r.output.find("7/33") != std::string::npos);
    std::remove(out.c_str());
}

TEST_CASE("cli: valit and reduce answers agree") {
    auto yes = run_cli("valit --horizon 5 --gamma 0.95 --action late " + data("two_option_delay.json"));
    CHECK(yes.exit_code == 0);
    auto no = run_cli("valit --horizon 5 --gamma 0.95 --action early " + data("two_option_delay.json"));
    CHECK(no.exit_code == 1);
    auto gadget_yes =
        run_cli("reduce --horizon 5 --gamma 0.95 --action late --answer brute " + data("two_option_delay.json"));
    CHECK(gadget_yes.exit_code == 0);
    CHECK(gadget_yes.output.find("\"answer\": true") != std::string::npos);
    auto gadget_no =
        run_cli("reduce --horizon 5 --gamma 0.95 --action early --answer brute " + data("two_option_delay.json"));
    CHECK(gadget_no.exit_code == 1);
}

TEST_CASE("cli: malformed input exits 2 with a diagnostic") {
    const std::string out = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/tvmdp_broken.json";
    {
        std::ofstream f(out);
        f << R"({"states": ["a"], "start": "a",
                 "actions": {"a": [{"name": "x", "reward": 0, "to": {"a": 0.5}}]}})";
    }
    auto r = run_cli("solve --gamma 0.5 " + out);
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("sums to 1/2") != std::string::npos);
    std::remove(out.c_str());

    auto missing = run_cli("solve --gamma 0.5 /nonexistent/file.json");
    CHECK(missing.exit_code == 2);

    // A degenerate limit is a refusal, not a crash.
    auto degenerate = run_cli("spe --discount '{\"type\":\"constant\",\"gamma\":\"1/2\"}' " + data("crossing.json"));
    CHECK(degenerate.exit_code == 2);
    CHECK(degenerate.output.find("degenerate") != std::string::npos);
}

TEST_CASE("cli: unknown-gap variant with and without a separation hint") {
    auto hinted = run_cli("eps-spe --eps 0.02 --unknown-gap --separation 1/2 " + data("crossing.json"));
    CHECK(hinted.exit_code == 0);
    CHECK(hinted.output.find("\"passed\": true") != std::string::npos);
    auto derived = run_cli("eps-spe --eps 0.02 --unknown-gap " + data("crossing.json"));
    CHECK(derived.exit_code == 0);
    CHECK(derived.output.find("\"passed\": true") != std::string::npos);
}

TEST_CASE("cli: gamma-set report on the squared crossing") {
    auto r = run_cli("gamma-set " + data("crossing_squared.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"count\": 1") != std::string::npos);
    CHECK(r.output.find("0.57735") != std::string::npos);
}
