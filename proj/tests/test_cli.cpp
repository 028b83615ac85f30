#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef PHG_CLI_PATH
#error "PHG_CLI_PATH must name the built binary"
#endif

namespace {

using Json = nlohmann::ordered_json;

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

std::string temp_path(const char* tag) {
    std::ostringstream ss;
    ss << "cli_check_" << tag << "_" << getpid() << ".tmp";
    return ss.str();
}

/// Run the binary through the shell, capturing stdout, stderr, and the exit
/// code. `args` is everything after the binary name.
RunResult run_cli(const std::string& args) {
    std::string err_file = temp_path("stderr");
    std::string cmd = std::string(PHG_CLI_PATH) + " " + args + " 2>" + err_file;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    int status = pclose(pipe);
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = std::move(out);
    std::ifstream ef(err_file);
    std::stringstream es;
    es << ef.rdbuf();
    r.err = es.str();
    std::remove(err_file.c_str());
    return r;
}

Json parse_report(const RunResult& r) {
    REQUIRE(!r.out.empty());
    return Json::parse(r.out);
}

}  // namespace

TEST_CASE("gammap reports the classical value at 1") {
    RunResult r = run_cli("gammap --prime 7 --prec 4 1");
    REQUIRE(r.code == 0);
    Json rep = parse_report(r);
    CHECK(rep["command"] == "gammap");
    CHECK(rep["value"]["valuation"] == 0);
    CHECK(rep["value"]["precision"] == 4);
    CHECK(rep["value"]["digits"] == Json::array({6, 6, 6, 6}));
}

TEST_CASE("digit lists span exactly the precision window") {
    RunResult r = run_cli("gammap --prime 13 --prec 6 1/3");
    REQUIRE(r.code == 0);
    Json value = parse_report(r)["value"];
    long valuation = value["valuation"].get<long>();
    long precision = value["precision"].get<long>();
    CHECK(static_cast<long>(value["digits"].size()) == precision - valuation);
}

TEST_CASE("kd verifies the anchor triple") {
    RunResult r = run_cli("kd --prime 7 --params 1/6,1/6,5/6 --prec 6");
    REQUIRE(r.code == 0);
    Json rep = parse_report(r);
    CHECK(rep["verdict"] == "pass");
    REQUIRE(rep["members"].size() == 1);
    CHECK(rep["members"][0]["agreement"].get<long>() >= 4);
    CHECK(rep["conditions"]["pass"] == true);
}

TEST_CASE("reruns are byte-identical") {
    for (const char* args : {"gammap --prime 7 --prec 4 1",
                             "kd --prime 7 --params 1/6,1/6,5/6 --prec 6",
                             "ratio --prime 7 --params 1/6,1/6,5/6 --at 1",
                             "suite --quick"}) {
        RunResult first = run_cli(args);
        RunResult second = run_cli(args);
        INFO("args: " << args);
        CHECK(first.code == second.code);
        CHECK(first.out == second.out);
    }
}

TEST_CASE("an unknown command exits 2 with usage on stderr") {
    RunResult r = run_cli("transmogrify");
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.find("Usage") != std::string::npos);
}

TEST_CASE("an unknown flag exits 2") {
    RunResult r = run_cli("gammap --prime 7 --frobulate 1");
    CHECK(r.code == 2);
    CHECK(!r.err.empty());
}

TEST_CASE("a domain error exits 2 with a diagnostic") {
    RunResult r = run_cli("gammap --prime 7 1/7");
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("a failed verification exits 1") {
    // The anchor stabilizes to exactly four digits, so a six-digit demand
    // must fail and say so.
    RunResult r = run_cli("kd --prime 7 --params 1/6,1/6,5/6 --threshold 6");
    CHECK(r.code == 1);
    Json rep = parse_report(r);
    CHECK(rep["verdict"] == "fail");
}

TEST_CASE("a triple outside the digit conditions is not applicable") {
    RunResult r = run_cli("kd --prime 7 --params 1/2,1/2,1/2");
    CHECK(r.code == 0);
    Json rep = parse_report(r);
    CHECK(rep["verdict"] == "not-applicable");
    CHECK(rep["conditions"]["pass"] == false);
}

TEST_CASE("help exits 0") {
    RunResult r = run_cli("--help");
    CHECK(r.code == 0);
    CHECK(r.out.find("gammap") != std::string::npos);
}

TEST_CASE("the prime can come from the environment") {
    RunResult r = run_cli("gammap --prec 4 1");
    CHECK(r.code == 2);  // no prime given anywhere
    RunResult with_env = [] {
        std::string args = "gammap --prec 4 1";
        std::string err_file = temp_path("env_err");
        std::string cmd = std::string("PHG_PRIME=7 ") + PHG_CLI_PATH + " " + args + " 2>" +
                          err_file;
        FILE* pipe = popen(cmd.c_str(), "r");
        REQUIRE(pipe != nullptr);
        std::string out;
        char buf[4096];
        size_t got;
        while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
        int status = pclose(pipe);
        RunResult rr;
        rr.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        rr.out = std::move(out);
        std::remove(err_file.c_str());
        return rr;
    }();
    REQUIRE(with_env.code == 0);
    Json rep = Json::parse(with_env.out);
    CHECK(rep["inputs"]["prime"] == 7);
    CHECK(rep["value"]["digits"] == Json::array({6, 6, 6, 6}));
}

TEST_CASE("--out writes the report to a file") {
    std::string out_file = temp_path("report");
    RunResult r = run_cli("gammap --prime 7 --prec 4 1 --out " + out_file);
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(out_file);
    std::stringstream body;
    body << f.rdbuf();
    RunResult direct = run_cli("gammap --prime 7 --prec 4 1");
    CHECK(body.str() == direct.out);
    std::remove(out_file.c_str());
}

TEST_CASE("text output renders key-value lines") {
    RunResult r = run_cli("gammap --prime 7 --prec 4 1 --output text");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("command: gammap") != std::string::npos);
    CHECK(r.out.find("{") == std::string::npos);
}

TEST_CASE("hyper prints coefficients and an optional evaluation") {
    RunResult r = run_cli("hyper --params 1/2,1/2,1 --order 3 --at 1/9");
    REQUIRE(r.code == 0);
    Json rep = parse_report(r);
    CHECK(rep["series"]["chart"] == "lambda");
    REQUIRE(rep["series"]["coeffs"].size() == 4);
    CHECK(rep["series"]["coeffs"][1] == "1/4");
    CHECK(rep.contains("value_at"));
}

TEST_CASE("orbit dispatches on the argument shape") {
    RunResult single = run_cli("orbit --prime 7 1/10");
    REQUIRE(single.code == 0);
    Json srep = parse_report(single);
    CHECK(srep["period"] == 4);
    CHECK(srep["points"][0] == "1/10");

    RunResult triple = run_cli("orbit --prime 7 1/6,1/6,5/6");
    REQUIRE(triple.code == 0);
    Json trep = parse_report(triple);
    CHECK(trep["period"] == 1);
    CHECK(trep["preperiod"] == 0);

    RunResult stuck = run_cli("orbit --prime 7 --fmax 4 1/11,1/11,10/11");
    CHECK(stuck.code == 2);
}

TEST_CASE("xi reports the pullback cross-check away from zero") {
    RunResult r = run_cli("xi --prime 7 --params 1/6,1/6,5/6 --point 1 --index 1");
    REQUIRE(r.code == 0);
    Json rep = parse_report(r);
    CHECK(rep["mu"] == Json::array({1, 1, 5}));
    CHECK(rep["value"]["pi_exponent"] == 0);
    CHECK(rep["agreement"].get<long>() >= 4);

    RunResult at_zero = run_cli("xi --prime 7 --params 1/6,1/6,5/6 --point 0 --index 2");
    REQUIRE(at_zero.code == 0);
    Json zrep = parse_report(at_zero);
    CHECK(!zrep.contains("pullback"));
}

TEST_CASE("the quick suite passes and aggregates") {
    RunResult r = run_cli("suite --quick");
    REQUIRE(r.code == 0);
    Json rep = parse_report(r);
    CHECK(rep["verdict"] == "pass");
    CHECK(rep["failed"] == 0);
    CHECK(rep["checks"].size() >= 12);
    for (const Json& check : rep["checks"]) CHECK(check["pass"] == true);
}
