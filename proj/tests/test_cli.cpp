#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "doctest.h"

#include "json.hpp"

#ifndef BELTRAMI_CLI_PATH
#error "BELTRAMI_CLI_PATH must point at the built binary"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

// runs the CLI with stderr folded into the captured stream
RunResult run(const std::string& args) {
    const std::string cmd = std::string(BELTRAMI_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace

TEST_CASE("delta computes the flat laplacian") {
    const RunResult r =
        run("delta --op 2 --phi 'x1^2+x2^2+x3^2' --builtin euclidean --dim 3 --point 1,1,1 "
            "--format json");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["re"].get<double>() == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(j["im"].get<double>() == doctest::Approx(0.0));
}

TEST_CASE("pair operator requires the second field exactly for 1pair") {
    CHECK(run("delta --op 1pair --phi r --psi theta --builtin polar2 --point 2,1").exit_code == 0);
    CHECK(run("delta --op 1pair --phi r --builtin polar2 --point 2,1").exit_code == 2);
    CHECK(run("delta --op 2 --phi r --psi theta --builtin polar2 --point 2,1").exit_code == 2);
}

TEST_CASE("metric emits both matrices") {
    const RunResult r = run("metric --builtin polar2 --point 2,1 --format json");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["g"][1][1].get<double>() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(j["g_inv"][1][1].get<double>() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("christoffel lists only nonvanishing entries") {
    const RunResult r = run("christoffel --builtin polar2 --point 2,1 --format json");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["gamma"].size() == 3);
    bool saw_rtt = false;
    for (const auto& e : j["gamma"])
        if (e["i"] == "r" && e["k"] == "theta" && e["l"] == "theta") {
            saw_rtt = true;
            CHECK(e["value"].get<double>() == doctest::Approx(-2.0).epsilon(1e-12));
        }
    CHECK(saw_rtt);
}

TEST_CASE("bad invocations exit 2") {
    CHECK(run("delta --op 2 --phi '(r' --builtin polar2 --point 1,1").exit_code == 2);
    CHECK(run("metric --builtin nosuch --dim 2 --point 1,1").exit_code == 2);
    CHECK(run("metric --builtin euclidean --point 1,1").exit_code == 2);  // dim required
    CHECK(run("metric --builtin polar2 --point 1,x").exit_code == 2);
    CHECK(run("metric --point 1,1").exit_code == 2);  // no chart at all
    CHECK(run("metric --builtin polar2").exit_code == 2);  // missing --point
    CHECK(run("nosuchcommand").exit_code == 2);
    CHECK(run("verify --identity nosuch").exit_code == 2);
    CHECK(run("verify --suite all --identity prop1 --samples 5").exit_code == 2);
    const RunResult parse_err = run("delta --op 2 --phi '(r' --builtin polar2 --point 1,1");
    CHECK(parse_err.out.find("offset 2") != std::string::npos);
}

TEST_CASE("domain failures exit 3") {
    CHECK(run("metric --builtin polar2 --point 0.05,1").exit_code == 3);
    CHECK(run("delta --op 2 --phi 'log(r-2)' --builtin polar2 --point 2,1").exit_code == 3);
}

TEST_CASE("chart files work end to end") {
    const std::string path = "/tmp/beltrami_cli_chart.json";
    {
        FILE* f = fopen(path.c_str(), "w");
        REQUIRE(f != nullptr);
        fputs(R"({"name":"shifted","coords":["a","b"],)"
              R"("embedding":["a+b","a-b"],"domain":[[-3,3],[-3,3]]})",
              f);
        fclose(f);
    }
    const RunResult r = run("metric --chart-file " + path + " --point 1,1 --format json");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["g"][0][0].get<double>() == doctest::Approx(2.0));

    CHECK(run("metric --chart-file /tmp/no_such_chart.json --point 1,1").exit_code == 2);
    {
        FILE* f = fopen(path.c_str(), "w");
        REQUIRE(f != nullptr);
        fputs(R"({"name":"broken","coords":["a","b"],)"
              R"("embedding":["a"],"domain":[[-3,3],[-3,3]]})",
              f);
        fclose(f);
    }
    CHECK(run("metric --chart-file " + path + " --point 1,1").exit_code == 2);
}

TEST_CASE("verify exits by verdict") {
    CHECK(run("verify --identity lemma1 --samples 10").exit_code == 0);
    // impossible tolerance flips a should-pass row to fail, which is a
    // verdict mismatch
    CHECK(run("verify --identity prop5 --samples 10 --tol 1e-18").exit_code == 1);
    // expected failures are not mismatches
    CHECK(run("verify --identity thm3 --samples 10 --psi paper --dims 2,4").exit_code == 0);
}

TEST_CASE("verify output is byte-identical across runs") {
    const RunResult a = run("verify --suite all --samples 25 --format json");
    const RunResult b = run("verify --suite all --samples 25 --format json");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());

    const RunResult csv = run("verify --identity eq10 --samples 5 --format csv");
    CHECK(csv.exit_code == 0);
    CHECK(csv.out.rfind("identity,chart,dim,seed,samples,", 0) == 0);
}
