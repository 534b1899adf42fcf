#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "etaricci/fixtures.hpp"

// End-to-end exit-code contract of the installed binary:
//   0 every check passed, 1 mathematical failure, 2 usage/manifest error.

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    std::string dir = "cli_scratch";
    std::string path = dir + "/" + name;
    [[maybe_unused]] int rc = std::system(("mkdir -p " + dir).c_str());
    std::ofstream out(path);
    out << content;
    return path;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(ETARICCI_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("exit code contract") {
    std::string m5 = write_temp("m5.ini", etaricci::fixture_manifest("m5_example"));
    std::string rot =
        write_temp("rot.ini", etaricci::fixture_manifest("flat_r3_rotation"));
    std::string broken = write_temp("broken.ini",
                                    "[manifold]\ncoordinates = x, y\n"
                                    "[metric]\ng(x,x) = 1\n"); // missing components

    CHECK(run_cli("check-structure " + m5) == 0);
    CHECK(run_cli("check-structure " + rot) == 1);
    CHECK(run_cli("check-structure " + broken) == 2);
    CHECK(run_cli("check-structure does_not_exist.ini") == 2);

    CHECK(run_cli("curvature " + m5) == 0);
    CHECK(run_cli("curvature --format json " + m5) == 0);

    CHECK(run_cli("soliton --solve " + m5) == 0);
    CHECK(run_cli("soliton " + m5) == 2);              // neither flag
    CHECK(run_cli("soliton --verify " + m5) == 2);     // constants missing

    CHECK(run_cli("oracle " + m5) == 0);
    CHECK(run_cli("oracle --points 3 --tol 1e-6 " + m5) == 0);
    CHECK(run_cli("oracle --tol 1e-30 " + m5) == 1);

    CHECK(run_cli("fixtures list") == 0);
    CHECK(run_cli("fixtures dump m5_example") == 0);
    CHECK(run_cli("fixtures dump nosuch") == 2);

    // singular metric is a mathematical failure, not a usage error
    std::string singular = write_temp("singular.ini",
                                      "[manifold]\ncoordinates = x, y\n"
                                      "[metric]\ng(x,x) = 1\ng(x,y) = 0\ng(y,y) = 0\n");
    CHECK(run_cli("curvature " + singular) == 1);
}

TEST_CASE("json output is well formed") {
    std::string m5 = write_temp("m5json.ini", etaricci::fixture_manifest("m5_example"));
    std::string cmd = std::string(ETARICCI_CLI_PATH) + " soliton --solve --format json " +
                      m5 + " > cli_scratch/out.json 2>/dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    std::ifstream in("cli_scratch/out.json");
    REQUIRE(in.good());
    nlohmann::json j;
    CHECK_NOTHROW(in >> j);
    CHECK(j["tool"] == "etaricci");
    CHECK(j["checks"][0]["solved"]["lambda"] == "3");
    CHECK(j["checks"][0]["solved"]["mu"] == "1");
    CHECK(j["checks"][0]["classification"] == "expanding");
}
