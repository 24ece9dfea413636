#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef CLI_BINARY
#error "CLI_BINARY must point at the command-line executable"
#endif

namespace {

int run(const std::string& args) {
    std::string cmd = std::string(CLI_BINARY) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string capture(const std::string& args) {
    std::string cmd = std::string(CLI_BINARY) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    size_t m;
    while ((m = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, m);
    pclose(p);
    return out;
}

std::string tmpdir(const std::string& tag) {
    std::string d = "/tmp/catenoid_cli_" + tag;
    std::system(("rm -rf " + d + " && mkdir -p " + d).c_str());
    return d;
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("identity suite passes and reports failure when corrupted") {
    CHECK(run("verify") == 0);
    CHECK(run("verify --corrupt-q1") == 1);
}

TEST_CASE("bad invocations exit with a usage error") {
    CHECK(run("--definitely-not-a-flag") == 2);
    CHECK(run("evolve --config /no/such/file.cfg") == 2);
    CHECK(run("no-such-subcommand") == 2);
}

TEST_CASE("verify JSON output is well formed and all identities pass") {
    auto j = nlohmann::json::parse(capture("verify --json"));
    REQUIRE(j.is_array());
    CHECK(j.size() >= 6);
    for (const auto& item : j) {
        CHECK(item["pass"].get<bool>());
        CHECK(item["residual"].get<std::string>() == "0");
    }
}

TEST_CASE("manifest records the run and digests of every artifact") {
    auto d = tmpdir("manifest");
    CHECK(run("verify --out " + d) == 0);
    auto m = read_json(d + "/manifest.json");
    CHECK(m["subcommand"] == "verify");
    CHECK(m.contains("version"));
    CHECK(m["output_digests"].contains("identities.json"));
}

TEST_CASE("runs are reproducible: identical digests across repeats") {
    auto d1 = tmpdir("repro1");
    auto d2 = tmpdir("repro2");
    std::string cfg = "/tmp/catenoid_cli_repro.cfg";
    {
        std::ofstream out(cfg);
        out << "l = 0\nrmin = 2\nrmax = 50\nnodes = 400\ntmax = 10\n"
               "observers = 10\np_list = 0.5, 1.0\n";
    }
    CHECK(run("evolve --config " + cfg + " --out " + d1) == 0);
    CHECK(run("evolve --config " + cfg + " --out " + d2) == 0);
    auto m1 = read_json(d1 + "/manifest.json");
    auto m2 = read_json(d2 + "/manifest.json");
    CHECK(m1["output_digests"] == m2["output_digests"]);
    CHECK(m1["output_digests"].size() >= 1);
}

TEST_CASE("profile subcommand emits the expected sections") {
    auto out = capture("profile --json");
    auto j = nlohmann::json::parse(out);
    CHECK(j.contains("asymptote_S"));
    CHECK(j["asymptote_S"].get<double>() == doctest::Approx(0.7010910526627271).epsilon(1e-10));
}

TEST_CASE("scalar toy subcommands succeed") {
    CHECK(run("hardy --trials 5") == 0);
    CHECK(run("smooth") == 0);
    CHECK(run("shoot --T 20") == 0);
}
