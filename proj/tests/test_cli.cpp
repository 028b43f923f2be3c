#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <string>

#include "povmdisc/json_io.hpp"

using namespace povmdisc;

namespace {

const std::string kCli = POVMDISC_CLI_PATH;

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("povmdisc_cli_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args, const std::string& stdout_path = "/dev/null") {
    const std::string cmd = kCli + " " + args + " > " + stdout_path + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("cli: sic -> classify reports AdaptiveOnly") {
    TempDir dir;
    CHECK(run("sic --dim 3 --out " + dir.file("pair.json")) == 0);
    const std::string out = dir.file("verdict.json");
    CHECK(run("classify " + dir.file("pair.json") + " --no-witness", out) == 0);
    const Json verdict = Json::parse(slurp(out));
    CHECK(verdict["category"] == "AdaptiveOnly");
    CHECK(verdict["identity_in_span"] == false);
    CHECK(verdict["disjoint"] == true);
    CHECK(verdict["positive_in_span"] == true);
}

TEST_CASE("cli: random full-effect pair is never perfectly distinguishable") {
    TempDir dir;
    CHECK(run("random --dim 2 --effects 4 --seed 1 --out " + dir.file("pair.json")) == 0);
    const std::string out = dir.file("verdict.json");
    CHECK(run("classify " + dir.file("pair.json"), out) == 0);
    const Json verdict = Json::parse(slurp(out));
    CHECK(verdict["category"] == "NotPerfectlyDistinguishable");
    CHECK(verdict["identity_in_span"] == true);
}

TEST_CASE("cli: synthesize and simulate the SIC pair") {
    TempDir dir;
    CHECK(run("sic --dim 3 --out " + dir.file("pair.json")) == 0);
    CHECK(run("synthesize " + dir.file("pair.json") + " --out " + dir.file("scheme.json")) == 0);
    const std::string out = dir.file("report.json");
    CHECK(run("simulate " + dir.file("scheme.json") + " " + dir.file("pair.json") +
                  " --no-paths",
              out) == 0);
    const Json report = Json::parse(slurp(out));
    CHECK(report["mode"] == "exact");
    CHECK(std::abs(report["success_probability"].get<double>() - 1.0) < 1e-9);

    const std::string sampled_out = dir.file("sampled.json");
    CHECK(run("simulate " + dir.file("scheme.json") + " " + dir.file("pair.json") +
                  " --shots 2000 --seed 3 --no-paths",
              sampled_out) == 0);
    const Json sampled = Json::parse(slurp(sampled_out));
    CHECK(sampled["mode"] == "sampled");
    CHECK(sampled["success_probability"].get<double>() == 1.0);
}

TEST_CASE("cli: parallel-check on the SIC pair finds nothing") {
    TempDir dir;
    CHECK(run("sic --dim 3 --out " + dir.file("pair.json")) == 0);
    const std::string out = dir.file("par.json");
    CHECK(run("parallel-check " + dir.file("pair.json") + " --uses 1", out) == 0);
    const Json result = Json::parse(slurp(out));
    CHECK(result["witness_found"] == false);
    CHECK(result["best_residual"].get<double>() > 1e-4);
}

TEST_CASE("cli: domain errors exit 1, usage errors exit 2") {
    TempDir dir;
    // malformed JSON
    {
        std::ofstream bad(dir.file("bad.json"));
        bad << "{ \"dim\": 2, ";
    }
    CHECK(run("classify " + dir.file("bad.json")) == 1);

    // dimension-mismatched pair file
    {
        std::ofstream mism(dir.file("mismatch.json"));
        mism << R"({"dim": 2, "m": 2,
                    "first": [[[1,0],[0,0]],[[0,0],[1,0]]],
                    "second": [[[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]]]})";
    }
    CHECK(run("classify " + dir.file("mismatch.json")) == 1);

    // incomplete POVM (violates the completeness invariant)
    {
        std::ofstream incom(dir.file("incomplete.json"));
        incom << R"({"dim": 2, "m": 2,
                     "first": [[[1,0],[0,0]],[[1,0],[0,0]]],
                     "second": [[[1,0],[0,0]],[[0,0],[1,0]]]})";
    }
    CHECK(run("classify " + dir.file("incomplete.json")) == 1);

    CHECK(run("classify --definitely-not-a-flag foo") == 2);
    CHECK(run("random --dim 3 --effects 2 --out " + dir.file("x.json")) == 1);
    CHECK(run("parallel-check " + dir.file("bad.json") + " --uses 1") == 1);
    CHECK(run("sweep --dim 2 --effects nonsense --samples 5 --seed 1 --out " +
              dir.file("x.csv")) == 2);
}

TEST_CASE("cli: identical seeds give byte-identical artifacts") {
    TempDir dir;
    CHECK(run("random --dim 2 --effects 3 --seed 9 --out " + dir.file("a.json")) == 0);
    CHECK(run("random --dim 2 --effects 3 --seed 9 --out " + dir.file("b.json")) == 0);
    CHECK(slurp(dir.file("a.json")) == slurp(dir.file("b.json")));
    CHECK(slurp(dir.file("a.json")).find("\"dim\"") != std::string::npos);

    CHECK(run("sweep --dim 2 --effects 3 --samples 60 --seed 4 --threads 1 --out " +
              dir.file("a.csv")) == 0);
    CHECK(run("sweep --dim 2 --effects 3 --samples 60 --seed 4 --threads 2 --out " +
              dir.file("b.csv")) == 0);
    const std::string csv = slurp(dir.file("a.csv"));
    CHECK(csv == slurp(dir.file("b.csv")));
    CHECK(csv.rfind("m,n_samples,", 0) == 0);
}

TEST_CASE("cli: sweep range syntax and config sidecar") {
    TempDir dir;
    CHECK(run("sweep --dim 2 --effects 2..4:2 --samples 20 --seed 2 --out " + dir.file("s.csv") +
              " --config-out " + dir.file("s.json")) == 0);
    const std::string csv = slurp(dir.file("s.csv"));
    CHECK(csv.find("\n2,") != std::string::npos);
    CHECK(csv.find("\n4,") != std::string::npos);
    CHECK(csv.find("\n3,") == std::string::npos);
    const Json cfg = Json::parse(slurp(dir.file("s.json")));
    CHECK(cfg["dim"] == 2);
    CHECK(cfg["master_seed"] == 2);
}
