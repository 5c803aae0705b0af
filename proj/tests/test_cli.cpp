#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "cli.hpp"

using namespace fibercurve;
using cli::run;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("fibercurve-test-" + std::to_string(rd()) + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

std::vector<fs::path> cache_files(const fs::path& dir) {
    std::vector<fs::path> v;
    for (const auto& e : fs::directory_iterator(dir)) v.push_back(e.path());
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({"fiber", "--family", "ns+", "--prime", "13"}).code, cli::kExitOk);
    EXPECT_EQ(run({"fiber", "--family", "ns+", "--prime", "15"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"fiber", "--family", "ns+", "--prime", "3"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"fiber", "--family", "xx", "--prime", "13"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
    EXPECT_EQ(run({}).code, cli::kExitUsage);
    EXPECT_EQ(run({"fiber", "--family", "ns", "--prime", "13", "--format", "yaml"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"drinfeld", "--group", "a4", "--prime", "13", "--format", "dot"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"drinfeld", "--group", "a4", "--family", "ns", "--prime", "13"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"verify", "--suite", "paper", "--primes", "5..2000"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"verify", "--suite", "paper", "--primes", "9..5"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"verify", "--suite", "paper", "--primes", "5..20", "--jobs", "0"}).code, cli::kExitUsage);
}

TEST(Cli, InadmissibleExceptionalNamesCongruence) {
    const auto r = run({"fiber", "--family", "s4", "--prime", "13"});
    EXPECT_EQ(r.code, cli::kExitUsage);
    EXPECT_NE(r.err.find("S4 requires p ≡ ±1 mod 8"), std::string::npos) << r.err;
    EXPECT_TRUE(r.out.empty());
}

TEST(Cli, WorkedEquationText) {
    const auto r = run({"drinfeld", "--group", "a4", "--prime", "13", "--format", "text"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "u^7 = t^5 (t-1)^5\n");
}

TEST(Cli, FiberJsonNsPlusThirteen) {
    const auto r = run({"fiber", "--family", "ns+", "--prime", "13"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("toric_rank"), 0);
    ASSERT_EQ(j.at("horizontal").size(), 1u);
    EXPECT_EQ(j.at("horizontal")[0].at("genus"), 3);
}

TEST(Cli, FiberFormats) {
    const auto dot = run({"fiber", "--family", "ns+", "--prime", "29", "--format", "dot"});
    ASSERT_EQ(dot.code, 0);
    EXPECT_EQ(dot.out.rfind("graph", 0), 0u) << dot.out;
    const auto text = run({"fiber", "--family", "ns+", "--prime", "29", "--format", "text"});
    ASSERT_EQ(text.code, 0);
    EXPECT_NE(text.out.find("total genus: 24"), std::string::npos) << text.out;
}

TEST(Cli, OrbitsAndNeron) {
    const auto o = run({"orbits", "--group", "a4", "--prime", "13", "--format", "text"});
    ASSERT_EQ(o.code, 0);
    EXPECT_NE(o.out.find("N_p = 3"), std::string::npos) << o.out;
    const auto n = run({"neron", "--family", "ns+", "--prime", "29", "--format", "text"});
    ASSERT_EQ(n.code, 0) << n.out;
    EXPECT_NE(n.out.find("Z/8 x Z/56"), std::string::npos) << n.out;
}

TEST(Cli, VerifySmallRangePasses) {
    const auto r = run({"verify", "--suite", "paper", "--primes", "5..100", "--jobs", "2"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("result: PASS"), std::string::npos) << r.out;
    EXPECT_EQ(r.out.find("FAIL "), std::string::npos) << r.out;
}

TEST(Cache, WarmOutputIsByteIdentical) {
    TempDir t;
    const std::vector<std::string> args{"fiber", "--family", "s", "--prime", "31", "--cache", t.path.string()};
    const auto cold = run(args);
    ASSERT_EQ(cold.code, 0);
    const auto files = cache_files(t.path);
    ASSERT_EQ(files.size(), 1u);
    const auto before = slurp(files[0]);
    const auto warm = run(args);
    EXPECT_EQ(warm.out, cold.out);
    EXPECT_EQ(slurp(files[0]), before); // hit, not rewritten
    EXPECT_EQ(run({"fiber", "--family", "s", "--prime", "31"}).out, cold.out);
}

TEST(Cache, StaleSchemaIsRecomputed) {
    TempDir t;
    const std::vector<std::string> args{"fiber", "--family", "ns", "--prime", "17", "--cache", t.path.string()};
    const auto cold = run(args);
    const auto file = cache_files(t.path).at(0);
    auto entry = nlohmann::ordered_json::parse(slurp(file));
    entry["schema"] = cli::kCacheSchema + 1;
    entry["outputs"]["json"] = "stale\n";
    std::ofstream(file) << entry.dump();
    const auto again = run(args);
    EXPECT_EQ(again.out, cold.out);
    EXPECT_EQ(nlohmann::json::parse(slurp(file)).at("schema"), cli::kCacheSchema);

    std::ofstream(file) << "{ not json";
    EXPECT_EQ(run(args).out, cold.out);
}

TEST(Cache, EnvironmentOverridesFlag) {
    TempDir flag, env;
    const auto r = run({"orbits", "--group", "a4", "--prime", "13", "--cache", flag.path.string()}, env.path.string());
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(cache_files(flag.path).empty());
    EXPECT_EQ(cache_files(env.path).size(), 1u);
}

TEST(Cache, FormatsShareOneFile) {
    TempDir t;
    for (const char* f : {"json", "text", "dot"})
        ASSERT_EQ(run({"fiber", "--family", "ns+", "--prime", "13", "--format", f, "--cache", t.path.string()}).code, 0);
    const auto files = cache_files(t.path);
    ASSERT_EQ(files.size(), 1u);
    EXPECT_EQ(nlohmann::json::parse(slurp(files[0])).at("outputs").size(), 3u);
}

TEST(Cache, CachedMismatchStillFails) {
    TempDir t;
    const std::vector<std::string> args{"neron", "--family", "ns+", "--prime", "29", "--format", "text", "--cache", t.path.string()};
    ASSERT_EQ(run(args).code, 0);
    const auto file = cache_files(t.path).at(0);
    auto entry = nlohmann::ordered_json::parse(slurp(file));
    entry["outputs"]["text"] = "component group of X_ns+(29): Z/8\nexpected Z/8 x Z/56  MISMATCH\n";
    std::ofstream(file) << entry.dump();
    EXPECT_EQ(run(args).code, cli::kExitVerification);
}

// The real binary, for process exit status and stream routing.
TEST(Binary, ExitStatus) {
    const char* bin = std::getenv("FIBERCURVE_BIN");
    if (!bin) GTEST_SKIP() << "FIBERCURVE_BIN not set";
    auto status = [&](const std::string& a) {
        const int s = std::system((std::string(bin) + " " + a + " >/dev/null 2>&1").c_str());
        return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    };
    EXPECT_EQ(status("drinfeld --group a4 --prime 13 --format text"), 0);
    EXPECT_EQ(status("fiber --family s4 --prime 13"), 2);
    EXPECT_EQ(status("nosuch"), 2);
    EXPECT_EQ(status("--help"), 0);
}
