#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "dowling/cli.hpp"

using namespace dowling;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "dowling");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

int run_binary(const std::string& args) {
    const std::string cmd = std::string(DOWLING_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("dowling-test-" + name + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST(Cli, DocumentedExamples) {
    auto r = run({"mobius", "--family", "pi-rj", "--m", "4", "--r", "2", "--j", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "2\n");
    r = run({"series", "--name", "cor3.4-dowling", "--s", "1", "--T", "5"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "-1, 0, 0, 0, 0, 0\n");
    r = run({"descents", "--word", "aba", "--q"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "q + 2q^2 + q^3 + q^4\n");
    r = run({"descents", "--word", "aba"});
    EXPECT_EQ(r.out, "5\n");
}

TEST(Cli, VerifyExitCodes) {
    EXPECT_EQ(run({"verify", "bogus"}).code, 2);
    EXPECT_EQ(run({"verify", "cor3.4", "--s", "2", "--nmax", "3"}).code, 0);
    auto r = run({"verify", "thm5.4", "--r", "2", "--k", "1", "--n", "2", "--format", "json"});
    EXPECT_EQ(r.code, 0);
    const auto doc = Json::parse(r.out);
    ASSERT_EQ(doc["reports"].size(), 1U);
    EXPECT_EQ(doc["reports"][0]["epsilon"], -1);
    EXPECT_EQ(doc["reports"][0]["identity"], "mobius-descents-extended");
    EXPECT_EQ(doc["config"]["suite"], "thm5.4");
    EXPECT_EQ(doc["config"]["r"], 2);
}

TEST(Cli, InvalidParametersAndGuards) {
    auto r = run({"mobius", "--family", "pi-rj", "--m", "5", "--r", "2", "--j", "2"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("m = j (mod r)"), std::string::npos);
    r = run({"mobius", "--family", "pi", "--n", "12"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("max_lattice_ground"), std::string::npos);
    EXPECT_NE(r.err.find("limit 9"), std::string::npos);
    r = run({"mobius", "--family", "pi", "--n", "10", "--max-lattice-ground", "10", "--max-elements", "10"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("max_elements"), std::string::npos);
    EXPECT_EQ(run({"mobius", "--family", "nope", "--n", "2"}).code, 2);
    EXPECT_EQ(run({"mobius", "--family", "pi"}).code, 2);
    EXPECT_EQ(run({"verify", "cor4.3", "--I", "2,3", "--J", "1"}).code, 2);
    EXPECT_EQ(run({"descents", "--word", "abc"}).code, 2);
    EXPECT_EQ(run({"verify", "lemma2.1", "--no-such-flag"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, DeterministicAcrossJobs) {
    const auto a = run({"verify", "all", "--format", "json", "--jobs", "1"});
    const auto b = run({"verify", "all", "--format", "json", "--jobs", "4"});
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const auto doc = Json::parse(a.out);
    EXPECT_TRUE(doc["passed"].get<bool>());
    EXPECT_GT(doc["reports"].size(), 100U);
}

TEST(Cli, CacheHitMatchesColdRun) {
    const auto dir = temp_dir("cache");
    const std::vector<std::string> args{"verify", "prop4.5", "--format", "json", "--cache-dir", dir.string()};
    const auto cold = run(args);
    ASSERT_EQ(cold.code, 0);
    EXPECT_TRUE(std::filesystem::exists(dir));
    const auto warm = run(args);
    EXPECT_EQ(cold.out, warm.out);
    EXPECT_EQ(run({"verify", "prop4.5", "--format", "json"}).out, cold.out);
    const auto list = run({"cache", "list", "--cache-dir", dir.string()});
    EXPECT_NE(list.out.find("verify|prop4.5|r=2|k=1|s=2|T=6"), std::string::npos);

    const std::vector<std::string> lat{"lattice", "--family", "dowling", "--n", "2", "--s", "2", "--cache-dir", dir.string()};
    const auto l1 = run(lat), l2 = run(lat);
    EXPECT_EQ(l1.out, l2.out);
    EXPECT_EQ(run({"lattice", "--family", "dowling", "--n", "2", "--s", "2"}).out, l1.out);

    const auto cleared = run({"cache", "clear", "--cache-dir", dir.string()});
    EXPECT_EQ(cleared.code, 0);
    EXPECT_TRUE(run({"cache", "list", "--cache-dir", dir.string()}).out.empty());
    std::filesystem::remove_all(dir);
}

TEST(Cli, ReportFilesAndCsv) {
    const auto dir = temp_dir("out");
    const auto r = run({"verify", "thm5.5", "--format", "csv", "--out", dir.string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("identity,params,tag,n,brute,closed_form,ratio\n", 0), 0U);
    EXPECT_TRUE(std::filesystem::exists(dir / "thm5.5.json"));
    EXPECT_TRUE(std::filesystem::exists(dir / "thm5.5.csv"));
    std::filesystem::remove_all(dir);
}

TEST(Cli, LatticeJsonRoundTrip) {
    const auto r = run({"lattice", "--family", "pi-rj", "--m", "6", "--r", "2", "--j", "2"});
    ASSERT_EQ(r.code, 0);
    const auto doc = Json::parse(r.out);
    const auto P = poset_from_json(doc["poset"]);
    const auto built = build_extended(6, 2, 2);
    EXPECT_EQ(P.size(), built.size());
    EXPECT_EQ(P.cover_pairs(), built.poset.cover_pairs());
    EXPECT_EQ(mobius_bottom_top(P), -16);
    EXPECT_TRUE(doc["elements"][0].is_null());
    EXPECT_EQ(doc["elements"].back(), Json::parse("[[1,2,3,4,5,6]]"));

    const auto d = Json::parse(run({"lattice", "--family", "dowling", "--n", "2", "--s", "2"}).out);
    EXPECT_EQ(d["elements"].size(), 6U);
    EXPECT_TRUE(d["elements"][0].contains("zero_block"));
    EXPECT_TRUE(d["elements"][0]["blocks"][0].contains("labels"));
}

TEST(Cli, ReportJsonRoundTrip) {
    const auto rep = mu_descent_check(2, 1, 2);
    const auto back = report_from_json(report_to_json(rep));
    EXPECT_EQ(report_to_json(back).dump(), report_to_json(rep).dump());
    EXPECT_EQ(back.verdict, rep.verdict);
    EXPECT_EQ(back.epsilon, -1);
}

TEST(Cli, MobiusTables) {
    const auto r = run({"mobius", "--family", "pi", "--nmax", "5"});
    EXPECT_EQ(r.out, "n,mu\n1,1\n2,-1\n3,2\n4,-6\n5,24\n");
    const auto d = run({"mobius", "--family", "pi-r", "--r", "2", "--nmax", "4"});
    EXPECT_EQ(d.out, "n,mu\n1,-1\n2,2\n3,-16\n4,272\n");
    const auto D = build_D_rk(3, 1, 2, 2, true);
    EXPECT_EQ(run({"mobius", "--family", "d-rk", "--n", "3", "--r", "1", "--k", "2", "--s", "2"}).out,
              std::to_string(mobius_bottom_top(D.poset)) + "\n");
}

TEST(Cli, ElCheck) {
    auto r = run({"el-check", "--m", "9", "--r", "2", "--j", "3", "--sigma", "562418379"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "0 < 56|24|18|379 < 56|2418|379 < 562418|379 < 562418379\n");
    // 123456789 has no descents, so it is not in A and its chain is not falling
    EXPECT_EQ(run({"el-check", "--r", "2", "--j", "3", "--sigma", "123456789"}).code, 1);
    r = run({"el-check", "--m", "6", "--r", "2", "--j", "2"});
    EXPECT_EQ(r.code, 0);
    const auto doc = Json::parse(r.out);
    for (const char* key : {"m", "r", "j", "intervals_checked", "rising_violations", "falling_count", "des_expected", "f_sigma_match", "mu"})
        EXPECT_TRUE(doc.contains(key)) << key;
    EXPECT_EQ(doc["falling_count"], 16);
    EXPECT_EQ(doc["mu"], -16);
}

TEST(Cli, DescentTable) {
    const auto r = run({"descents", "--n", "3", "--format", "json"});
    const auto doc = Json::parse(r.out);
    ASSERT_EQ(doc["rows"].size(), 4U);
    long total = 0;
    for (const auto& row : doc["rows"]) total += row["des"].get<long>();
    EXPECT_EQ(total, 6);
    EXPECT_EQ(run({"descents", "--word", "abab", "--method", "inclusion-exclusion", "--q"}).out,
              run({"descents", "--word", "abab", "--method", "enumerate", "--q"}).out);
}

TEST(Cli, BinaryExitCodes) {
    EXPECT_EQ(run_binary("mobius --family pi-rj --m 4 --r 2 --j 2"), 0);
    EXPECT_EQ(run_binary("verify bogus"), 2);
    EXPECT_EQ(run_binary("verify thm5.4 --r 2 --k 1 --n 2"), 0);
    EXPECT_EQ(run_binary("el-check --r 2 --j 3 --sigma 123456789"), 1);
    EXPECT_EQ(run_binary("mobius --family pi --n 12"), 2);
}
