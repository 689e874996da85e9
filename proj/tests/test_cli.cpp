#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell; stderr is discarded.
CliRun run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" HTORSION_CLI_PATH "' " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("htorsion_cli_") + info->name() + "_" + std::to_string(getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << content;
    return p;
  }

  std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

  fs::path dir_;
};

// so3c with a slightly stretched metric: |Q_F| is small but nonzero.
constexpr const char* kNearlyCritical = R"({"catalog": "so3c", "metric": [[1.000001, 0, 0], [0, 1, 0], [0, 0, 1]]})";

TEST_F(Cli, CatalogCommands) {
  const CliRun list = run("catalog list");
  EXPECT_EQ(list.code, 0);
  for (const char* name : {"abelian-N", "so3c", "sokc-K", "iwasawa", "kodaira-thurston"})
    EXPECT_NE(list.out.find(name), std::string::npos) << name;
  const CliRun show = run("catalog show so3c");
  EXPECT_EQ(show.code, 0);
  EXPECT_NE(show.out.find("d phi_1 = phi_2^phi_3"), std::string::npos);
  EXPECT_EQ(run("catalog show nosuch").code, 1);
  EXPECT_EQ(run("--format json catalog list").code, 0);
  EXPECT_NO_THROW(nlohmann::json::parse(run("--format json catalog show iwasawa").out));
}

TEST_F(Cli, AnalyzeCatalogEntries) {
  const CliRun so3 = run("--format json analyze --catalog so3c");
  ASSERT_EQ(so3.code, 0);
  const auto j = nlohmann::json::parse(so3.out);
  EXPECT_NEAR(j["torsion"]["normT2"].get<double>(), 6.0, 1e-14);
  EXPECT_TRUE(j["classification"]["stp"]["flag"].get<bool>());
  const CliRun text = run("analyze --catalog abelian-2");
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("kahler"), std::string::npos);
}

TEST_F(Cli, InputFilesAndStdin) {
  const fs::path in = write("kt.json", R"({"catalog": "kodaira-thurston", "metric": [[2, 0], [0, 1]]})");
  EXPECT_EQ(run("analyze " + q(in)).code, 0);
  const CliRun piped = run("--format json analyze - < " + q(in));
  ASSERT_EQ(piped.code, 0);
  EXPECT_EQ(nlohmann::json::parse(piped.out)["input"]["catalog"], "kodaira-thurston");
}

TEST_F(Cli, InvalidInputExitsOne) {
  EXPECT_EQ(run("analyze").code, 1);
  EXPECT_EQ(run("analyze --catalog so3c " + q(write("x.json", "{}"))).code, 1);
  EXPECT_EQ(run("analyze " + q(dir_ / "missing.json")).code, 1);
  EXPECT_EQ(run("analyze " + q(write("bad.json", "{not json"))).code, 1);
  EXPECT_EQ(run("analyze " + q(write("pd.json", R"({"catalog": "kodaira-thurston", "metric": [[1, 2], [2, 1]]})"))).code, 1);
  EXPECT_EQ(run("analyze " + q(write("idx.json", R"({"n": 2, "C": [{"up": 3, "lo": [1, 2], "re": 1, "im": 0}]})"))).code, 1);
  EXPECT_EQ(run("--format yaml analyze --catalog so3c").code, 1);
  EXPECT_EQ(run("--bogus analyze --catalog so3c").code, 1);
  EXPECT_EQ(run("nosuch").code, 1);
  EXPECT_EQ(run("variation-check --catalog so3c --directions 0").code, 1);
  EXPECT_EQ(run("optimize --catalog so3c --objective nosuch").code, 1);
  EXPECT_EQ(run("optimize --catalog so3c --grad-tol -1").code, 1);
  EXPECT_EQ(run("--tol -1 analyze --catalog so3c").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, CheckCriticalExitCodes) {
  EXPECT_EQ(run("check-critical --catalog so3c").code, 0);
  const CliRun iw = run("--format json check-critical --catalog iwasawa");
  EXPECT_EQ(iw.code, 3);
  EXPECT_NEAR(nlohmann::json::parse(iw.out)["residual"].get<double>(), 3.26599, 1e-5);
  EXPECT_EQ(run("check-critical --catalog iwasawa --functional gauduchon").code, 0);
  EXPECT_EQ(run("check-critical --catalog kodaira-thurston --functional gauduchon").code, 3);
  EXPECT_EQ(run("check-critical --catalog so3c --functional nosuch").code, 1);
}

TEST_F(Cli, ToleranceFromFlagAndEnvironment) {
  const fs::path in = write("near.json", kNearlyCritical);
  EXPECT_EQ(run("check-critical " + q(in)).code, 3);
  EXPECT_EQ(run("--tol 1e-3 check-critical " + q(in)).code, 0);
  EXPECT_EQ(run("check-critical " + q(in) + " --tol 1e-3").code, 0);
  EXPECT_EQ(run("check-critical " + q(in), "HTORSION_TOL=1e-3").code, 0);
  // the flag wins over the environment
  EXPECT_EQ(run("--tol 1e-9 check-critical " + q(in), "HTORSION_TOL=1e-3").code, 3);
  EXPECT_EQ(run("check-critical " + q(in), "HTORSION_TOL=abc").code, 1);
  const CliRun j = run("--format json check-critical " + q(in), "HTORSION_TOL=1e-3");
  EXPECT_EQ(nlohmann::json::parse(j.out)["tolerance"].get<double>(), 1e-3);
}

TEST_F(Cli, VariationCheck) {
  const CliRun so3 = run("--format json variation-check --catalog so3c --directions 10");
  ASSERT_EQ(so3.code, 0);
  const auto j = nlohmann::json::parse(so3.out);
  EXPECT_LE(j["max_deviation"].get<double>(), 1e-6);
  EXPECT_EQ(j["samples"].size(), 10u);
  EXPECT_EQ(run("variation-check --catalog iwasawa --directions 10").code, 0);
  EXPECT_EQ(run("variation-check --catalog abelian-3 --directions 2").code, 0);
}

TEST_F(Cli, Optimize) {
  EXPECT_EQ(run("optimize --catalog abelian-3").code, 0);
  const CliRun so3 = run("--format json optimize --catalog so3c --objective residual_norm --seed 7");
  ASSERT_EQ(so3.code, 0);
  const auto j = nlohmann::json::parse(so3.out);
  EXPECT_LE(j["final"]["residuals"]["Q_F_norm"].get<double>(), 1e-6);
  // no critical metric exists, so a short run cannot converge
  EXPECT_EQ(run("optimize --catalog kodaira-thurston --objective gauduchon --max-iter 20").code, 3);
  // deterministic given the seed
  const std::string a = run("--format json optimize --catalog kodaira-thurston --objective gauduchon --max-iter 10 --seed 4").out;
  const std::string b = run("--format json optimize --catalog kodaira-thurston --objective gauduchon --max-iter 10 --seed 4").out;
  EXPECT_EQ(a, b);
}

TEST_F(Cli, OutputFileIsAtomic) {
  const fs::path out = dir_ / "report.json";
  EXPECT_EQ(run("--format json --output " + q(out) + " analyze --catalog so3c").code, 0);
  EXPECT_TRUE(fs::exists(out));
  EXPECT_FALSE(fs::exists(dir_ / "report.json.partial"));
  EXPECT_NO_THROW(nlohmann::json::parse(read_file(out)));

  const fs::path failed = dir_ / "failed.json";
  EXPECT_EQ(run("--output " + q(failed) + " analyze --catalog nosuch").code, 1);
  EXPECT_FALSE(fs::exists(failed));
  EXPECT_FALSE(fs::exists(dir_ / "failed.json.partial"));

  // a negative verdict still writes the full report
  const fs::path negative = dir_ / "iw.json";
  EXPECT_EQ(run("--format json --output " + q(negative) + " check-critical --catalog iwasawa").code, 3);
  EXPECT_FALSE(nlohmann::json::parse(read_file(negative))["critical"].get<bool>());

  EXPECT_EQ(run("--output " + q(dir_ / "no" / "such" / "dir.json") + " analyze --catalog so3c").code, 1);
}

TEST_F(Cli, ReportsAreByteStable) {
  for (const char* name : {"abelian-3", "so3c", "sokc-4", "iwasawa", "kodaira-thurston"}) {
    for (const char* format : {"json", "text"}) {
      const fs::path a = dir_ / "a", b = dir_ / "b";
      const std::string args = std::string("--format ") + format + " --output ";
      ASSERT_EQ(run(args + q(a) + " analyze --catalog " + name).code, 0);
      ASSERT_EQ(run(args + q(b) + " analyze --catalog " + name).code, 0);
      EXPECT_EQ(read_file(a), read_file(b)) << name << " " << format;
    }
  }
}

}  // namespace
