#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(BESSELEXP_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, {}};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "besselexp_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, SampleIsDeterministic) {
  const auto a = run("sample --eta 10 --beta0 0.5 --n 5 --seed 42");
  const auto b = run("sample --eta 10 --beta0 0.5 --n 5 --seed 42");
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 5);
  EXPECT_NE(a.out, run("sample --eta 10 --beta0 0.5 --n 5 --seed 43").out);
}

TEST(Cli, PlainAndSqueezedAgree) {
  EXPECT_EQ(run("sample --eta 3 --beta0 -0.2 --n 200 --seed 9 --method plain").out,
            run("sample --eta 3 --beta0 -0.2 --n 200 --seed 9 --method squeezed").out);
}

TEST(Cli, JsonlCarriesStatsTrailer) {
  const auto r = run("sample --eta 1 --beta0 0 --n 3 --seed 1 --format jsonl");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("{\"kappa\":"), std::string::npos);
  EXPECT_NE(r.out.find("{\"stats\":{\"proposals\":"), std::string::npos);
}

TEST(Cli, TunePrintsKappa0) {
  const auto r = run("tune --eta 1 --beta0 0");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("kappa0 = 1.652591"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("expected_acceptance"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("sample --eta 1 --beta0 -1").status, 2);
  EXPECT_EQ(run("sample --method fancy").status, 2);
  EXPECT_EQ(run("gibbs --data /nonexistent/file").status, 2);
  EXPECT_EQ(run("efficiency --etas 1,x").status, 2);
}

TEST(Cli, OutputFileIsWrittenWhole) {
  const auto path = scratch("draws.csv");
  fs::remove(path);
  EXPECT_EQ(run("sample --eta 2 --beta0 0 --n 100 --seed 3 --output " + path.string()).status, 0);
  EXPECT_EQ(slurp(path), run("sample --eta 2 --beta0 0 --n 100 --seed 3").out);
  EXPECT_FALSE(fs::exists(path.string() + ".tmp"));
}

TEST(Cli, GibbsReadsDegrees) {
  const auto data = scratch("angles.txt");
  std::ofstream(data) << "# wind directions\n10\n20\n-5\n35\n\n15\n";
  const auto r = run("gibbs --data " + data.string() + " --degrees --iters 20 --burn-in 5 --seed 2");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("mu,kappa\n", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 16);
}

TEST(Cli, EfficiencyCsv) {
  const auto r = run("efficiency --etas 10 --grid 10");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("beta0,eff_approx,eff_oracle\n", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 11);
  const auto dir = scratch("curves");
  fs::remove_all(dir);
  EXPECT_EQ(run("efficiency --etas 1,100 --grid 10 --output-dir " + dir.string()).status, 0);
  EXPECT_TRUE(fs::exists(dir / "eff_eta1.csv"));
  EXPECT_TRUE(fs::exists(dir / "eff_eta100.csv"));
}

TEST(Cli, VerifyPasses) {
  const auto r = run("verify --grid 50 --n 20000 --seed 7");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("verdict: A = sqrt(beta0^2 - 1) normalizes exp(-beta0 k) * I0(k)"), std::string::npos);
}

TEST(Cli, BenchReportsBothLoops) {
  const auto r = run("bench --eta 10 --method both --seconds 0.2 --random-beta0");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("plain:"), std::string::npos);
  EXPECT_NE(r.out.find("squeezed:"), std::string::npos);
}
