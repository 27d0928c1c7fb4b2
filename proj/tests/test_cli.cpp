#include <gtest/gtest.h>
#include <unistd.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <sstream>
#include <string>

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string("\"") + QCOMP_CLI_PATH + "\" " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

nlohmann::json run_json(const std::string& args) {
  const CliRun r = run(args);
  EXPECT_EQ(r.status, 0) << args;
  return nlohmann::json::parse(r.out);
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(Cli, CompareReport) {
  const auto j = run_json("compare --alpha 1,0 --beta -1,0");
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["command"], "compare");
  EXPECT_TRUE(j.contains("seed"));
  EXPECT_NEAR(j["summary"]["p_succ"].get<double>(), 0.8647, 1e-4);
  EXPECT_NEAR(j["summary"]["p_asymm"].get<double>(), 0.4908, 1e-4);
  EXPECT_TRUE(j["summary"]["coherent_dominates"].get<bool>());
}

TEST(Cli, CompareMonteCarlo) {
  const auto j = run_json("--seed 5 compare --alpha=1,0 --beta=-1,0 --trials 100000");
  EXPECT_EQ(j["seed"], 5);
  EXPECT_LE(j["summary"]["monte_carlo"]["sigma_distance"].get<double>(), 3.0);
}

TEST(Cli, Figure2Rows) {
  const CliRun r = run("figure2 --d-max 3 --step 0.5");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows[0], (std::vector<std::string>{"d", "p_succ", "p_asymm"}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"0", "0", "0"}));
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[5][0], "2");
  EXPECT_NEAR(std::stod(rows[5][1]), 0.8647, 1e-4);
  const auto tail = csv_rows(run("figure2 --d-max 12 --step 12").out);
  EXPECT_NEAR(std::stod(tail[2][1]), 1.0, 1e-12);
  EXPECT_NEAR(std::stod(tail[2][2]), 0.5, 1e-12);
}

TEST(Cli, Figure4Rows) {
  const CliRun r = run("figure4 --N 2 4 --step 5");
  ASSERT_EQ(r.status, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows[0], (std::vector<std::string>{"alpha_sq", "N", "S_bits"}));
  double last2 = 0, last4 = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double s = std::stod(rows[i][2]);
    if (rows[i][0] == "0") EXPECT_EQ(s, 0.0);
    if (rows[i][0] == "25") (rows[i][1] == "2" ? last2 : last4) = s;
  }
  EXPECT_NEAR(last2, 1.0, 0.05);
  EXPECT_GT(last4, last2);
}

TEST(Cli, SvgFromTable) {
  const CliRun r = run("--format svg figure4 --N 2 3 --step 1");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("<svg", 0), 0u);
  EXPECT_NE(r.out.find("<polyline"), std::string::npos);
  EXPECT_NE(r.out.find("log2 3"), std::string::npos);
  EXPECT_NE(r.out.find("</svg>"), std::string::npos);
}

TEST(Cli, EntropyExample) {
  const auto rows = csv_rows(run("lockkey entropy --N 4 --alpha-sq 25").out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(std::stod(rows[1][2]), 2.0, 0.05);
}

TEST(Cli, PkdOverlapHalf) {
  const auto j = run_json(
      "pkd --scheme center --adversary alice-overlap-half --M 1 --trials 100000 "
      "--no-transcript");
  EXPECT_NEAR(j["summary"]["disagreement_rate"].get<double>(), 0.5, 3 * 0.00159);
}

TEST(Cli, PkdTranscriptAndCsv) {
  const auto j = run_json("pkd --scheme distributed --adversary charlie-vacuum --M 2 --trials 3");
  const auto& ev = j["summary"]["transcript"];
  ASSERT_FALSE(ev.empty());
  bool tampered = false;
  for (const auto& e : ev) {
    EXPECT_TRUE(e.contains("party"));
    EXPECT_TRUE(e.contains("action"));
    EXPECT_TRUE(e.contains("position"));
    EXPECT_TRUE(e.contains("amplitudes"));
    EXPECT_TRUE(e.contains("counts"));
    tampered |= e.value("tampered", false);
  }
  EXPECT_TRUE(tampered);
  const auto rows = csv_rows(run("--format csv pkd --trials 4").out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"trial", "e_bob", "e_charlie", "verdict_bob",
                                               "verdict_charlie", "clicks"}));
  EXPECT_EQ(rows[1][3], "accept");
}

TEST(Cli, OutputFileMatchesStdout) {
  const auto path = std::filesystem::temp_directory_path() /
                    ("qcomp_cli_test_" + std::to_string(::getpid()) + ".csv");
  const std::string args = "lockkey attack-scan --amp 2 --step 0.5";
  ASSERT_EQ(run("--out \"" + path.string() + "\" " + args).status, 0);
  std::ifstream f(path, std::ios::binary);
  const std::string file{std::istreambuf_iterator<char>(f), {}};
  EXPECT_EQ(file, run(args).out);
  std::filesystem::remove(path);
}

TEST(Cli, SameSeedSameBytes) {
  for (const char* args : {"lockkey simulate --attack vacuum --trials 20000",
                           "--format csv pkd --scheme distributed --adversary charlie-flip",
                           "multiport --amp 1 --amp 0,1 --trials 10000"}) {
    EXPECT_EQ(run(std::string("--seed 9 ") + args).out, run(std::string("--seed 9 ") + args).out);
  }
  EXPECT_NE(run("--seed 1 lockkey simulate --trials 2000").out,
            run("--seed 2 lockkey simulate --trials 2000").out);
}

TEST(Cli, ValidationErrorsExitWithTwo) {
  EXPECT_EQ(run("compare --alpha 1,0").status, 2);
  EXPECT_EQ(run("compare --alpha x,0 --beta 1").status, 2);
  EXPECT_EQ(run("compare --alpha 1,0 --beta 1 --bogus").status, 2);
  EXPECT_EQ(run("figure2 --d-max -1").status, 2);
  EXPECT_EQ(run("figure4 --N 1").status, 2);
  EXPECT_EQ(run("multiport --amp 1").status, 2);
  EXPECT_EQ(run("pkd --s 0.01").status, 2);
  EXPECT_EQ(run("pkd --scheme center --adversary charlie-flip").status, 2);
  EXPECT_EQ(run("oracle --case squeezed --xi1 0.6").status, 2);
  EXPECT_EQ(run("--format csv oracle --case bs-coherent --cutoff 0").status, 2);
  EXPECT_EQ(run("--format xml figure2").status, 2);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("--help").status, 0);
}
