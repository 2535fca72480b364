#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "susyqm/cli.hpp"

using namespace susyqm;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "susyqm_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(CliSpectrum, BoxCsv) {
  const Result r = run({"spectrum", "--model", "box", "--L", "3.141592653589793", "--points", "2001", "--levels", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("# units: hbar=1 m=1 I=1"), std::string::npos);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "E", "parity", "degeneracy", "pair", "status"}));
  const double expected[] = {0.5, 2.0, 4.5, 8.0};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(std::stod(rows[i + 1][1]) / expected[i], 1.0, 1e-4);
    EXPECT_EQ(rows[i + 1][5], "discrete");
  }
  EXPECT_EQ(rows[1][2], "even");
  EXPECT_EQ(rows[2][2], "odd");
}

TEST(CliSpectrum, RotorPairs) {
  const Result r = run({"spectrum", "--model", "rotor", "--I", "1", "--m-max", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 6u);
  const std::vector<std::string> energies{"0", "0.5", "0.5", "2", "2"};
  for (int i = 0; i < 5; ++i) EXPECT_EQ(rows[i + 1][1], energies[i]);
  EXPECT_EQ(rows[1][4], "");
  EXPECT_EQ(rows[2][4], rows[3][4]);
  EXPECT_NE(rows[2][4], "");
  EXPECT_EQ(rows[2][3], "2");
  EXPECT_NE(r.out.find("absent_at_base: even=false odd=true"), std::string::npos);
}

TEST(CliSpectrum, DeltaBoundAndReset) {
  const Result r = run({"spectrum", "--model", "delta", "--lambda", "1", "--L", "20", "--points", "8001", "--levels", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  EXPECT_EQ(rows[1][5], "bound");
  EXPECT_NEAR(std::stod(rows[1][1]), -0.5, 1e-2);
  for (std::size_t i = 2; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i][5], "continuum");
    EXPECT_GT(std::stod(rows[i][1]), 0.0);
  }
  EXPECT_NE(r.out.find("absent_at_base: even=true odd=true"), std::string::npos);

  const Result reset = run({"spectrum", "--model", "delta", "--L", "20", "--points", "8001", "--levels", "6",
                            "--zero-point-reset", "--format", "json"});
  ASSERT_EQ(reset.code, 0) << reset.err;
  EXPECT_NE(reset.err.find("zero-point reset"), std::string::npos);
  const auto j = nlohmann::json::parse(reset.out);
  EXPECT_EQ(j["levels"][0]["E"].get<double>(), 0.0);
  EXPECT_EQ(j["levels"][0]["status"], "bound");
  EXPECT_FALSE(j["absent_at_base"]["even"].get<bool>());
  EXPECT_TRUE(j["absent_at_base"]["odd"].get<bool>());
  EXPECT_TRUE(j["zero_point_reset"].get<bool>());
}

TEST(CliSpectrum, FreeNyquistArtifact) {
  const Result r = run({"spectrum", "--model", "free", "--points", "32"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 33u);
  EXPECT_EQ(rows.back()[5], "artifact");
  EXPECT_EQ(rows[1][5], "continuum");
  EXPECT_NE(r.out.find("absent_at_base: even=false odd=true"), std::string::npos);
}

TEST(CliCheck, VerdictPatterns) {
  auto verdicts = [](const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    std::vector<bool> v;
    for (int c = 1; c <= 6; ++c) v.push_back(j["verdicts"][std::to_string(c)]["satisfied"].get<bool>());
    return v;
  };
  const Result fq = run({"check", "--model", "free", "--charge", "Q"});
  ASSERT_EQ(fq.code, 0) << fq.err;
  EXPECT_EQ(verdicts(fq.out), (std::vector<bool>{true, true, true, true, false, true}));
  const Result fn = run({"check", "--model", "free", "--charge", "q"});
  EXPECT_EQ(fn.code, 0);
  EXPECT_EQ(verdicts(fn.out), std::vector<bool>(6, true));
  const Result rq = run({"check", "--model", "rotor", "--charge", "Q"});
  EXPECT_EQ(rq.code, 0);
  EXPECT_EQ(verdicts(rq.out), (std::vector<bool>{true, true, true, true, false, true}));
  const Result rn = run({"check", "--model", "rotor", "--charge", "q"});
  EXPECT_EQ(rn.code, 0);
  EXPECT_EQ(verdicts(rn.out), std::vector<bool>(6, true));
}

TEST(CliCheck, ReportFields) {
  const Result r = run({"check", "--model", "free", "--points", "64"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  for (const char* key : {"units", "ground", "pairs", "unpaired", "algebra", "verdicts", "tolerances", "passes"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["ground"]["degeneracy_count"], 1);
  EXPECT_EQ(j["unpaired"], nlohmann::json::array({63}));
  EXPECT_LE(j["algebra"]["comm_HQ"].get<double>(), 1e-12);
}

TEST(CliCheck, TighterToleranceFailsWithExit3) {
  const Result r = run({"check", "--model", "free", "--points", "64", "--tol-machine", "1e-30"});
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(nlohmann::json::parse(r.out)["passes"].get<bool>());
}

TEST(CliCheck, DirichletModelsRefused) {
  for (const char* model : {"delta", "box", "partner"}) {
    const Result r = run({"check", "--model", model});
    EXPECT_EQ(r.code, 2) << model;
    EXPECT_NE(r.err.find("dirichlet"), std::string::npos);
  }
  EXPECT_EQ(run({"check", "--model", "free", "--boundary", "dirichlet"}).code, 2);
}

TEST(CliPartner, FilesAndBlankCell) {
  const auto path = scratch("partner.csv");
  const Result r = run({"partner", "--model", "box", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto samples = csv_rows(slurp(path));
  ASSERT_EQ(samples[0], (std::vector<std::string>{"x", "W", "V_minus", "V_minus_sampled"}));
  EXPECT_EQ(samples.size(), 2002u);
  for (std::size_t i = 4; i + 3 < samples.size(); ++i) {
    const double x = std::stod(samples[i][0]);
    const double c = std::cos(x);
    EXPECT_NEAR(std::stod(samples[i][2]) * c * c, 1.0, 1e-6);
  }
  const auto spectra = csv_rows(slurp(scratch("partner_spectra.csv")));
  ASSERT_GE(spectra.size(), 4u);
  EXPECT_EQ(spectra[0], (std::vector<std::string>{"n", "E_box", "E_partner"}));
  EXPECT_EQ(spectra[1][0], "1");
  EXPECT_EQ(spectra[1][2], "");
  EXPECT_NEAR(std::stod(spectra[2][2]), 2.0, 1e-4 * 2.0);
  EXPECT_NEAR(std::stod(spectra[2][1]), std::stod(spectra[2][2]), 1e-4 * 2.0);
}

TEST(CliPartner, UnsupportedModel) {
  const Result r = run({"partner", "--model", "delta"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("box"), std::string::npos);
}

TEST(CliScan, PassAndFail) {
  const Result ok = run({"scan", "--model", "box", "--L-values", "3.141592653589793,6.283185307179586,12.566370614359172"});
  ASSERT_EQ(ok.code, 0) << ok.err;
  const auto rows = csv_rows(ok.out);
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_NEAR(std::stod(rows[i][6]), 4.9348, 1e-3 * 4.9348);
  EXPECT_NE(ok.out.find("E1_L2_constant=true"), std::string::npos);
  const Result coarse = run({"scan", "--model", "box", "--L-values", "3.14,6.28", "--points-per-length", "3"});
  EXPECT_EQ(coarse.code, 3);
  EXPECT_EQ(run({"scan", "--model", "box", "--L-values", "3.14"}).code, 2);
}

TEST(CliEq5, ExitCodes) {
  const Result r = run({"eq5", "--model", "free", "--points", "64", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["rows"].size(), 33u);
  EXPECT_LE(j["max_substituted"].get<double>(), 1e-12);
  const Result bad = run({"eq5", "--model", "free", "--k-list", "0.5"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("allowed"), std::string::npos);
  EXPECT_EQ(run({"eq5", "--model", "box"}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"spectrum"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--model", "nope"}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--model", "box", "--points", "abc"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--model", "box", "--L", "-1"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--model", "free", "--points", "511"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--model", "delta", "--points", "40000"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--model", "box", "--tol-pair", "-1"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--model", "box", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--model", "box", "--out", "/nonexistent_dir/x.csv"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, DeterministicBytes) {
  const std::vector<std::string> args{"spectrum", "--model", "partner", "--levels", "5"};
  EXPECT_EQ(run(args).out, run(args).out);
  const std::vector<std::string> check{"check", "--model", "rotor", "--charge", "q"};
  EXPECT_EQ(run(check).out, run(check).out);
}
