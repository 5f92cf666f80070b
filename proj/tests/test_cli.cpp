#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "unimodal/cli.hpp"

using namespace unimodal;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "unimodal");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(UNIMODAL_DATA_DIR) + "/" + name; }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

fs::path temp_path(const std::string& name) { return fs::temp_directory_path() / ("unimodal_test_cli_" + name); }

} // namespace

TEST(Cli, HelpDocumentsFlagsAndDefaults) {
  const auto top = run({"--help"});
  EXPECT_EQ(top.code, 0);
  for (const char* sub : {"fit", "bench", "audit", "list-models"}) EXPECT_NE(top.out.find(sub), std::string::npos) << sub;

  const auto fit = run({"fit", "--help"});
  EXPECT_EQ(fit.code, 0);
  for (const char* flag : {"--input", "--model", "--out", "--plot", "--starts", "--seed", "--padding"}) {
    EXPECT_NE(fit.out.find(flag), std::string::npos) << flag;
  }
  EXPECT_NE(fit.out.find("0.02"), std::string::npos);
  EXPECT_NE(fit.out.find("16"), std::string::npos);

  const auto bench = run({"bench", "--help"});
  EXPECT_EQ(bench.code, 0);
  for (const char* flag : {"--trials", "--grid", "--noise", "--seed", "--out"}) EXPECT_NE(bench.out.find(flag), std::string::npos) << flag;
  EXPECT_NE(bench.out.find("101"), std::string::npos);

  const auto audit = run({"audit", "--help"});
  EXPECT_EQ(audit.code, 0);
  for (const char* flag : {"--model", "--a", "--b", "--perturbations", "--seed"}) EXPECT_NE(audit.out.find(flag), std::string::npos) << flag;
  EXPECT_NE(audit.out.find("200"), std::string::npos);
}

TEST(Cli, VersionFlag) {
  const auto r = run({"--version"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(kVersion), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"fit", "--input", data("st_matthew.csv"), "--bogus"}).code, 1);
  EXPECT_EQ(run({"fit", "--input", data("st_matthew.csv"), "--model", "gompertz"}).code, 1);
  EXPECT_EQ(run({"fit", "--model", "maxent"}).code, 1);
  EXPECT_EQ(run({"bench", "--trials", "0"}).code, 1);
}

TEST(Cli, ListModels) {
  const auto r = run({"list-models"});
  EXPECT_EQ(r.code, 0);
  for (ModelKind kind : kAllKinds) EXPECT_NE(r.out.find(kind_name(kind)), std::string::npos);
  EXPECT_NE(r.out.find("derivative"), std::string::npos);
}

TEST(Cli, FitSingleModel) {
  const auto r = run({"fit", "--model", "maxent", "--input", data("st_matthew.csv")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(r.out), 1u);
  EXPECT_EQ(r.out.rfind("maxent", 0), 0u);
  EXPECT_NE(r.out.find("rms="), std::string::npos);
  EXPECT_EQ(r.out.find("nan"), std::string::npos);
  EXPECT_EQ(r.out.find("inf"), std::string::npos);
}

TEST(Cli, FitAllWritesDocumentsAndPlot) {
  const auto json = temp_path("all.json");
  const auto svg = temp_path("all.svg");
  const auto r = run({"fit", "--model", "all", "--input", data("universe25.csv"), "--out", json.string(), "--plot", svg.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(r.out), 5u);
  const auto records = read_fits(json.string());
  ASSERT_EQ(records.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(records[i].result.model.kind(), kAllKinds[i]);
  const std::string plot = slurp(svg);
  EXPECT_EQ(std::count(plot.begin(), plot.end(), '\n') > 0, true);
  std::size_t polylines = 0;
  for (auto p = plot.find("<polyline"); p != std::string::npos; p = plot.find("<polyline", p + 1)) ++polylines;
  EXPECT_EQ(polylines, 5u);

  const auto again = run({"fit", "--model", "all", "--input", data("universe25.csv"), "--out", json.string() + ".2", "--plot",
                          svg.string() + ".2"});
  EXPECT_EQ(again.out, r.out);
  EXPECT_EQ(slurp(svg.string() + ".2"), plot);
  EXPECT_EQ(slurp(json.string() + ".2"), slurp(json));
  for (const auto& p : {json.string(), svg.string(), json.string() + ".2", svg.string() + ".2"}) fs::remove(p);
}

TEST(Cli, FitSingleWritesOneDocument) {
  const auto json = temp_path("one.json");
  const auto r = run({"fit", "--model", "Beta", "--input", data("st_matthew.csv"), "--out", json.string(), "--starts", "4"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto rec = read_fit(json.string());
  EXPECT_EQ(rec.result.model.kind(), ModelKind::Beta);
  EXPECT_EQ(rec.result.start_losses.size(), 4u);
  EXPECT_EQ(rec.transform.y_scale, 6000.0);
  fs::remove(json);
}

TEST(Cli, FitMissingFileNamesPath) {
  const auto r = run({"fit", "--model", "maxent", "--input", "missing.csv"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("missing.csv"), std::string::npos) << r.err;
}

TEST(Cli, FitAllZeroSeriesIsUsageError) {
  const auto csv = temp_path("zero.csv");
  write_text_file(csv.string(), "t,v\n0,0\n1,0\n2,0\n");
  EXPECT_EQ(run({"fit", "--input", csv.string()}).code, 1);
  fs::remove(csv);
}

TEST(Cli, AuditExamples) {
  const auto m = run({"audit", "--model", "maxent", "--a", "1", "--b", "1"});
  EXPECT_EQ(m.code, 0) << m.err;
  EXPECT_NE(m.out.find("mode      0.5\n"), std::string::npos) << m.out;
  EXPECT_NE(m.out.find("failed=0"), std::string::npos) << m.out;

  const auto b = run({"audit", "--model", "beta", "--a", "1", "--b", "1"});
  EXPECT_EQ(b.code, 0) << b.err;
  const auto h_at = b.out.find("H ");
  ASSERT_NE(h_at, std::string::npos);
  EXPECT_NEAR(std::stod(b.out.substr(h_at + 1)), 0.0, 1e-6);
  EXPECT_NE(b.out.find("unaudited"), std::string::npos);

  EXPECT_EQ(run({"audit", "--model", "maxent", "--a", "-1", "--b", "2"}).code, 1);
  EXPECT_EQ(run({"audit", "--model", "beta", "--a", "0.5", "--b", "2"}).code, 1);
  EXPECT_EQ(run({"audit", "--model", "richards", "--a", "1", "--b", "2"}).code, 1);
}

TEST(Cli, BenchWritesDeterministicTable) {
  const auto t1 = temp_path("t1.csv");
  const auto t2 = temp_path("t2.csv");
  const auto r1 = run({"bench", "--trials", "5", "--seed", "1", "--out", t1.string()});
  EXPECT_EQ(r1.code, 0) << r1.err;
  const std::string csv = slurp(t1);
  EXPECT_EQ(count_lines(csv), 26u);
  EXPECT_NE(r1.out.find("Methods"), std::string::npos);
  const auto r2 = run({"bench", "--trials", "5", "--seed", "1", "--out", t2.string()});
  EXPECT_EQ(slurp(t2), csv);
  EXPECT_EQ(r2.out, r1.out);
  fs::remove(t1);
  fs::remove(t2);
}
