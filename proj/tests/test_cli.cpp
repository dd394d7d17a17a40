#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "delsarte/cli.hpp"

using namespace delsarte::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("delsarte_cli_" + std::to_string(::getpid()) + "_" +
                                       ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  fs::path write(const std::string& name, const std::string& text) {
    const auto p = dir / name;
    std::ofstream(p) << text;
    return p;
  }
  fs::path dir;
};

const std::string kHamming = std::string(DELSARTE_DATA_DIR) + "/hamming74.txt";

}  // namespace

TEST(Cli, KrawtchoukExample) {
  const auto r = run({"poly", "kraw", "--n", "7", "--k", "2", "--x", "0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "21\n");
}

TEST(Cli, LpHammingJsonCarriesCertificate) {
  const auto r = run({"lp", "hamming", "--n", "8", "--d", "4", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["rows"][0][2], "16");
  EXPECT_EQ(j["rows"][0][3], 16.0);
  EXPECT_EQ(j["rows"][0][5], "verified");
  const auto& sol = j["details"]["solutions"][0];
  EXPECT_EQ(sol["status"], "optimal");
  EXPECT_FALSE(sol["dual"].empty());
  EXPECT_EQ(sol["distribution"].size(), 9u);
}

TEST(Cli, RationalsPrintedWithFloatColumn) {
  const auto r = run({"lp", "hamming", "--n", "9", "--d", "3", "--format", "csv"});
  ASSERT_EQ(r.code, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[0], "n,d,bound,bound_float,pivots,certificate");
  EXPECT_NE(ls[1].find(",128/3,42.6666666667,"), std::string::npos);
}

TEST_F(TempDir, CurveSweepHas99RowsAndManifest) {
  const auto out = dir / "curve.csv";
  const auto r = run({"curve", "rdelta", "--method", "mrrw", "--r", "0.01:0.99:0.01", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto ls = lines(slurp(out));
  ASSERT_EQ(ls.size(), 100u);
  EXPECT_EQ(ls[0].substr(0, 8), "R,value,");
  EXPECT_EQ(ls[1].substr(0, 5), "0.01,");
  EXPECT_EQ(ls[99].substr(0, 5), "0.99,");
  const auto m = json::parse(slurp(out.string() + ".manifest.json"));
  EXPECT_EQ(m["tool"], "delsarte");
  EXPECT_EQ(m["version"], kVersion);
  EXPECT_EQ(m["command"][1], "rdelta");
  EXPECT_EQ(m["tolerance"], 1e-9);
  EXPECT_EQ(m["format"], "csv");
  EXPECT_EQ(m["parameters"]["method"], "mrrw");
  EXPECT_TRUE(m["parameters"].contains("grid"));
  EXPECT_EQ(m["output"], fs::absolute(out).string());
  EXPECT_EQ(m["timestamp"].get<std::string>().size(), 20u);
}

TEST_F(TempDir, ReplayReproducesAndDetectsTampering) {
  const auto out = dir / "g.csv";
  ASSERT_EQ(run({"--jobs", "3", "reliability", "gaussian", "--r", "0.2:1.0:0.2", "--a", "4", "--out", out.string()}).code, 0);
  const std::string first = slurp(out);
  const auto manifest = out.string() + ".manifest.json";
  auto r = run({"replay", "--manifest", manifest});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, first);
  EXPECT_NE(r.err.find("identical"), std::string::npos);
  std::ofstream(out, std::ios::app) << "tampered\n";
  r = run({"replay", "--manifest", manifest, "--out", (dir / "again.csv").string()});
  EXPECT_EQ(r.code, kMismatch);
  EXPECT_EQ(slurp(dir / "again.csv"), first);
  fs::remove(out);
  EXPECT_EQ(run({"replay", "--manifest", manifest}).code, 0);
  EXPECT_EQ(run({"replay"}).code, kUsage);
  EXPECT_EQ(run({"replay", "--manifest", write("bad.json", "{not json").string()}).code, kUsage);
}

TEST_F(TempDir, ReplayForcesRecordedTolerance) {
  const auto out = dir / "s.csv";
  ASSERT_EQ(run({"--tol", "1e-6", "spectrum", "sphere", "--r", "0.5", "--gamma", "0.1", "--x", "0.6:0.9:0.1",
                 "--out", out.string()})
                .code,
            0);
  const auto m = json::parse(slurp(out.string() + ".manifest.json"));
  EXPECT_EQ(m["tolerance"], 1e-6);
  EXPECT_EQ(run({"replay", "--manifest", out.string() + ".manifest.json"}).code, 0);
}

TEST(Cli, JobsDoNotChangeOutput) {
  const std::vector<std::string> base{"curve", "rdelta", "--method", "mrrw", "--r", "0.05:0.95:0.05", "--format", "csv"};
  auto with_jobs = [&](const std::string& j) {
    auto a = base;
    a.insert(a.begin(), {"--jobs", j});
    return run(a).out;
  };
  const auto one = with_jobs("1");
  EXPECT_EQ(one, with_jobs("4"));
  EXPECT_EQ(one, with_jobs("7"));
  const std::vector<std::string> det{"reliability", "detect", "--r", "0:1:0.1", "--p", "0.05", "--format", "csv"};
  auto d1 = det, d4 = det;
  d4.insert(d4.begin(), {"--jobs", "4"});
  EXPECT_EQ(run(d1).out, run(d4).out);
}

TEST(Cli, CsvJsonMirrorAgreeTo12Digits) {
  const std::vector<std::string> a{"curve", "rdelta", "--method", "kl", "--r", "0.1:3:0.1"};
  auto csv = a, js = a;
  csv.insert(csv.end(), {"--format", "csv"});
  js.insert(js.end(), {"--format", "json"});
  const auto c = lines(run(csv).out);
  const auto j = json::parse(run(js).out);
  ASSERT_EQ(c.size(), j["rows"].size() + 1);
  for (std::size_t i = 0; i < j["rows"].size(); ++i) {
    std::istringstream is(c[i + 1]);
    std::string field;
    for (std::size_t k = 0; std::getline(is, field, ','); ++k) {
      const double x = std::stod(field), y = j["rows"][i][k].get<double>();
      EXPECT_LE(std::fabs(x - y), 5e-12 * std::max(1.0, std::fabs(y))) << i << "," << k;
    }
  }
}

TEST_F(TempDir, FormatFollowsOutExtension) {
  ASSERT_EQ(run({"curve", "rdelta", "--method", "gv", "--r", "0.1,0.2", "--out", (dir / "a.json").string()}).code, 0);
  EXPECT_EQ(json::parse(slurp(dir / "a.json"))["rows"].size(), 2u);
  ASSERT_EQ(run({"curve", "rdelta", "--method", "gv", "--r", "0.1,0.2", "--format", "table", "--out",
                 (dir / "b.csv").string()})
                .code,
            0);
  EXPECT_EQ(slurp(dir / "b.csv").find(','), std::string::npos);
}

TEST(Cli, TableFormatPrintsScalar) {
  EXPECT_EQ(run({"curve", "rdelta", "--method", "gv", "--r", "0"}).out, "0.5\n");
  const auto r = run({"curve", "rdelta", "--method", "gv", "--r", "0,1"});
  EXPECT_EQ(lines(r.out).size(), 3u);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, kUsage);
  EXPECT_EQ(run({"bogus"}).code, kUsage);
  EXPECT_EQ(run({"poly"}).code, kUsage);
  EXPECT_EQ(run({"poly", "kraw", "--n", "7", "--k", "2", "--x", "0", "--bogus", "1"}).code, kUsage);
  EXPECT_EQ(run({"poly", "kraw", "--n", "7", "--k", "2"}).code, kUsage);
  EXPECT_EQ(run({"poly", "kraw", "--n", "seven", "--k", "2", "--x", "0"}).code, kUsage);
  EXPECT_EQ(run({"--format", "xml", "poly", "kraw", "--n", "7", "--k", "2", "--x", "0"}).code, kUsage);
  EXPECT_EQ(run({"--jobs", "0", "poly", "kraw", "--n", "7", "--k", "2", "--x", "0"}).code, kUsage);
  EXPECT_EQ(run({"curve", "rdelta", "--r", "0.5:0.1:0.1"}).code, kUsage);
  EXPECT_EQ(run({"poly", "kraw", "--n", "7", "--k", "9", "--x", "0"}).code, kDomain);
  EXPECT_EQ(run({"curve", "rdelta", "--method", "gv", "--r", "1.5"}).code, kDomain);
  EXPECT_EQ(run({"reliability", "bsc", "--r", "0.3", "--p", "0.7"}).code, kDomain);
  EXPECT_EQ(run({"curve", "rdelta", "--r", "0:1:1e-7"}).code, kResource);
  EXPECT_EQ(run({"code", "info", "--file", "/nonexistent/code.txt"}).code, kResource);
  EXPECT_EQ(run({"lp", "solve", "--file", "/nonexistent/x.lp"}).code, kResource);
  const auto v = run({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.out, std::string("delsarte ") + kVersion + "\n");
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_NE(run({"--help"}).out.find("reliability"), std::string::npos);
}

TEST(Cli, ToleranceFromEnvironment) {
  ::setenv("DELSARTE_TOL", "nope", 1);
  EXPECT_EQ(run({"curve", "rdelta", "--method", "gv", "--r", "0.5"}).code, kUsage);
  ::setenv("DELSARTE_TOL", "1e-7", 1);
  EXPECT_DOUBLE_EQ(default_tolerance(), 1e-7);
  ::unsetenv("DELSARTE_TOL");
  EXPECT_DOUBLE_EQ(default_tolerance(), delsarte::kDefaultTolerance);
}

TEST_F(TempDir, IngestExamples) {
  auto r = run({"code", "info", "--file", write("a.txt", "000\n111\n").string(), "--format", "json"});
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["details"]["n"], 3);
  EXPECT_EQ(j["details"]["M"], 2);
  r = run({"code", "info", "--file", write("b.txt", "01\n011\n").string()});
  EXPECT_EQ(r.code, kDomain);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  EXPECT_NE(r.err.find("ragged"), std::string::npos);
  r = run({"code", "info", "--file", write("c.txt", "01\n10\n01\n").string()});
  EXPECT_EQ(r.code, kDomain);
  EXPECT_NE(r.err.find("line 3"), std::string::npos);
  EXPECT_NE(r.err.find("duplicate"), std::string::npos);
  r = run({"code", "info", "--file", write("d.txt", "0x1\n").string()});
  EXPECT_EQ(r.code, kDomain);
  EXPECT_NE(r.err.find("line 1"), std::string::npos);
  r = run({"code", "info", "--file", kHamming, "--format", "json"});
  ASSERT_EQ(r.code, 0);
  j = json::parse(r.out);
  EXPECT_EQ(j["details"]["n"], 7);
  EXPECT_EQ(j["details"]["M"], 16);
  EXPECT_EQ(j["details"]["minimum_distance"], 3);
  const std::vector<std::string> dist{"1", "0", "0", "7", "7", "0", "0", "1"};
  const std::vector<std::string> dual{"1", "0", "0", "0", "7", "0", "0", "0"};
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(j["rows"][i][1], dist[i]);
    EXPECT_EQ(j["rows"][i][3], dual[i]);
  }
}

TEST(Cli, OracleAndPue) {
  EXPECT_EQ(run({"oracle", "maxcode", "--n", "6", "--d", "3"}).out, "8\n");
  const auto r = run({"code", "pue", "--file", kHamming, "--p", "0.1"});
  ASSERT_EQ(r.code, 0);
  // 7 p^3 q^4 + 7 p^4 q^3 + p^7.
  const double p = 0.1, q = 0.9;
  EXPECT_NEAR(std::stod(r.out), 7 * std::pow(p, 3) * std::pow(q, 4) + 7 * std::pow(p, 4) * std::pow(q, 3) + std::pow(p, 7),
              1e-12);
}

TEST_F(TempDir, LpFileSolve) {
  const auto f = write("t.lp", "maximize 1 1\n1 2 <= 4\n3 1 <= 6\n");
  const auto r = run({"lp", "solve", "--file", f.string(), "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"14/5\""), std::string::npos);
  const auto bad = run({"lp", "solve", "--file", write("u.lp", "maximize 1 1\n1 x <= 4\n").string()});
  EXPECT_EQ(bad.code, kDomain);
  EXPECT_NE(bad.err.find("line 2"), std::string::npos);
}

TEST(Cli, ParseSweep) {
  EXPECT_EQ(parse_sweep("0.01:0.99:0.01").size(), 99u);
  EXPECT_EQ(parse_sweep("0:1:0.25").size(), 5u);
  EXPECT_EQ(parse_sweep("0:1:0.3").size(), 4u);
  EXPECT_EQ(parse_sweep("1,2,3").size(), 3u);
  EXPECT_THROW(parse_sweep("1:2"), UsageError);
  EXPECT_THROW(parse_sweep("1:2:0"), UsageError);
  EXPECT_THROW(parse_sweep("a"), UsageError);
  EXPECT_THROW(parse_sweep("1,,2"), UsageError);
  EXPECT_EQ(parse_rational("0.125"), delsarte::Rational(1, 8));
  EXPECT_EQ(parse_rational("-3/6"), delsarte::Rational(-1, 2));
  EXPECT_THROW(parse_rational("1/0"), UsageError);
}
