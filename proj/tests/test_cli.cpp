#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bernphase/cli.hpp"

using namespace bernphase;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::filesystem::path kGolden = BERNPHASE_GOLDEN_DIR;
const std::filesystem::path kSamples = BERNPHASE_SAMPLES_DIR;

struct GoldenCase {
  const char* name;
  std::vector<std::string> args;
  int code;
};

const std::vector<GoldenCase>& golden_cases() {
  static const std::vector<GoldenCase> cases{
      {"hellinger", {"hellinger", "--mu", "0.9,0.1", "--nu", "0.1,0.9"}, 0},
      {"mix", {"mix", "--nu", "0.5,0.5", "--mu", "0.9,0.1", "--t", "0.5"}, 0},
      {"chernoff", {"chernoff", "--mu0", "0.7,0.3", "--mu1", "0.3,0.7"}, 0},
      {"range_group_lattice", {"range-group", "--mu0", "0.3333333333333333,0.6666666666666667", "--mu1",
                               "0.6666666666666667,0.3333333333333333"}, 0},
      {"poincare", {"poincare", "--tree", "cayley:2", "--depth", "8"}, 0},
      {"classify", {"classify", "--tree", "regular:3", "--mu0", "0.9,0.1", "--mu1", "0.1,0.9"}, 0},
      {"krieger_dense", {"krieger", "--mu0", "0.5,0.3,0.2", "--mu1", "0.2,0.5,0.3", "--tree", "regular:3"}, 0},
      {"spectral", {"spectral", "--d", "2", "--affinity", "0.9"}, 0},
      {"block_length_impossible", {"block-length", "--mu0", "0.9,0.1", "--mu1", "0.1,0.9", "--delta", "0.693147",
                                   "--mmax", "64"}, 3},
      {"percolation", {"percolation", "--tree", "regular:3", "--mu0", "0.7,0.3", "--mu1", "0.3,0.7", "--M", "1",
                       "--mc-trials", "500", "--mc-depth", "6", "--threads", "2"}, 0},
      {"martingale", {"simulate", "martingale", "--tree", "regular:3", "--mu0", "0.7,0.3", "--mu1", "0.3,0.7",
                      "--depth", "3", "--trials", "200", "--seed", "5", "--threads", "3"}, 0},
      {"coupling", {"simulate", "coupling", "--nu", "0.5,0.5", "--mu", "0.9,0.1", "--t", "0.5", "--samples",
                    "5000"}, 0},
  };
  return cases;
}

}  // namespace

TEST(Cli, GoldenOutputs) {
  const bool regenerate = std::getenv("BERNPHASE_REGENERATE_GOLDEN") != nullptr;
  for (const auto& c : golden_cases()) {
    SCOPED_TRACE(c.name);
    const auto r = invoke(c.args);
    EXPECT_EQ(r.code, c.code) << r.err;
    const auto path = kGolden / (std::string(c.name) + ".json");
    if (regenerate) {
      std::ofstream(path, std::ios::binary) << r.out;
      continue;
    }
    EXPECT_EQ(r.out, read_file(path));
    // every record re-parses
    Json parsed;
    EXPECT_NO_THROW(parsed = Json::parse(r.out));
  }
}

TEST(Cli, DocumentedExamples) {
  auto h = Json::parse(invoke({"hellinger", "--mu", "0.9,0.1", "--nu", "0.1,0.9"}).out);
  EXPECT_NEAR(h["h2"].get<double>(), 0.4, 1e-15);
  EXPECT_NEAR(h["affinity"].get<double>(), 0.6, 1e-15);
  auto c = Json::parse(invoke({"classify", "--tree", "regular:3", "--mu0", "0.9,0.1", "--mu1", "0.1,0.9"}).out);
  EXPECT_EQ(c["phase"], "Dissipative");
  EXPECT_EQ(c["label"], "theorem-certified");
  const auto b = invoke({"block-length", "--mu0", "0.9,0.1", "--mu1", "0.1,0.9", "--delta", "0.693147", "--mmax", "64"});
  EXPECT_EQ(b.code, 3);
  EXPECT_EQ(Json::parse(b.out)["reason"], "bound-impossible");
}

TEST(Cli, SeventeenDigitsRoundTrip) {
  const auto out = invoke({"chernoff", "--mu0", "0.7,0.3", "--mu1", "0.3,0.7"}).out;
  const auto j = Json::parse(out);
  const double v = j["distribution"]["atoms"][0][0].get<double>();
  EXPECT_EQ(v, -2 * std::log(7.0 / 3.0));
  EXPECT_NE(out.find(format_real(v)), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({"hellinger", "--mu", "0.9,0.2", "--nu", "0.5,0.5"}).code, 2);
  EXPECT_EQ(invoke({"hellinger", "--mu", "0.9,abc", "--nu", "0.5,0.5"}).code, 2);
  EXPECT_EQ(invoke({"classify", "--mu0", "0.9,0.1", "--mu1", "0.1,0.9"}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
  EXPECT_EQ(invoke({"simulate", "recurrence", "--tree", "cayley:4", "--mu0", "0.9,0.1", "--mu1", "0.1,0.9",
                    "--depth", "12", "--trials", "30"}).code,
            4);
  EXPECT_EQ(invoke({"chernoff", "--mu0", "0.1,0.2,0.3,0.4", "--mu1", "0.4,0.3,0.2,0.1", "--atom-cap", "3"}).code, 4);
  const auto scan = invoke({"phase-scan", "--delta", "1.0986122886681098", "--nu", "0.5,0.5", "--mu0", "0.6,0.4",
                            "--mu1", "0.4,0.6", "--grid", "32"});
  EXPECT_EQ(scan.code, 3);
}

TEST(Cli, UsageErrorNamesFlag) {
  const auto r = invoke({"hellinger", "--mu", "0.9,abc", "--nu", "0.5,0.5"});
  EXPECT_NE(r.err.find("--mu"), std::string::npos);
  const auto t = invoke({"classify", "--tree", "binary:3", "--affinity", "0.5"});
  EXPECT_EQ(t.code, 2);
  EXPECT_NE(t.err.find("--tree"), std::string::npos);
}

TEST(Cli, MeasureFilesAndInlinePrecedence) {
  const auto file = (kSamples / "far_mu0.json").string();
  const auto a = invoke({"hellinger", "--mu-file", file, "--nu", "0.1,0.9"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NEAR(Json::parse(a.out)["affinity"].get<double>(), 0.6, 1e-15);
  const auto b = invoke({"hellinger", "--mu", "0.1,0.9", "--mu-file", file, "--nu", "0.1,0.9"});
  EXPECT_EQ(b.code, 0);
  EXPECT_NE(b.err.find("warning"), std::string::npos);
  EXPECT_NEAR(Json::parse(b.out)["h2"].get<double>(), 0.0, 1e-15);
}

TEST(Cli, CsvHeaders) {
  const auto scan = invoke({"phase-scan", "--tree", "cayley:2", "--nu", "0.5,0.5", "--mu0", "0.99,0.01", "--mu1",
                            "0.01,0.99", "--grid", "16", "--format", "csv"});
  EXPECT_EQ(scan.code, 0);
  EXPECT_EQ(scan.out.substr(0, scan.out.find('\n')), "t,affinity,threshold,phase");
  const auto rec = invoke({"simulate", "recurrence", "--tree", "regular:3", "--mu0", "0.7,0.3", "--mu1", "0.3,0.7",
                           "--depth", "4", "--trials", "30", "--format", "csv"});
  EXPECT_EQ(rec.code, 0);
  EXPECT_EQ(rec.out.substr(0, rec.out.find('\n')), "trial,depth,log_T");
  EXPECT_EQ(std::count(rec.out.begin(), rec.out.end(), '\n'), 1 + 30 * 5);
}

TEST(Cli, ReproducibleAcrossRunsAndThreads) {
  const std::vector<std::vector<std::string>> runs{
      {"simulate", "recurrence", "--tree", "regular:3", "--mu0", "0.7,0.3", "--mu1", "0.3,0.7", "--depth", "6",
       "--trials", "40"},
      {"simulate", "shift", "--t", "0.5", "--window", "64", "--trials", "30"},
      {"percolation", "--tree", "regular:3", "--mu0", "0.7,0.3", "--mu1", "0.3,0.7", "--mc-trials", "300",
       "--mc-depth", "5"},
  };
  for (auto args : runs) {
    const auto base = invoke(args).out;
    EXPECT_EQ(invoke(args).out, base);
    auto one = args, many = args;
    one.insert(one.end(), {"--threads", "1"});
    many.insert(many.end(), {"--threads", "8"});
    EXPECT_EQ(invoke(one).out, base);
    EXPECT_EQ(invoke(many).out, base);
  }
}

TEST(Cli, OutFlagWritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "bernphase_cli_out.json";
  std::filesystem::remove(path);
  const auto r = invoke({"--out", path.string(), "spectral", "--tree", "cayley:3", "--affinity", "0.5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(Json::parse(read_file(path))["regime"], "WeaklyMixingNonamenable");
  std::filesystem::remove(path);
}
