#include "minl_cli/app.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "minl/nonlocality.hpp"
#include "minl_cli/state_file.hpp"
#include "minl_cli/suites.hpp"
#include "test_support.hpp"

namespace minl::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "minl");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("minl_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  // Splits a CSV body (after the header) into rows of fields.
  static std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::vector<std::string> fields;
      std::stringstream ls(line);
      std::string f;
      while (std::getline(ls, f, ',')) fields.push_back(f);
      if (!line.empty() && line.back() == ',') fields.emplace_back();
      rows.push_back(fields);
    }
    return rows;
  }

  fs::path dir_;
};

TEST_F(Cli, BellStateCompute) {
  const std::string state = path("phi.json");
  ASSERT_EQ(invoke({"gen", "bell-diagonal", "1", "-1", "1", "--out", state}).code, kOk);
  EXPECT_LT(testing::max_abs_diff(read_state_file(state).matrix(), testing::phi_plus_matrix()), 1e-15);

  const Result r = invoke({"compute", "--state", state, "--measure", "re", "--format", "json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_DOUBLE_EQ(doc["n_re"]["value"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(doc["s_b"].get<double>(), 1.0);
  EXPECT_TRUE(doc["n_geo"].is_null());
}

TEST_F(Cli, ProductStateComputesZero) {
  const std::string state = path("prod.json");
  ASSERT_EQ(invoke({"gen", "product", "--dims", "2x3", "--seed", "5", "--out", state}).code, kOk);
  const Result r = invoke({"compute", "--state", state, "--format", "json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_LE(std::abs(doc["n_re"]["value"].get<double>()), 1e-8);
  EXPECT_LE(std::abs(doc["n_geo"]["value"].get<double>()), 1e-8);
}

TEST_F(Cli, RoundTripReproducesLibraryValues) {
  const std::string state = path("mixed.json");
  ASSERT_EQ(invoke({"gen", "random-mixed", "--dims", "2x2", "--rank", "3", "--seed", "11", "--out",
                    state})
                .code,
            kOk);
  const DensityMatrix direct = random_density(Dims{2, 2}, 3, 11);
  const DensityMatrix loaded = read_state_file(state);
  EXPECT_EQ(loaded.matrix(), direct.matrix());
  EXPECT_EQ(loaded.dims(), direct.dims());

  const Result r = invoke({"compute", "--state", state, "--format", "json", "--restarts", "4"});
  ASSERT_EQ(r.code, kOk) << r.err;
  OptimizerConfig cfg;
  cfg.restarts = 4;
  const double expected = n_re(direct, cfg).value;
  EXPECT_NEAR(json::parse(r.out)["n_re"]["value"].get<double>(), expected, 1e-11);
}

TEST_F(Cli, GenIsDeterministic) {
  const Result a = invoke({"gen", "random-mixed", "--dims", "4", "--rank", "2", "--seed", "7"});
  const Result b = invoke({"gen", "random-mixed", "--dims", "4", "--rank", "2", "--seed", "7"});
  ASSERT_EQ(a.code, kOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, invoke({"gen", "random-mixed", "--dims", "4", "--rank", "2", "--seed", "8"}).out);
}

TEST_F(Cli, ValidationFailuresExitTwo) {
  const std::string bad_trace =
      write("trace.json", R"({"dims":[2,2],"matrix":[[[0.49,0],[0,0],[0,0],[0,0]],
        [[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0.49,0]]]})");
  Result r = invoke({"compute", "--state", bad_trace});
  EXPECT_EQ(r.code, kInvalidInput);
  EXPECT_NE(r.err.find("trace invariant"), std::string::npos) << r.err;

  EXPECT_EQ(invoke({"compute", "--state", write("junk.json", "{not json")}).code, kInvalidInput);
  EXPECT_EQ(invoke({"compute", "--state", path("missing.json")}).code, kInvalidInput);
  EXPECT_EQ(invoke({"gen", "bell-diagonal", "1", "0.4", "0.4"}).code, kInvalidInput);
  EXPECT_EQ(invoke({"gen", "werner"}).code, kInvalidInput);
  EXPECT_EQ(invoke({"compute", "--state", bad_trace, "--measure", "neither"}).code, kInvalidInput);
  EXPECT_EQ(invoke({"frobnicate"}).code, kInvalidInput);
  EXPECT_EQ(invoke({"verify", "bounds", "--samples", "0"}).code, kInvalidInput);
}

TEST_F(Cli, DimensionFailuresExitThree) {
  const std::string wrong_dims = write("dims.json", R"({"dims":[2,3],"matrix":[[[1,0],[0,0]],[[0,0],[0,0]]]})");
  EXPECT_EQ(invoke({"compute", "--state", wrong_dims}).code, kDimensionMismatch);
  const std::string ragged = write("ragged.json", R"({"dims":[2],"matrix":[[[1,0],[0,0]],[[0,0]]]})");
  EXPECT_EQ(invoke({"compute", "--state", ragged}).code, kDimensionMismatch);
  const std::string single = path("single.json");
  ASSERT_EQ(invoke({"gen", "random-mixed", "--dims", "4", "--out", single}).code, kOk);
  EXPECT_EQ(invoke({"compute", "--state", single}).code, kDimensionMismatch);
}

TEST_F(Cli, UnwritableOutputExitsFour) {
  const std::string out = path("no/such/dir/out.csv");
  EXPECT_EQ(invoke({"gen", "werner", "0.5", "--out", out}).code, kUnwritableOutput);
  EXPECT_EQ(invoke({"scan", "werner", "--out", out}).code, kUnwritableOutput);
}

TEST_F(Cli, UnknownSuiteExitsFive) {
  const Result r = invoke({"verify", "everything"});
  EXPECT_EQ(r.code, kUnknownSuite);
  EXPECT_NE(r.err.find("everything"), std::string::npos);
}

TEST_F(Cli, WernerScanIsMonotone) {
  const Result r = invoke({"scan", "werner", "--p", "0:1:11"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')),
            "p,c1,c2,c3,n_re_closed_form,n_re_numeric,n_geo_numeric,s_b_bound,abs_gap,reason");
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 11u);
  double prev = -1.0;
  for (const auto& row : rows) {
    ASSERT_EQ(row.size(), 10u);
    const double numeric = std::stod(row[5]);
    EXPECT_GT(numeric, prev - 1e-12);
    EXPECT_LE(std::stod(row[8]), 1e-6);
    EXPECT_EQ(row[9], "");
    prev = numeric;
  }
  EXPECT_NEAR(std::stod(rows.front()[5]), 0.0, 1e-8);
  EXPECT_NEAR(std::stod(rows.back()[5]), 1.0, 1e-8);
}

TEST_F(Cli, SpecialLineScanIsConstant) {
  const Result r = invoke({"scan", "bell-diagonal", "--special", "--c", "0.1:0.9:5"});
  ASSERT_EQ(r.code, kOk) << r.err;
  for (const auto& row : csv_rows(r.out)) {
    EXPECT_NEAR(std::stod(row[4]), 1.0, 1e-8);
    EXPECT_NEAR(std::stod(row[5]), 1.0, 1e-8);
  }
}

TEST_F(Cli, BellScanFlagsInvalidPoints) {
  const Result r = invoke({"scan", "bell-diagonal", "--c1", "0.8", "--c2", "0.5", "--c3", "0.3"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].back(), "positivity");
  EXPECT_EQ(rows[0][3], "");

  const Result cube = invoke({"scan", "bell-diagonal", "--c1", "-1:1:3", "--c2", "-1:1:3", "--c3",
                              "-1:1:3", "--restarts", "4"});
  ASSERT_EQ(cube.code, kOk);
  std::size_t valid = 0;
  for (const auto& row : csv_rows(cube.out)) {
    if (row.back() == "positivity") continue;
    ++valid;
    EXPECT_LE(std::stod(row[7]), 1e-6);
  }
  EXPECT_GT(valid, 0u);
}

TEST_F(Cli, VerifyJsonIsDeterministic) {
  const std::vector<std::string> args{"verify", "all", "--samples", "2", "--seed", "3",
                                      "--format", "json", "--restarts", "2"};
  const Result a = invoke(args);
  const Result b = invoke(args);
  ASSERT_EQ(a.code, kOk) << a.out;
  EXPECT_EQ(a.out, b.out);
  const json doc = json::parse(a.out);
  EXPECT_TRUE(doc["passed"].get<bool>());
  EXPECT_FALSE(doc["checks"].empty());
}

TEST_F(Cli, VerifyEachSuiteWithFewSamples) {
  for (const std::string& suite : suite_names()) {
    const Result r = invoke({"verify", suite, "--samples", "2", "--dims", "2x2", "--format", "csv"});
    EXPECT_EQ(r.code, kOk) << suite << "\n" << r.out << r.err;
  }
}

TEST(StateFile, FormatParsesBackExactly) {
  const DensityMatrix rho = random_density(Dims{3, 2}, 4, 21);
  const DensityMatrix back = parse_state(format_state(rho));
  EXPECT_EQ(back.matrix(), rho.matrix());
  EXPECT_EQ(back.dims(), rho.dims());
}

}  // namespace
}  // namespace minl::cli
