#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "cnngp/dataset.hpp"
#include "cnngp_cli/cli.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "cnngp");
  std::ostringstream out, err;
  const int code = cnngp::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cnngp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SimulateDefaults) {
  const auto r = invoke({"simulate", "--out", path("sim")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto d = cnngp::read_dataset(path("sim/data.csv"));
  EXPECT_EQ(d.size(), 1200);
  EXPECT_EQ(d.covariates(), 2);
  EXPECT_EQ(d.responses(), 2);
  EXPECT_EQ(d.held_out().size(), 200);
  EXPECT_TRUE(fs::exists(path("sim/truth.csv")));
}

TEST_F(CliTest, SimulateIsByteIdentical) {
  ASSERT_EQ(invoke({"simulate", "--n", "100", "--seed", "7", "--out", path("a")}).code, 0);
  ASSERT_EQ(invoke({"simulate", "--n", "100", "--seed", "7", "--out", path("b")}).code, 0);
  for (const char* f : {"data.csv", "truth.csv"}) {
    EXPECT_EQ(slurp(path("a/") + f), slurp(path("b/") + f)) << f;
  }
}

TEST_F(CliTest, SimulateRejectsUnitAlpha) {
  const auto r = invoke({"simulate", "--alpha", "1.0", "--out", path("sim")});
  EXPECT_NE(r.code, 0);
  const auto e = json::parse(r.err);
  EXPECT_EQ(e["error"]["kind"], "parameter_error");
  EXPECT_NE(e["error"]["message"].get<std::string>().find("alpha"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsAreJson) {
  const auto r = invoke({"fit", "--kind", "bogus", "--data", "x", "--out", "y"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json::parse(r.err)["error"]["kind"], "usage_error");
}

TEST_F(CliTest, CvSingleCellAndFoldCheck) {
  ASSERT_EQ(invoke({"simulate", "--n", "120", "--holdout", "20", "--out", path("sim")}).code, 0);
  const auto r = invoke({"cv", "--data", path("sim/data.csv"), "--phi-min", "5", "--phi-max", "5",
                         "--phi-count", "1", "--alpha-min", "0.9", "--alpha-max", "0.9",
                         "--alpha-count", "1", "--out", path("cv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(slurp(path("cv/cv.json")));
  EXPECT_EQ(j["phi"], 5.0);
  EXPECT_EQ(j["alpha"], 0.9);
  EXPECT_TRUE(fs::exists(path("cv/cv_scores.csv")));

  const auto bad = invoke({"cv", "--data", path("sim/data.csv"), "--folds", "1", "--out", path("cv2")});
  EXPECT_NE(bad.code, 0);
}

TEST_F(CliTest, FitWithoutDrawsGivesClosedForm) {
  ASSERT_EQ(invoke({"simulate", "--n", "150", "--holdout", "30", "--out", path("sim")}).code, 0);
  const auto r = invoke({"fit", "--data", path("sim/data.csv"), "--phi", "6", "--alpha", "0.9",
                         "--draws", "0", "--out", path("run")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto post = json::parse(slurp(path("run/posterior.json")));
  EXPECT_EQ(post["draws"], 0);
  EXPECT_EQ(post["n"], 120);
  EXPECT_TRUE(post.contains("beta_mean"));
  EXPECT_TRUE(post.contains("psi_star"));
  EXPECT_TRUE(post.contains("nu_star"));
  EXPECT_FALSE(fs::exists(path("run/beta_samples.csv")));
}

TEST_F(CliTest, HoldoutWorkflowEndToEnd) {
  ASSERT_EQ(invoke({"simulate", "--n", "250", "--holdout", "50", "--out", path("sim")}).code, 0);
  for (const std::string kind : {"response", "latent"}) {
    const auto fit = invoke({"fit", "--data", path("sim/data.csv"), "--kind", kind, "--phi", "6",
                             "--alpha", "0.9", "--draws", "100", "--out", path(kind)});
    ASSERT_EQ(fit.code, 0) << fit.err;
    const auto pred = invoke({"predict", "--run", path(kind), "--queries", path("sim/data.csv"),
                              "--out", path(kind + "/pred.csv")});
    ASSERT_EQ(pred.code, 0) << pred.err;
    EXPECT_EQ(json::parse(pred.out)["sites"], 50);
    std::vector<std::string> margs{"metrics", "--predictions", path(kind + "/pred.csv"), "--truth",
                                   path("sim/data.csv")};
    if (kind == "latent") {
      EXPECT_TRUE(json::parse(slurp(path("latent/posterior.json"))).contains("omega_cov"));
      margs.insert(margs.end(), {"--latent-summary", path("latent/latent_summary.csv"),
                                 "--latent-truth", path("sim/truth.csv")});
    }
    const auto met = invoke(margs);
    ASSERT_EQ(met.code, 0) << met.err;
    const auto m = json::parse(met.out);
    EXPECT_EQ(m["sites"], 50);
    EXPECT_GT(m["rmspe"]["combined"].get<double>(), 0.0);
    EXPECT_LT(m["rmspe"]["combined"].get<double>(), 2.0);
    EXPECT_LE(m["mcrps"]["combined"].get<double>(), 0.0);
    EXPECT_EQ(m.contains("msel"), kind == "latent");
  }
}

TEST_F(CliTest, LatentInterpolatesTrainingSites) {
  ASSERT_EQ(invoke({"simulate", "--n", "60", "--holdout", "0", "--out", path("sim")}).code, 0);
  ASSERT_EQ(invoke({"fit", "--data", path("sim/data.csv"), "--kind", "latent", "--phi", "6",
                    "--alpha", "0.99999", "--neighbors", "59", "--draws", "50", "--out", path("run")})
                .code,
            0);
  // Queries without a holdout column: every row is predicted.
  const auto truth = cnngp::read_dataset(path("sim/data.csv"));
  cnngp::CsvTable q;
  q.header = {"coord_1", "coord_2", "x_1", "x_2"};
  q.values.resize(truth.size(), 4);
  q.values << truth.coords, truth.x;
  cnngp::write_csv(path("queries.csv"), q);
  const auto r = invoke({"predict", "--run", path("run"), "--queries", path("queries.csv"), "--out",
                         path("pred.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto pred = cnngp::read_csv(path("pred.csv"));
  const cnngp::Matrix mean = pred.values.middleCols(pred.column("mean_1"), 2);
  EXPECT_LT((mean - truth.y).cwiseAbs().maxCoeff(), 0.05);
}

TEST_F(CliTest, PredictRejectsEmptyQueries) {
  ASSERT_EQ(invoke({"simulate", "--n", "80", "--holdout", "10", "--out", path("sim")}).code, 0);
  ASSERT_EQ(invoke({"fit", "--data", path("sim/data.csv"), "--phi", "6", "--alpha", "0.9",
                    "--draws", "10", "--out", path("run")})
                .code,
            0);
  {
    std::ofstream f(path("empty.csv"));
    f << "coord_1,coord_2,x_1,x_2\n";
  }
  const auto r = invoke({"predict", "--run", path("run"), "--queries", path("empty.csv"), "--out",
                         path("pred.csv")});
  EXPECT_NE(r.code, 0);
  EXPECT_EQ(json::parse(r.err)["error"]["kind"], "data_error");
}

TEST_F(CliTest, KlDemoIdentities) {
  auto r = invoke({"kl-demo", "--identity", "response"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(json::parse(r.out)["kl_response"].get<double>(), 1e-12);
  r = invoke({"kl-demo", "--identity", "latent"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(json::parse(r.out)["kl_latent"].get<double>(), 1e-12);
}

TEST_F(CliTest, KlDemoRandomAndInvalid) {
  auto r = invoke({"kl-demo", "--random", "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["shrink_passes"], 100);
  r = invoke({"kl-demo", "--rho12", "0.9", "--rho13", "-0.9", "--rho23", "0.9"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("1 - (rho12^2 + rho13^2 + rho23^2) + 2 rho12 rho13 rho23"), std::string::npos) << r.err;
}

TEST_F(CliTest, RasterGrid) {
  ASSERT_EQ(invoke({"simulate", "--n", "80", "--holdout", "0", "--out", path("sim")}).code, 0);
  ASSERT_EQ(invoke({"fit", "--data", path("sim/data.csv"), "--phi", "6", "--alpha", "0.9",
                    "--draws", "0", "--out", path("run")})
                .code,
            0);
  const auto r = invoke({"raster", "--run", path("run"), "--nx", "2", "--ny", "2", "--out", path("grid.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(cnngp::read_csv(path("grid.csv")).values.rows(), 4);
  EXPECT_NE(invoke({"raster", "--run", path("run"), "--nx", "0", "--out", path("g0.csv")}).code, 0);
}
