#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "cnngp/crossval.hpp"
#include "cnngp/error.hpp"
#include "cnngp/sim.hpp"
#include "oracles.hpp"

using namespace cnngp;

namespace {

std::vector<Index> fold_sizes(const std::vector<Index>& labels, Index k) {
  std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
  for (Index l : labels) ++sizes[static_cast<std::size_t>(l)];
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  return sizes;
}

Dataset random_dataset(Index n, std::uint64_t seed) {
  Dataset d;
  d.coords = oracle::random_points(n, 2, seed);
  d.x = Matrix::Ones(n, 2);
  d.x.col(1) = oracle::random_normal(n, 1, seed + 1);
  d.y = oracle::random_normal(n, 2, seed + 2) + d.x * Matrix::Ones(2, 2);
  return d;
}

}  // namespace

TEST(Folds, EvenSplit) {
  EXPECT_EQ(fold_sizes(make_folds(10, 5, 1), 5), (std::vector<Index>{2, 2, 2, 2, 2}));
}

TEST(Folds, UnevenSplit) {
  EXPECT_EQ(fold_sizes(make_folds(11, 5, 1), 5), (std::vector<Index>{3, 2, 2, 2, 2}));
}

TEST(Folds, SeedDeterminesAssignment) {
  EXPECT_EQ(make_folds(50, 5, 3), make_folds(50, 5, 3));
  EXPECT_NE(make_folds(50, 5, 3), make_folds(50, 5, 4));
  EXPECT_THROW(make_folds(10, 1, 1), ParameterError);
  EXPECT_THROW(make_folds(3, 5, 1), ParameterError);
}

TEST(CvScore, ExactLinearDataScoresZero) {
  auto d = random_dataset(60, 10);
  d.y = d.x * Matrix::Ones(2, 2);
  EXPECT_LE(cv_score(d, 6.0, 0.9, 5, KernelKind::Response, 1), 1e-6);
}

TEST(CvScore, LeaveOneOutMatchesIndependentLoop) {
  const auto d = random_dataset(40, 20);
  std::vector<Index> folds(40);
  std::iota(folds.begin(), folds.end(), Index{0});
  for (double phi : {3.0, 9.0}) {
    const double got = cv_score(d, phi, 0.9, folds, KernelKind::Response);
    const double ref = oracle::loo_response_score(d.coords, d.x, d.y, phi, 0.9, 10);
    EXPECT_NEAR(got, ref, 1e-10);
  }
}

TEST(CvScore, InvariantToFoldRelabeling) {
  const auto d = random_dataset(50, 30);
  const auto folds = make_folds(50, 5, 2);
  std::vector<Index> relabeled(folds.size());
  for (std::size_t i = 0; i < folds.size(); ++i) relabeled[i] = 4 - folds[i];
  for (auto kind : {KernelKind::Response, KernelKind::Latent}) {
    EXPECT_NEAR(cv_score(d, 5.0, 0.9, folds, kind), cv_score(d, 5.0, 0.9, relabeled, kind), 1e-9);
  }
}

TEST(GridSearch, SingleCell) {
  const auto d = random_dataset(50, 40);
  CvGrid g;
  g.phi = {4.0};
  g.alpha = {0.9};
  const auto r = grid_search(d, g);
  EXPECT_EQ(r.phi, 4.0);
  EXPECT_EQ(r.alpha, 0.9);
  EXPECT_NEAR(r.score, cv_score(d, 4.0, 0.9, 5, KernelKind::Response, 1), 1e-12);
  EXPECT_EQ(r.fold_rmspe.size(), 5);
  EXPECT_NEAR(r.fold_rmspe.sum(), r.score, 1e-12);
}

TEST(GridSearch, SelectionIsMinimalAndNoWorseThanCorners) {
  auto c = SimConfig::table1();
  c.n = 300;
  c.holdout = 0;
  const auto sim = generate(c);
  CvGrid g;
  g.phi = linspace(2.12, 26.52, 5);
  g.alpha = linspace(0.8, 0.99, 5);
  const auto r = grid_search(sim.data, g);
  const auto& round = r.last();
  EXPECT_EQ(round.scores(round.best_phi, round.best_alpha), r.score);
  EXPECT_LE(r.score, round.scores.minCoeff());
  for (Index i : {0, 4}) {
    for (Index j : {0, 4}) EXPECT_LE(r.score, round.scores(i, j));
  }
}

TEST(GridSearch, RefinementStaysInRange) {
  auto c = SimConfig::table1();
  c.n = 200;
  c.holdout = 0;
  const auto sim = generate(c);
  CvGrid g;
  g.phi = linspace(2.0, 20.0, 3);
  g.alpha = linspace(0.8, 0.99, 3);
  g.refine_rounds = 1;
  const auto r = grid_search(sim.data, g);
  ASSERT_EQ(r.rounds.size(), 2u);
  EXPECT_LE(r.score, r.rounds[0].scores.minCoeff());
  for (double a : r.last().alpha) EXPECT_LE(a, 1.0);
  for (double p : r.last().phi) EXPECT_GT(p, 0.0);
}

TEST(GridSearch, ValidatesGrid) {
  CvGrid g = CvGrid::standard(KernelKind::Latent);
  EXPECT_EQ(g.phi.size(), 25u);
  EXPECT_EQ(g.alpha.front(), 0.8);
  EXPECT_EQ(g.alpha.back(), 0.99);
  g.folds = 1;
  EXPECT_THROW(g.validate(), ParameterError);
  g = CvGrid::standard(KernelKind::Latent);
  g.alpha.back() = 1.0;
  EXPECT_THROW(g.validate(), ParameterError);
  EXPECT_EQ(linspace(1.0, 2.0, 1), std::vector<double>{1.0});
}
