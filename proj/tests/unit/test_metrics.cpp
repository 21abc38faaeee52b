#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "cnngp/error.hpp"
#include "cnngp/metrics.hpp"
#include "oracles.hpp"

using namespace cnngp;

TEST(Rmspe, PerfectPredictionIsZero) {
  const Matrix t = Matrix::Random(5, 2);
  EXPECT_EQ(rmspe(t, t).combined, 0.0);
}

TEST(Rmspe, HandArithmetic) {
  Matrix t(2, 1), p(2, 1);
  t << 0, 0;
  p << 1, -1;
  EXPECT_DOUBLE_EQ(rmspe(t, p).combined, 1.0);
}

TEST(Rmspe, MatchesNaiveLoop) {
  const Matrix t = oracle::random_normal(37, 3, 1);
  const Matrix p = oracle::random_normal(37, 3, 2);
  const auto r = rmspe(t, p);
  EXPECT_NEAR(r.combined, oracle::rmspe_loop(t, p), 1e-12);
  for (Index j = 0; j < 3; ++j) EXPECT_NEAR(r.per_response[j], oracle::rmspe_loop(t.col(j), p.col(j)), 1e-12);
  EXPECT_THROW(rmspe(t, p.topRows(3)), DimensionError);
}

TEST(Coverage, Cases) {
  const double inf = std::numeric_limits<double>::infinity();
  const Matrix t = Matrix::Random(4, 2);
  EXPECT_EQ(coverage(t, Matrix::Constant(4, 2, -inf), Matrix::Constant(4, 2, inf)).combined, 1.0);
  EXPECT_EQ(coverage(t, t, t).combined, 1.0);
  Matrix lo = t, hi = t;
  hi.topRows(2).array() -= 1.0;
  lo.topRows(2).array() -= 2.0;
  EXPECT_EQ(coverage(t, lo, hi).combined, 0.5);
  EXPECT_THROW(coverage(t, t.array() + 1.0, t), Error);
}

TEST(Crps, StandardNormalAtMedian) {
  const double expected = 1.0 / std::sqrt(M_PI) - 2.0 / std::sqrt(2.0 * M_PI);
  EXPECT_NEAR(negated_crps(0.0, 0.0, 1.0), expected, 1e-15);
  EXPECT_NEAR(negated_crps(0.0, 0.0, 1.0), -0.2336949772, 1e-9);
  EXPECT_NEAR(negated_crps(0.0, 0.0, 1.0), oracle::crps_by_integration(0.0, 0.0, 1.0), 1e-6);
}

TEST(Crps, AgreesWithIntegrationElsewhere) {
  for (double y : {-1.3, 0.4, 2.2}) {
    EXPECT_NEAR(negated_crps(y, 0.3, 0.7), oracle::crps_by_integration(y, 0.3, 0.7), 1e-6);
  }
}

TEST(Crps, LinearInScaleAtFixedZ) {
  const double z = 0.7;
  const double base = negated_crps(z, 0.0, 1.0);
  for (double s : {0.5, 2.0, 10.0}) EXPECT_NEAR(negated_crps(z * s, 0.0, s), s * base, 1e-12);
}

TEST(Crps, TailsApproachAbsoluteError) {
  // Far from the mean the score is -|z| plus the constant 1/sqrt(pi).
  for (double z : {-8.0, 8.0}) {
    EXPECT_NEAR(negated_crps(z, 0.0, 1.0) + std::abs(z), 1.0 / std::sqrt(M_PI), 1e-3);
    EXPECT_NEAR(negated_crps(z, 0.0, 1.0) / -std::abs(z), 1.0, 0.08);
  }
}

TEST(Mcrps, AveragesPerColumn) {
  Matrix t(2, 1), m(2, 1), s(2, 1);
  t << 0, 1;
  m << 0, 0;
  s << 1, 1;
  const auto r = mcrps(t, m, s);
  EXPECT_NEAR(r.combined, 0.5 * (negated_crps(0, 0, 1) + negated_crps(1, 0, 1)), 1e-15);
}

TEST(Msel, Cases) {
  const Matrix t = oracle::random_normal(20, 2, 5);
  EXPECT_EQ(msel(t, t).combined, 0.0);
  EXPECT_NEAR(msel(t, t.array() + 0.3).combined, 0.09, 1e-15);
  const Matrix e = oracle::random_normal(20, 2, 6);
  EXPECT_NEAR(msel(t, e).combined, oracle::msel_loop(t, e), 1e-12);
}

TEST(Msel, InterceptCentering) {
  Matrix beta(2, 2);
  beta << 1, 2, 9, 9;
  const Matrix c = center_by_intercept(Matrix::Zero(3, 2), beta);
  EXPECT_EQ(c.col(0), Vector::Constant(3, 1.0));
  EXPECT_EQ(c.col(1), Vector::Constant(3, 2.0));
}
