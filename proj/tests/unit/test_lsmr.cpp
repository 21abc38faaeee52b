#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "cnngp/error.hpp"
#include "cnngp/sparse.hpp"

using namespace cnngp;

TEST(Lsmr, IdentityConvergesImmediately) {
  const Vector b = Vector::Random(8);
  const auto r = lsmr(SparseRowMatrix::identity(8), b);
  EXPECT_TRUE(r.report.converged());
  EXPECT_LE(r.report.iterations, 2);
  EXPECT_LT((r.x - b).norm(), 1e-12);
}

TEST(Lsmr, DiagonalSolve) {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 1, 2, 4;
  Vector b(3);
  b << 1, 2, 4;
  const auto r = lsmr(SparseRowMatrix::from_dense(d), b);
  EXPECT_LT((r.x - Vector::Ones(3)).norm(), 1e-10);
}

TEST(Lsmr, ZeroRightHandSide) {
  const auto r = lsmr(SparseRowMatrix::identity(4), Vector::Zero(4));
  EXPECT_EQ(r.report.stop, LsmrStop::ZeroSolution);
  EXPECT_EQ(r.x, Vector::Zero(4));
}

TEST(Lsmr, RandomLeastSquaresMatchesNormalEquations) {
  const Matrix a = Matrix::Random(200, 50);
  const Vector b = Vector::Random(200);
  LsmrOptions o;
  o.atol = o.btol = 1e-10;
  o.record_history = true;
  const auto r = lsmr(SparseRowMatrix::from_dense(a), b, o);
  const Vector ref = (a.transpose() * a).ldlt().solve(a.transpose() * b);
  EXPECT_TRUE(r.report.converged()) << to_string(r.report.stop);
  EXPECT_LT((r.x - ref).norm() / ref.norm(), 1e-6);
  EXPECT_EQ(static_cast<Index>(r.report.residual_history.size()), r.report.iterations + 1);
  EXPECT_NEAR(r.report.norm_r, (b - a * r.x).norm(), 1e-8);
}

TEST(Lsmr, DampingSolvesRegularizedProblem) {
  const Matrix a = Matrix::Random(30, 10);
  const Vector b = Vector::Random(30);
  LsmrOptions o;
  o.damping = 0.5;
  const auto r = lsmr(SparseRowMatrix::from_dense(a), b, o);
  const Vector ref =
      (a.transpose() * a + 0.25 * Matrix::Identity(10, 10)).ldlt().solve(a.transpose() * b);
  EXPECT_LT((r.x - ref).norm() / ref.norm(), 1e-6);
}

TEST(Lsmr, IterationLimitIsReportedNotThrown) {
  const Matrix a = Matrix::Random(60, 40);
  LsmrOptions o;
  o.max_iterations = 2;
  const auto r = lsmr(SparseRowMatrix::from_dense(a), Vector::Random(60), o);
  EXPECT_EQ(r.report.stop, LsmrStop::IterationLimit);
  EXPECT_FALSE(r.report.converged());
}

TEST(Lsmr, RejectsBadOptions) {
  LsmrOptions o;
  o.atol = -1.0;
  EXPECT_THROW(o.validate(), ParameterError);
  EXPECT_THROW(lsmr(SparseRowMatrix::identity(3), Vector::Ones(2)), DimensionError);
}
