#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cnngp/linalg.hpp"

namespace cnngp {

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row; explicit zeros are allowed.
class SparseRowMatrix {
 public:
  SparseRowMatrix() = default;
  SparseRowMatrix(Index rows, Index cols);
  /// Takes ownership of CSR arrays and validates them.
  SparseRowMatrix(Index rows, Index cols, std::vector<Index> row_ptr,
                  std::vector<Index> col_idx, std::vector<double> values);

  static SparseRowMatrix identity(Index n);
  /// Keeps entries with |a_ij| > drop_tolerance.
  static SparseRowMatrix from_dense(const Matrix& dense, double drop_tolerance = 0.0);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  std::size_t nonzeros() const { return values_.size(); }

  std::span<const Index> row_indices(Index i) const;
  std::span<const double> row_values(Index i) const;
  std::span<double> row_values(Index i);

  const std::vector<Index>& row_ptr() const { return row_ptr_; }
  const std::vector<Index>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  Matrix to_dense() const;

 private:
  void validate() const;

  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

/// Row-by-row builder; rows must be appended in order.
class SparseRowBuilder {
 public:
  SparseRowBuilder(Index rows, Index cols, std::size_t reserve = 0);
  /// Adds an entry to the current row. Columns must increase within a row.
  void push(Index col, double value);
  void end_row();
  SparseRowMatrix finish();

 private:
  Index rows_, cols_;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

enum class Op { Normal, Transposed };

/// y = A x (Op::Normal) or y = A^T x (Op::Transposed).
Vector spmv(const SparseRowMatrix& a, const Vector& x, Op op = Op::Normal);
/// Accumulating form: y += A x or y += A^T x.
void spmv_add(const SparseRowMatrix& a, const Vector& x, Vector& y, Op op = Op::Normal);
/// Dense right-hand side: A B or A^T B.
Matrix spmm(const SparseRowMatrix& a, const Matrix& b, Op op = Op::Normal);

/// Matrix-free operator consumed by LSMR.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual Index rows() const = 0;
  virtual Index cols() const = 0;
  /// y += A x
  virtual void apply_add(const Vector& x, Vector& y) const = 0;
  /// y += A^T x
  virtual void apply_transpose_add(const Vector& x, Vector& y) const = 0;
};

class SparseOperator final : public LinearOperator {
 public:
  explicit SparseOperator(const SparseRowMatrix& a) : a_(a) {}
  Index rows() const override { return a_.rows(); }
  Index cols() const override { return a_.cols(); }
  void apply_add(const Vector& x, Vector& y) const override { spmv_add(a_, x, y, Op::Normal); }
  void apply_transpose_add(const Vector& x, Vector& y) const override {
    spmv_add(a_, x, y, Op::Transposed);
  }

 private:
  const SparseRowMatrix& a_;
};

struct LsmrOptions {
  double atol = 1e-10;
  double btol = 1e-10;
  double conlim = 1e8;
  /// 0 selects 10 * cols.
  Index max_iterations = 0;
  double damping = 0.0;
  bool record_history = false;

  void validate() const;
};

enum class LsmrStop {
  ZeroSolution,        ///< b = 0, x = 0 is exact
  Compatible,          ///< ||r|| small relative to btol/atol criteria: Ax = b
  LeastSquares,        ///< ||A^T r|| small relative to atol: least-squares optimum
  ConditionLimit,      ///< estimated cond(A) exceeded conlim
  CompatibleEps,       ///< as Compatible, at machine precision
  LeastSquaresEps,     ///< as LeastSquares, at machine precision
  ConditionLimitEps,   ///< cond(A) too large for machine precision
  IterationLimit,
};

std::string to_string(LsmrStop stop);

struct LsmrReport {
  LsmrStop stop = LsmrStop::IterationLimit;
  Index iterations = 0;
  double norm_r = 0.0;    ///< ||b - A x||
  double norm_ar = 0.0;   ///< ||A^T (b - A x)||
  double norm_a = 0.0;    ///< Frobenius norm estimate of A
  double cond_a = 0.0;
  double norm_x = 0.0;
  std::vector<double> residual_history;  ///< ||r_k|| for k = 0..iterations, when requested

  bool converged() const {
    return stop != LsmrStop::IterationLimit && stop != LsmrStop::ConditionLimit &&
           stop != LsmrStop::ConditionLimitEps;
  }
};

struct LsmrResult {
  Vector x;
  LsmrReport report;
};

/// Minimizes ||A x - b||_2 (plus damping^2 ||x||^2) by LSMR. Non-convergence
/// is reported through `report.stop`, never thrown.
LsmrResult lsmr(const LinearOperator& a, const Vector& b, const LsmrOptions& opts = {});
LsmrResult lsmr(const SparseRowMatrix& a, const Vector& b, const LsmrOptions& opts = {});

}  // namespace cnngp
