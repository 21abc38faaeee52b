#include "cnngp/sparse.hpp"

#include <cmath>
#include <string>

#include "cnngp/error.hpp"

namespace cnngp {

SparseRowMatrix::SparseRowMatrix(Index rows, Index cols)
    : rows_(rows), cols_(cols), row_ptr_(static_cast<std::size_t>(rows) + 1, 0) {
  if (rows < 0 || cols < 0) throw DimensionError("sparse matrix: negative dimension");
}

SparseRowMatrix::SparseRowMatrix(Index rows, Index cols, std::vector<Index> row_ptr,
                                 std::vector<Index> col_idx, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  validate();
}

void SparseRowMatrix::validate() const {
  if (rows_ < 0 || cols_ < 0) throw DimensionError("sparse matrix: negative dimension");
  if (row_ptr_.size() != static_cast<std::size_t>(rows_) + 1 || row_ptr_.front() != 0) {
    throw DimensionError("sparse matrix: row pointer array has wrong length");
  }
  if (col_idx_.size() != values_.size() ||
      static_cast<std::size_t>(row_ptr_.back()) != col_idx_.size()) {
    throw DimensionError("sparse matrix: index/value arrays disagree with row pointers");
  }
  for (Index i = 0; i < rows_; ++i) {
    const Index lo = row_ptr_[i], hi = row_ptr_[i + 1];
    if (hi < lo) throw DimensionError("sparse matrix: row pointers decrease");
    for (Index k = lo; k < hi; ++k) {
      if (col_idx_[k] < 0 || col_idx_[k] >= cols_) {
        throw DimensionError("sparse matrix: column index out of range in row " +
                             std::to_string(i));
      }
      if (k > lo && col_idx_[k] <= col_idx_[k - 1]) {
        throw DimensionError("sparse matrix: column indices not strictly increasing in row " +
                             std::to_string(i));
      }
    }
  }
}

SparseRowMatrix SparseRowMatrix::identity(Index n) {
  SparseRowBuilder b(n, n, static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    b.push(i, 1.0);
    b.end_row();
  }
  return b.finish();
}

SparseRowMatrix SparseRowMatrix::from_dense(const Matrix& dense, double drop_tolerance) {
  SparseRowBuilder b(dense.rows(), dense.cols());
  for (Index i = 0; i < dense.rows(); ++i) {
    for (Index j = 0; j < dense.cols(); ++j) {
      if (std::abs(dense(i, j)) > drop_tolerance) b.push(j, dense(i, j));
    }
    b.end_row();
  }
  return b.finish();
}

std::span<const Index> SparseRowMatrix::row_indices(Index i) const {
  return {col_idx_.data() + row_ptr_[i], static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
}

std::span<const double> SparseRowMatrix::row_values(Index i) const {
  return {values_.data() + row_ptr_[i], static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
}

std::span<double> SparseRowMatrix::row_values(Index i) {
  return {values_.data() + row_ptr_[i], static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
}

Matrix SparseRowMatrix::to_dense() const {
  Matrix d = Matrix::Zero(rows_, cols_);
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_idx_[k]) += values_[k];
  }
  return d;
}

SparseRowBuilder::SparseRowBuilder(Index rows, Index cols, std::size_t reserve)
    : rows_(rows), cols_(cols) {
  row_ptr_.reserve(static_cast<std::size_t>(rows) + 1);
  col_idx_.reserve(reserve);
  values_.reserve(reserve);
}

void SparseRowBuilder::push(Index col, double value) {
  if (col < 0 || col >= cols_) {
    throw DimensionError("sparse builder: column " + std::to_string(col) + " out of range");
  }
  if (col_idx_.size() > static_cast<std::size_t>(row_ptr_.back()) && col <= col_idx_.back()) {
    throw ParameterError("sparse builder: columns must increase within a row");
  }
  col_idx_.push_back(col);
  values_.push_back(value);
}

void SparseRowBuilder::end_row() { row_ptr_.push_back(static_cast<Index>(col_idx_.size())); }

SparseRowMatrix SparseRowBuilder::finish() {
  if (static_cast<Index>(row_ptr_.size()) != rows_ + 1) {
    throw DimensionError("sparse builder: expected " + std::to_string(rows_) + " rows, got " +
                         std::to_string(row_ptr_.size() - 1));
  }
  return SparseRowMatrix(rows_, cols_, std::move(row_ptr_), std::move(col_idx_),
                         std::move(values_));
}

void spmv_add(const SparseRowMatrix& a, const Vector& x, Vector& y, Op op) {
  const auto& ptr = a.row_ptr();
  const auto& idx = a.col_idx();
  const auto& val = a.values();
  if (op == Op::Normal) {
    if (x.size() != a.cols() || y.size() != a.rows()) {
      throw DimensionError("spmv: operand sizes do not match a " + std::to_string(a.rows()) +
                           " x " + std::to_string(a.cols()) + " matrix");
    }
    for (Index i = 0; i < a.rows(); ++i) {
      double s = 0.0;
      for (Index k = ptr[i]; k < ptr[i + 1]; ++k) s += val[k] * x[idx[k]];
      y[i] += s;
    }
  } else {
    if (x.size() != a.rows() || y.size() != a.cols()) {
      throw DimensionError("spmv: operand sizes do not match the transpose of a " +
                           std::to_string(a.rows()) + " x " + std::to_string(a.cols()) +
                           " matrix");
    }
    for (Index i = 0; i < a.rows(); ++i) {
      const double xi = x[i];
      for (Index k = ptr[i]; k < ptr[i + 1]; ++k) y[idx[k]] += val[k] * xi;
    }
  }
}

Vector spmv(const SparseRowMatrix& a, const Vector& x, Op op) {
  Vector y = Vector::Zero(op == Op::Normal ? a.rows() : a.cols());
  spmv_add(a, x, y, op);
  return y;
}

Matrix spmm(const SparseRowMatrix& a, const Matrix& b, Op op) {
  const Index inner = op == Op::Normal ? a.cols() : a.rows();
  const Index outer = op == Op::Normal ? a.rows() : a.cols();
  if (b.rows() != inner) throw DimensionError("spmm: inner dimensions do not match");
  Matrix c = Matrix::Zero(outer, b.cols());
  const auto& ptr = a.row_ptr();
  const auto& idx = a.col_idx();
  const auto& val = a.values();
  if (op == Op::Normal) {
    for (Index i = 0; i < a.rows(); ++i) {
      for (Index k = ptr[i]; k < ptr[i + 1]; ++k) c.row(i) += val[k] * b.row(idx[k]);
    }
  } else {
    for (Index i = 0; i < a.rows(); ++i) {
      for (Index k = ptr[i]; k < ptr[i + 1]; ++k) c.row(idx[k]) += val[k] * b.row(i);
    }
  }
  return c;
}

}  // namespace cnngp
