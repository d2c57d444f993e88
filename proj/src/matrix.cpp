//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "dagat/matrix.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include <Eigen/Core>

namespace dagat {
namespace {
using RowMajor =
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMajor>;
using MutMap = Eigen::Map<RowMajor>;

ConstMap view(const Matrix &m) {
  return ConstMap(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                  static_cast<Eigen::Index>(m.cols()));
}

MutMap view(Matrix &m) {
  return MutMap(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                static_cast<Eigen::Index>(m.cols()));
}
} // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, Real fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) { }

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Real> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_)
    throw ShapeError("matrix data length " + std::to_string(data_.size())
                     + " does not match " + shape_string());
}

Matrix
Matrix::from_rows(std::initializer_list<std::initializer_list<Real>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<Real> data;
  data.reserve(r * c);
  for (const auto &row: rows) {
    if (row.size() != c)
      throw ShapeError("ragged initializer list");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1;
  return m;
}

Real Matrix::item() const {
  if (rows_ != 1 || cols_ != 1)
    throw ShapeError("item() on non-scalar " + shape_string());
  return data_[0];
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      t(j, i) = (*this)(i, j);
  return t;
}

Real Matrix::sum() const {
  return std::accumulate(data_.begin(), data_.end(), Real(0));
}

Matrix &Matrix::operator+=(const Matrix &o) {
  require_same_shape(*this, o, "+=");
  for (std::size_t i = 0; i < data_.size(); ++i)
    data_[i] += o.data_[i];
  return *this;
}

Matrix &Matrix::operator*=(Real s) {
  for (auto &v: data_)
    v *= s;
  return *this;
}

std::string Matrix::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

void require_same_shape(const Matrix &a, const Matrix &b, const char *what) {
  if (!a.same_shape(b))
    throw ShapeError(std::string(what) + ": shape mismatch " + a.shape_string()
                     + " vs " + b.shape_string());
}

Matrix matmul(const Matrix &a, const Matrix &b) {
  if (a.cols() != b.rows())
    throw ShapeError("matmul: " + a.shape_string() + " x " + b.shape_string());
  Matrix out(a.rows(), b.cols());
  if (!out.empty() && a.cols() > 0)
    view(out).noalias() = view(a) * view(b);
  return out;
}

Matrix matmul_nt(const Matrix &a, const Matrix &b) {
  if (a.cols() != b.cols())
    throw ShapeError("matmul_nt: " + a.shape_string() + " x ("
                     + b.shape_string() + ")^T");
  Matrix out(a.rows(), b.rows());
  if (!out.empty() && a.cols() > 0)
    view(out).noalias() = view(a) * view(b).transpose();
  return out;
}

Matrix matmul_tn(const Matrix &a, const Matrix &b) {
  if (a.rows() != b.rows())
    throw ShapeError("matmul_tn: (" + a.shape_string() + ")^T x "
                     + b.shape_string());
  Matrix out(a.cols(), b.cols());
  if (!out.empty() && a.rows() > 0)
    view(out).noalias() = view(a).transpose() * view(b);
  return out;
}

bool all_finite(const Matrix &m) {
  return std::all_of(m.data().begin(), m.data().end(),
                     [](Real v) { return std::isfinite(v); });
}

Real max_abs_diff(const Matrix &a, const Matrix &b) {
  require_same_shape(a, b, "max_abs_diff");
  Real worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

} // namespace dagat
