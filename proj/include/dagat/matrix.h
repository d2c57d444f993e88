//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DAGAT_MATRIX_H_
#define DAGAT_MATRIX_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dagat {

#ifdef DAGAT_SINGLE_PRECISION
using Real = float;
#else
using Real = double;
#endif

class ShapeError: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Dense row-major matrix. Vectors are 1xN or Nx1 matrices and scalars 1x1.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, Real fill = 0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<Real> data);

  static Matrix from_rows(std::initializer_list<std::initializer_list<Real>> rows);
  static Matrix identity(std::size_t n);
  static Matrix scalar(Real v) { return Matrix(1, 1, v); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  bool same_shape(const Matrix &o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

  Real &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Real operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  Real &operator[](std::size_t i) { return data_[i]; }
  Real operator[](std::size_t i) const { return data_[i]; }

  std::span<Real> data() { return data_; }
  std::span<const Real> data() const { return data_; }
  std::span<Real> row(std::size_t r) {
    return std::span<Real>(data_).subspan(r * cols_, cols_);
  }
  std::span<const Real> row(std::size_t r) const {
    return std::span<const Real>(data_).subspan(r * cols_, cols_);
  }

  Real item() const;
  Matrix transposed() const;
  Real sum() const;

  Matrix &operator+=(const Matrix &o);
  Matrix &operator*=(Real s);

  bool operator==(const Matrix &o) const = default;

  std::string shape_string() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Real> data_;
};

void require_same_shape(const Matrix &a, const Matrix &b, const char *what);

// Plain (non-recorded) products; the tape ops build on these.
Matrix matmul(const Matrix &a, const Matrix &b);
// a * b^T
Matrix matmul_nt(const Matrix &a, const Matrix &b);
// a^T * b
Matrix matmul_tn(const Matrix &a, const Matrix &b);

bool all_finite(const Matrix &m);
Real max_abs_diff(const Matrix &a, const Matrix &b);

} // namespace dagat

#endif // DAGAT_MATRIX_H_
