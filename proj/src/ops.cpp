//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "dagat/ops.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace dagat::ops {
namespace {

void accumulate(Tape &t, std::size_t id, const Matrix &g) {
  if (t.requires_grad(id))
    t.grad_buffer(id) += g;
}

// Shared driver for unary pointwise maps. `dfdx(x, y)` is the local
// derivative given input x and output y.
template <class F, class D>
Var pointwise(Var a, F f, D dfdx) {
  const Matrix &x = a.value();
  Matrix y(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i)
    y[i] = f(x[i]);
  return a.tape().record(std::move(y), { a },
                         [ia = a.id(), dfdx](Tape &t, std::size_t self) {
                           const Matrix &g = t.grad_buffer(self);
                           const Matrix &x = t.value(ia);
                           const Matrix &y = t.value(self);
                           Matrix &ga = t.grad_buffer(ia);
                           for (std::size_t i = 0; i < g.size(); ++i)
                             ga[i] += g[i] * dfdx(x[i], y[i]);
                         });
}

Real stable_sigmoid(Real x) {
  if (x >= 0)
    return Real(1) / (Real(1) + std::exp(-x));
  const Real e = std::exp(x);
  return e / (Real(1) + e);
}

} // namespace

Var matmul(Var a, Var b) {
  Matrix out = dagat::matmul(a.value(), b.value());
  return a.tape().record(std::move(out), { a, b },
                         [ia = a.id(), ib = b.id()](Tape &t, std::size_t self) {
                           const Matrix &g = t.grad_buffer(self);
                           if (t.requires_grad(ia))
                             t.grad_buffer(ia) += dagat::matmul_nt(g, t.value(ib));
                           if (t.requires_grad(ib))
                             t.grad_buffer(ib) += dagat::matmul_tn(t.value(ia), g);
                         });
}

Var matmul_nt(Var a, Var b) {
  Matrix out = dagat::matmul_nt(a.value(), b.value());
  return a.tape().record(std::move(out), { a, b },
                         [ia = a.id(), ib = b.id()](Tape &t, std::size_t self) {
                           const Matrix &g = t.grad_buffer(self);
                           // out = A B^T: dA = G B, dB = G^T A
                           if (t.requires_grad(ia))
                             t.grad_buffer(ia) += dagat::matmul(g, t.value(ib));
                           if (t.requires_grad(ib))
                             t.grad_buffer(ib) += dagat::matmul_tn(g, t.value(ia));
                         });
}

Var transpose(Var a) {
  return a.tape().record(a.value().transposed(), { a },
                         [ia = a.id()](Tape &t, std::size_t self) {
                           accumulate(t, ia, t.grad_buffer(self).transposed());
                         });
}

Var add(Var a, Var b) {
  require_same_shape(a.value(), b.value(), "add");
  Matrix out = a.value();
  out += b.value();
  return a.tape().record(std::move(out), { a, b },
                         [ia = a.id(), ib = b.id()](Tape &t, std::size_t self) {
                           const Matrix &g = t.grad_buffer(self);
                           accumulate(t, ia, g);
                           accumulate(t, ib, g);
                         });
}

Var sub(Var a, Var b) {
  require_same_shape(a.value(), b.value(), "sub");
  Matrix out = a.value();
  const Matrix &bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] -= bv[i];
  return a.tape().record(std::move(out), { a, b },
                         [ia = a.id(), ib = b.id()](Tape &t, std::size_t self) {
                           const Matrix &g = t.grad_buffer(self);
                           accumulate(t, ia, g);
                           if (t.requires_grad(ib)) {
                             Matrix &gb = t.grad_buffer(ib);
                             for (std::size_t i = 0; i < g.size(); ++i)
                               gb[i] -= g[i];
                           }
                         });
}

Var mul(Var a, Var b) {
  require_same_shape(a.value(), b.value(), "mul");
  Matrix out = a.value();
  const Matrix &bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] *= bv[i];
  return a.tape().record(
      std::move(out), { a, b },
      [ia = a.id(), ib = b.id()](Tape &t, std::size_t self) {
        const Matrix &g = t.grad_buffer(self);
        const Matrix &av = t.value(ia);
        const Matrix &bv = t.value(ib);
        if (t.requires_grad(ia)) {
          Matrix &ga = t.grad_buffer(ia);
          for (std::size_t i = 0; i < g.size(); ++i)
            ga[i] += g[i] * bv[i];
        }
        if (t.requires_grad(ib)) {
          Matrix &gb = t.grad_buffer(ib);
          for (std::size_t i = 0; i < g.size(); ++i)
            gb[i] += g[i] * av[i];
        }
      });
}

Var scale(Var a, Real s) {
  return pointwise(
      a, [s](Real x) { return s * x; }, [s](Real, Real) { return s; });
}

Var add_scalar(Var a, Real s) {
  return pointwise(
      a, [s](Real x) { return x + s; }, [](Real, Real) { return Real(1); });
}

Var exp(Var a) {
  return pointwise(
      a, [](Real x) { return std::exp(x); }, [](Real, Real y) { return y; });
}

Var sigmoid(Var a) {
  return pointwise(a, stable_sigmoid,
                   [](Real, Real y) { return y * (Real(1) - y); });
}

Var relu(Var a) {
  return pointwise(
      a, [](Real x) { return x > 0 ? x : Real(0); },
      [](Real x, Real) { return x > 0 ? Real(1) : Real(0); });
}

Var softplus(Var a) {
  return pointwise(
      a,
      [](Real x) {
        // log(1 + e^x) without overflow
        return std::max(x, Real(0)) + std::log1p(std::exp(-std::abs(x)));
      },
      [](Real x, Real) { return stable_sigmoid(x); });
}

Var mul_const(Var a, const Matrix &c) {
  require_same_shape(a.value(), c, "mul_const");
  Matrix out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] *= c[i];
  return a.tape().record(std::move(out), { a },
                         [ia = a.id(), c](Tape &t, std::size_t self) {
                           const Matrix &g = t.grad_buffer(self);
                           Matrix &ga = t.grad_buffer(ia);
                           for (std::size_t i = 0; i < g.size(); ++i)
                             ga[i] += g[i] * c[i];
                         });
}

Var add_const(Var a, const Matrix &c) {
  require_same_shape(a.value(), c, "add_const");
  Matrix out = a.value();
  out += c;
  return a.tape().record(std::move(out), { a },
                         [ia = a.id()](Tape &t, std::size_t self) {
                           t.grad_buffer(ia) += t.grad_buffer(self);
                         });
}

Var add_row(Var a, Var row) {
  const Matrix &av = a.value();
  const Matrix &rv = row.value();
  if (rv.rows() != 1 || rv.cols() != av.cols())
    throw ShapeError("add_row: " + av.shape_string() + " + "
                     + rv.shape_string());
  Matrix out = av;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j)
      out(i, j) += rv[j];
  return a.tape().record(std::move(out), { a, row },
                         [ia = a.id(), ir = row.id()](Tape &t, std::size_t self) {
                           const Matrix &g = t.grad_buffer(self);
                           accumulate(t, ia, g);
                           if (t.requires_grad(ir)) {
                             Matrix &gr = t.grad_buffer(ir);
                             for (std::size_t i = 0; i < g.rows(); ++i)
                               for (std::size_t j = 0; j < g.cols(); ++j)
                                 gr[j] += g(i, j);
                           }
                         });
}

Var scale_rows(Var col, Var a) {
  const Matrix &cv = col.value();
  const Matrix &av = a.value();
  if (cv.cols() != 1 || cv.rows() != av.rows())
    throw ShapeError("scale_rows: " + cv.shape_string() + " * "
                     + av.shape_string());
  Matrix out = av;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j)
      out(i, j) *= cv[i];
  return a.tape().record(
      std::move(out), { col, a },
      [ic = col.id(), ia = a.id()](Tape &t, std::size_t self) {
        const Matrix &g = t.grad_buffer(self);
        const Matrix &cv = t.value(ic);
        const Matrix &av = t.value(ia);
        if (t.requires_grad(ic)) {
          Matrix &gc = t.grad_buffer(ic);
          for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = 0; j < g.cols(); ++j)
              gc[i] += g(i, j) * av(i, j);
        }
        if (t.requires_grad(ia)) {
          Matrix &ga = t.grad_buffer(ia);
          for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = 0; j < g.cols(); ++j)
              ga(i, j) += g(i, j) * cv[i];
        }
      });
}

Var concat_cols(Var a, Var b) {
  const Matrix &av = a.value();
  const Matrix &bv = b.value();
  if (av.rows() != bv.rows())
    throw ShapeError("concat_cols: " + av.shape_string() + " | "
                     + bv.shape_string());
  const std::size_t ca = av.cols();
  Matrix out(av.rows(), ca + bv.cols());
  for (std::size_t i = 0; i < out.rows(); ++i) {
    std::copy(av.row(i).begin(), av.row(i).end(), out.row(i).begin());
    std::copy(bv.row(i).begin(), bv.row(i).end(), out.row(i).begin() + ca);
  }
  return a.tape().record(
      std::move(out), { a, b },
      [ia = a.id(), ib = b.id(), ca](Tape &t, std::size_t self) {
        const Matrix &g = t.grad_buffer(self);
        if (t.requires_grad(ia)) {
          Matrix &ga = t.grad_buffer(ia);
          for (std::size_t i = 0; i < ga.rows(); ++i)
            for (std::size_t j = 0; j < ga.cols(); ++j)
              ga(i, j) += g(i, j);
        }
        if (t.requires_grad(ib)) {
          Matrix &gb = t.grad_buffer(ib);
          for (std::size_t i = 0; i < gb.rows(); ++i)
            for (std::size_t j = 0; j < gb.cols(); ++j)
              gb(i, j) += g(i, ca + j);
        }
      });
}

Var sum_rows(Var a) {
  const Matrix &av = a.value();
  Matrix out(1, av.cols());
  for (std::size_t i = 0; i < av.rows(); ++i)
    for (std::size_t j = 0; j < av.cols(); ++j)
      out[j] += av(i, j);
  return a.tape().record(std::move(out), { a },
                         [ia = a.id()](Tape &t, std::size_t self) {
                           const Matrix &g = t.grad_buffer(self);
                           Matrix &ga = t.grad_buffer(ia);
                           for (std::size_t i = 0; i < ga.rows(); ++i)
                             for (std::size_t j = 0; j < ga.cols(); ++j)
                               ga(i, j) += g[j];
                         });
}

Var sum(Var a) {
  return a.tape().record(Matrix::scalar(a.value().sum()), { a },
                         [ia = a.id()](Tape &t, std::size_t self) {
                           const Real g = t.grad_buffer(self)[0];
                           Matrix &ga = t.grad_buffer(ia);
                           for (std::size_t i = 0; i < ga.size(); ++i)
                             ga[i] += g;
                         });
}

Var masked_softmax(Var scores, const Matrix &mask) {
  const Matrix &s = scores.value();
  require_same_shape(s, mask, "masked_softmax");
  Matrix out(s.rows(), s.cols());
  for (std::size_t i = 0; i < s.rows(); ++i) {
    Real row_max = -std::numeric_limits<Real>::infinity();
    for (std::size_t j = 0; j < s.cols(); ++j)
      if (mask(i, j) != 0)
        row_max = std::max(row_max, s(i, j));
    if (row_max == -std::numeric_limits<Real>::infinity())
      throw std::invalid_argument("masked_softmax: row "
                                  + std::to_string(i)
                                  + " has no masked-in entries");
    Real denom = 0;
    for (std::size_t j = 0; j < s.cols(); ++j)
      if (mask(i, j) != 0) {
        out(i, j) = std::exp(s(i, j) - row_max);
        denom += out(i, j);
      }
    for (std::size_t j = 0; j < s.cols(); ++j)
      out(i, j) /= denom;
  }
  return scores.tape().record(
      std::move(out), { scores }, [is = scores.id()](Tape &t, std::size_t self) {
        const Matrix &g = t.grad_buffer(self);
        const Matrix &y = t.value(self);
        Matrix &gs = t.grad_buffer(is);
        for (std::size_t i = 0; i < y.rows(); ++i) {
          Real dot = 0;
          for (std::size_t j = 0; j < y.cols(); ++j)
            dot += g(i, j) * y(i, j);
          for (std::size_t j = 0; j < y.cols(); ++j)
            gs(i, j) += y(i, j) * (g(i, j) - dot);
        }
      });
}

} // namespace dagat::ops
