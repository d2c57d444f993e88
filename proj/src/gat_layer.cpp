//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "dagat/gat_layer.h"

#include <stdexcept>
#include <string>

#include "dagat/ops.h"

namespace dagat {

GatParams GatParams::zeros(std::size_t width) {
  return GatParams { Matrix(width, width), Matrix(width, width),
                     Matrix(2 * width, 1), Matrix(1, 1) };
}

GatOutput gat_forward(Var x, Var adjacency, const GatVars &p) {
  const std::size_t n = x.rows();
  const std::size_t f = x.cols();
  const Matrix &a = adjacency.value();
  if (a.rows() != n || a.cols() != n)
    throw ShapeError("gat_forward: adjacency " + a.shape_string()
                     + " for " + std::to_string(n) + " nodes");
  if (p.weight.rows() != f || p.weight.cols() != f
      || p.attention.rows() != f || p.attention.cols() != f
      || p.gate.rows() != 2 * f || p.gate.cols() != 1
      || p.gate_bias.rows() != 1 || p.gate_bias.cols() != 1)
    throw ShapeError("gat_forward: parameters do not match width "
                     + std::to_string(f));

  Matrix neighbors(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(a(i, i) > 0))
      throw std::invalid_argument("gat_forward: adjacency row "
                                  + std::to_string(i)
                                  + " has no self-loop");
    for (std::size_t j = 0; j < n; ++j)
      neighbors(i, j) = a(i, j) > 0 ? 1 : 0;
  }

  GatOutput o;
  o.transformed = ops::matmul_nt(x, p.weight);
  const Var left = ops::matmul(o.transformed, p.attention);
  const Var pair = ops::matmul_nt(left, o.transformed);
  o.scores = ops::add(pair, ops::transpose(pair));
  o.softmax = ops::masked_softmax(o.scores, neighbors);
  const Var weights = ops::mul(o.softmax, adjacency);
  o.aggregated = ops::matmul(weights, o.transformed);

  const Var gate_in = ops::concat_cols(x, o.transformed);
  o.gate = ops::sigmoid(ops::add_row(ops::matmul(gate_in, p.gate),
                                     p.gate_bias));
  // z x' + (1 - z) x'' == x'' + z (x' - x'')
  o.out = ops::add(o.aggregated,
                   ops::scale_rows(o.gate,
                                   ops::sub(o.transformed, o.aggregated)));
  return o;
}

} // namespace dagat
