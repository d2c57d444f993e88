//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DAGAT_GAT_LAYER_H_
#define DAGAT_GAT_LAYER_H_

#include <cstddef>

#include "dagat/matrix.h"
#include "dagat/tape.h"

namespace dagat {

// Learnable state of one gated, distance-aware attention layer of width F.
struct GatParams {
  Matrix weight;    // W, F x F: x'_i = W x_i
  Matrix attention; // E, F x F: e_ij = x'_i^T E x'_j + x'_j^T E x'_i
  Matrix gate;      // U, 2F x 1
  Matrix gate_bias; // b, 1 x 1

  static GatParams zeros(std::size_t width);
  std::size_t width() const { return weight.rows(); }

  bool operator==(const GatParams &) const = default;
};

struct GatVars {
  Var weight;
  Var attention;
  Var gate;
  Var gate_bias;
};

// Intermediate values are exposed for inspection and tests.
struct GatOutput {
  Var out;         // N x F
  Var transformed; // x', N x F
  Var scores;      // e, N x N (dense; only neighbor entries are used)
  Var softmax;     // attention before the A_ij multiply, N x N
  Var aggregated;  // x'', N x F
  Var gate;        // z, N x 1
};

// One layer on adjacency A (N x N). The neighborhood of i is {j : A_ij > 0};
// A_ii must be positive for every i. Gradients reach all parameters and the
// entries of A.
//
//   x'_i   = W x_i
//   a_ij   = softmax_j(e_ij) * A_ij
//   x''_i  = sum_j a_ij x'_j
//   z_i    = sigmoid(U^T [x_i ; x'_i] + b)
//   out_i  = z_i x'_i + (1 - z_i) x''_i
GatOutput gat_forward(Var x, Var adjacency, const GatVars &p);

} // namespace dagat

#endif // DAGAT_GAT_LAYER_H_
