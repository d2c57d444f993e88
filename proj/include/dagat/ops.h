//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DAGAT_OPS_H_
#define DAGAT_OPS_H_

#include "dagat/matrix.h"
#include "dagat/tape.h"

// Differentiable operations. Each records its result on the operands' tape
// along with the local gradient rule; shape violations throw ShapeError.
namespace dagat::ops {

Var matmul(Var a, Var b);
// a * b^T
Var matmul_nt(Var a, Var b);
Var transpose(Var a);

Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, Real s);
Var add_scalar(Var a, Real s);

Var exp(Var a);
Var sigmoid(Var a);
Var relu(Var a);
Var softplus(Var a);

// Elementwise product / sum with a constant of the same shape.
Var mul_const(Var a, const Matrix &c);
Var add_const(Var a, const Matrix &c);

// a: NxF, row: 1xF. Adds `row` to every row of `a`.
Var add_row(Var a, Var row);
// col: Nx1, a: NxF. Scales row i of `a` by col(i).
Var scale_rows(Var col, Var a);
// [a | b] along columns; equal row counts.
Var concat_cols(Var a, Var b);

// Column sums: NxF -> 1xF.
Var sum_rows(Var a);
// Sum of all entries -> 1x1.
Var sum(Var a);

// Row-wise softmax restricted to entries where mask != 0; masked-out entries
// are exactly zero. Every mask row needs at least one nonzero.
Var masked_softmax(Var scores, const Matrix &mask);

} // namespace dagat::ops

#endif // DAGAT_OPS_H_
