//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "dagat/tape.h"

#include <stdexcept>
#include <utility>

namespace dagat {

const Matrix &Var::value() const {
  return tape_->value(id_);
}

Var Tape::push(Matrix value, bool requires_grad, BackwardFn fn) {
  if (!all_finite(value))
    throw std::domain_error("non-finite value recorded on tape");
  nodes_.push_back(Node { std::move(value), Matrix(), requires_grad,
                          requires_grad ? std::move(fn) : BackwardFn() });
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Matrix value) {
  return push(std::move(value), false, nullptr);
}

Var Tape::leaf(Matrix value) {
  return push(std::move(value), true, nullptr);
}

Var Tape::record(Matrix value, std::initializer_list<Var> inputs,
                 BackwardFn fn) {
  bool needs = false;
  for (const Var &v: inputs) {
    if (&v.tape() != this)
      throw std::invalid_argument("operand recorded on a different tape");
    needs = needs || nodes_[v.id()].requires_grad;
  }
  return push(std::move(value), needs, std::move(fn));
}

Matrix &Tape::grad_buffer(std::size_t id) {
  Node &n = nodes_[id];
  if (n.grad.empty())
    n.grad = Matrix(n.value.rows(), n.value.cols());
  return n.grad;
}

void Tape::backward(Var loss) {
  if (&loss.tape() != this)
    throw std::invalid_argument("backward: loss recorded on a different tape");
  const Matrix &lv = loss.value();
  if (lv.rows() != 1 || lv.cols() != 1)
    throw ShapeError("backward: loss must be a scalar, got "
                     + lv.shape_string());
  if (backward_done_)
    throw std::logic_error("backward: tape already consumed");
  backward_done_ = true;

  grad_buffer(loss.id())[0] = 1;
  for (std::size_t id = loss.id() + 1; id-- > 0;) {
    Node &n = nodes_[id];
    if (!n.requires_grad || n.grad.empty() || !n.backward)
      continue;
    n.backward(*this, id);
  }
}

Matrix Tape::grad(Var v) const {
  const Node &n = nodes_[v.id()];
  if (n.grad.empty())
    return Matrix(n.value.rows(), n.value.cols());
  return n.grad;
}

} // namespace dagat
