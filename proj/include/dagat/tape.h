//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DAGAT_TAPE_H_
#define DAGAT_TAPE_H_

#include <cstddef>
#include <functional>
#include <vector>

#include "dagat/matrix.h"

namespace dagat {

class Tape;

// Handle to a value recorded on a Tape. Cheap to copy; valid as long as the
// tape it points to.
class Var {
public:
  Var() = default;

  Tape &tape() const { return *tape_; }
  std::size_t id() const { return id_; }
  const Matrix &value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  bool valid() const { return tape_ != nullptr; }

private:
  friend class Tape;
  Var(Tape *tape, std::size_t id): tape_(tape), id_(id) { }

  Tape *tape_ = nullptr;
  std::size_t id_ = 0;
};

// Define-by-run reverse-mode tape. Nodes are appended in evaluation order, so
// every operand precedes its consumers and a reverse sweep is a valid
// topological traversal.
//
// A tape is not thread-safe; use one tape per sample or per thread.
class Tape {
public:
  // Called during backward() with the tape and the id of the node whose
  // gradient is complete; propagates into the node's operands.
  using BackwardFn = std::function<void(Tape &, std::size_t)>;

  Tape() = default;
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  Var constant(Matrix value);
  Var leaf(Matrix value);

  // Records a computed value. The node requires a gradient iff any input does;
  // `fn` is dropped otherwise.
  Var record(Matrix value, std::initializer_list<Var> inputs, BackwardFn fn);

  // Seeds d(loss)/d(loss) = 1 and sweeps the tape backwards. `loss` must be
  // 1x1. May be called once per tape.
  void backward(Var loss);

  const Matrix &value(std::size_t id) const { return nodes_[id].value; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  bool requires_grad(Var v) const { return requires_grad(v.id()); }

  // Gradient of the last backward() target with respect to `v`; zeros if `v`
  // was not reached.
  Matrix grad(Var v) const;

  // Lazily allocated accumulation buffer, for use inside BackwardFn.
  Matrix &grad_buffer(std::size_t id);
  bool has_grad(std::size_t id) const { return !nodes_[id].grad.empty(); }

  std::size_t size() const { return nodes_.size(); }

private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    BackwardFn backward;
  };

  Var push(Matrix value, bool requires_grad, BackwardFn fn);

  std::vector<Node> nodes_;
  bool backward_done_ = false;
};

} // namespace dagat

#endif // DAGAT_TAPE_H_
