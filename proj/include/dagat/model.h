//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DAGAT_MODEL_H_
#define DAGAT_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dagat/gat_layer.h"
#include "dagat/graph.h"
#include "dagat/matrix.h"
#include "dagat/tape.h"

namespace dagat {

struct ModelConfig {
  std::size_t input_dim = 56;
  std::size_t num_gat_layers = 4;
  std::size_t gat_dim = 140;
  std::vector<std::size_t> fc_dims { 128, 128, 1 };
  double dropout_rate = 0.3;
  // Dropout on each attention layer's output in addition to FC1..FC(n-1).
  bool dropout_after_gat = true;

  // Throws std::invalid_argument.
  void validate() const;

  bool operator==(const ModelConfig &) const = default;
};

inline constexpr double kInitialMu = 3.0;    // angstrom
inline constexpr double kInitialSigma = 2.0; // angstrom^2
inline constexpr double kSigmaFloor = 1e-3;

// sigma = softplus(raw) + kSigmaFloor, so sigma > 0 for every raw value.
double sigma_from_raw(double raw);
double raw_from_sigma(double sigma);

struct ModelParams {
  Matrix embed; // input_dim x gat_dim
  std::vector<GatParams> layers;
  Matrix mu;        // 1 x 1
  Matrix sigma_raw; // 1 x 1, see sigma_from_raw
  std::vector<Matrix> fc_weights; // in x out
  std::vector<Matrix> fc_biases;  // 1 x out

  // Glorot-uniform matrices, zero biases, mu = 3 A, sigma = 2 A^2.
  static ModelParams initialize(const ModelConfig &cfg, std::uint64_t seed);

  double mu_value() const { return mu.item(); }
  double sigma() const { return sigma_from_raw(sigma_raw.item()); }

  // Every learnable tensor in a fixed order: embed, per layer (W, E, U, b),
  // mu, sigma_raw, then (weight, bias) per FC layer.
  std::vector<Matrix *> tensors();
  std::vector<const Matrix *> tensors() const;
  std::vector<std::string> tensor_names() const;
  std::size_t num_scalars() const;

  // Throws ShapeError if the tensors do not match `cfg`.
  void check_shapes(const ModelConfig &cfg) const;

  bool operator==(const ModelParams &) const = default;
};

// Parameters bound to a tape, aligned with ModelParams::tensors().
struct ParamVars {
  Var embed;
  std::vector<GatVars> layers;
  Var mu;
  Var sigma_raw;
  std::vector<Var> fc_weights;
  std::vector<Var> fc_biases;

  std::vector<Var> all() const;
};

// Leaves when `trainable`, constants otherwise.
ParamVars bind_params(Tape &tape, const ModelParams &params, bool trainable);

// A2_ij = a1_ij where inter_mask_ij == 0, else exp(-(d_ij - mu)^2 / sigma).
// `mu` and `sigma` are 1x1; sigma must be positive.
Var materialize_a2(const GraphSample &sample, Var mu, Var sigma);

struct Forward {
  Var probability; // 1 x 1
  Var logit;       // 1 x 1
  Var pooled;      // 1 x gat_dim, sum over atoms after the last layer
  Var a2;
  // Per layer: the A1 branch and A2 branch outputs (same parameters).
  std::vector<GatOutput> covalent;
  std::vector<GatOutput> contact;
};

// Runs the network on `sample`. Dropout is active iff `dropout_rng` is
// non-null.
Forward forward(Tape &tape, const GraphSample &sample, const ParamVars &params,
                const ModelConfig &cfg, std::mt19937_64 *dropout_rng = nullptr);

// Inference-mode probability (no dropout).
double predict(const GraphSample &sample, const ModelParams &params,
               const ModelConfig &cfg);

} // namespace dagat

#endif // DAGAT_MODEL_H_
