//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "dagat/model.h"

#include <cmath>
#include <stdexcept>

#include "dagat/ops.h"

namespace dagat {
namespace {

Matrix glorot(std::size_t fan_in, std::size_t fan_out, std::size_t rows,
              std::size_t cols, std::mt19937_64 &rng) {
  const double limit =
      std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Matrix m(rows, cols);
  for (Real &v: m.data())
    v = static_cast<Real>(dist(rng));
  return m;
}

Var dropout(Var x, double rate, std::mt19937_64 &rng) {
  if (rate <= 0)
    return x;
  std::bernoulli_distribution keep(1.0 - rate);
  const Real scale = static_cast<Real>(1.0 / (1.0 - rate));
  Matrix mask(x.rows(), x.cols());
  for (Real &v: mask.data())
    v = keep(rng) ? scale : Real(0);
  return ops::mul_const(x, mask);
}

void expect_shape(const Matrix &m, std::size_t r, std::size_t c,
                  const std::string &name) {
  if (m.rows() != r || m.cols() != c)
    throw ShapeError("parameter " + name + " is " + m.shape_string()
                     + ", expected " + std::to_string(r) + "x"
                     + std::to_string(c));
}

} // namespace

void ModelConfig::validate() const {
  if (input_dim == 0 || gat_dim == 0 || num_gat_layers == 0)
    throw std::invalid_argument("model dimensions must be positive");
  if (fc_dims.empty() || fc_dims.back() != 1)
    throw std::invalid_argument("last fully connected layer must output 1");
  for (std::size_t d: fc_dims)
    if (d == 0)
      throw std::invalid_argument("fully connected widths must be positive");
  if (!(dropout_rate >= 0 && dropout_rate < 1))
    throw std::invalid_argument("dropout rate must be in [0, 1)");
}

double sigma_from_raw(double raw) {
  const double softplus =
      std::max(raw, 0.0) + std::log1p(std::exp(-std::abs(raw)));
  return softplus + kSigmaFloor;
}

double raw_from_sigma(double sigma) {
  const double s = sigma - kSigmaFloor;
  if (!(s > 0))
    throw std::invalid_argument("sigma must exceed the floor");
  // inverse softplus: log(e^s - 1)
  return s > 30 ? s + std::log1p(-std::exp(-s)) : std::log(std::expm1(s));
}

ModelParams ModelParams::initialize(const ModelConfig &cfg,
                                    std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  const std::size_t f = cfg.gat_dim;
  ModelParams p;
  p.embed = glorot(cfg.input_dim, f, cfg.input_dim, f, rng);
  for (std::size_t k = 0; k < cfg.num_gat_layers; ++k) {
    GatParams layer;
    layer.weight = glorot(f, f, f, f, rng);
    layer.attention = glorot(f, f, f, f, rng);
    layer.gate = glorot(2 * f, 1, 2 * f, 1, rng);
    layer.gate_bias = Matrix(1, 1);
    p.layers.push_back(std::move(layer));
  }
  p.mu = Matrix::scalar(static_cast<Real>(kInitialMu));
  p.sigma_raw = Matrix::scalar(static_cast<Real>(raw_from_sigma(kInitialSigma)));
  std::size_t in = f;
  for (std::size_t out: cfg.fc_dims) {
    p.fc_weights.push_back(glorot(in, out, in, out, rng));
    p.fc_biases.push_back(Matrix(1, out));
    in = out;
  }
  return p;
}

std::vector<Matrix *> ModelParams::tensors() {
  std::vector<Matrix *> out { &embed };
  for (GatParams &l: layers) {
    out.push_back(&l.weight);
    out.push_back(&l.attention);
    out.push_back(&l.gate);
    out.push_back(&l.gate_bias);
  }
  out.push_back(&mu);
  out.push_back(&sigma_raw);
  for (std::size_t k = 0; k < fc_weights.size(); ++k) {
    out.push_back(&fc_weights[k]);
    out.push_back(&fc_biases[k]);
  }
  return out;
}

std::vector<const Matrix *> ModelParams::tensors() const {
  auto mut = const_cast<ModelParams *>(this)->tensors();
  return std::vector<const Matrix *>(mut.begin(), mut.end());
}

std::vector<std::string> ModelParams::tensor_names() const {
  std::vector<std::string> out { "embed" };
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const std::string prefix = "gat" + std::to_string(k) + ".";
    for (const char *n: { "W", "E", "U", "b" })
      out.push_back(prefix + n);
  }
  out.push_back("mu");
  out.push_back("sigma_raw");
  for (std::size_t k = 0; k < fc_weights.size(); ++k) {
    out.push_back("fc" + std::to_string(k) + ".weight");
    out.push_back("fc" + std::to_string(k) + ".bias");
  }
  return out;
}

std::size_t ModelParams::num_scalars() const {
  std::size_t n = 0;
  for (const Matrix *m: tensors())
    n += m->size();
  return n;
}

void ModelParams::check_shapes(const ModelConfig &cfg) const {
  const std::size_t f = cfg.gat_dim;
  if (layers.size() != cfg.num_gat_layers)
    throw ShapeError("checkpoint has " + std::to_string(layers.size())
                     + " attention layers, config expects "
                     + std::to_string(cfg.num_gat_layers));
  if (fc_weights.size() != cfg.fc_dims.size()
      || fc_biases.size() != cfg.fc_dims.size())
    throw ShapeError("checkpoint has " + std::to_string(fc_weights.size())
                     + " fully connected layers, config expects "
                     + std::to_string(cfg.fc_dims.size()));
  expect_shape(embed, cfg.input_dim, f, "embed");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const std::string p = "gat" + std::to_string(k) + ".";
    expect_shape(layers[k].weight, f, f, p + "W");
    expect_shape(layers[k].attention, f, f, p + "E");
    expect_shape(layers[k].gate, 2 * f, 1, p + "U");
    expect_shape(layers[k].gate_bias, 1, 1, p + "b");
  }
  expect_shape(mu, 1, 1, "mu");
  expect_shape(sigma_raw, 1, 1, "sigma_raw");
  std::size_t in = f;
  for (std::size_t k = 0; k < cfg.fc_dims.size(); ++k) {
    const std::string p = "fc" + std::to_string(k) + ".";
    expect_shape(fc_weights[k], in, cfg.fc_dims[k], p + "weight");
    expect_shape(fc_biases[k], 1, cfg.fc_dims[k], p + "bias");
    in = cfg.fc_dims[k];
  }
}

std::vector<Var> ParamVars::all() const {
  std::vector<Var> out { embed };
  for (const GatVars &l: layers) {
    out.push_back(l.weight);
    out.push_back(l.attention);
    out.push_back(l.gate);
    out.push_back(l.gate_bias);
  }
  out.push_back(mu);
  out.push_back(sigma_raw);
  for (std::size_t k = 0; k < fc_weights.size(); ++k) {
    out.push_back(fc_weights[k]);
    out.push_back(fc_biases[k]);
  }
  return out;
}

ParamVars bind_params(Tape &tape, const ModelParams &params, bool trainable) {
  auto bind = [&](const Matrix &m) {
    return trainable ? tape.leaf(m) : tape.constant(m);
  };
  ParamVars v;
  v.embed = bind(params.embed);
  for (const GatParams &l: params.layers)
    v.layers.push_back(GatVars { bind(l.weight), bind(l.attention),
                                 bind(l.gate), bind(l.gate_bias) });
  v.mu = bind(params.mu);
  v.sigma_raw = bind(params.sigma_raw);
  for (std::size_t k = 0; k < params.fc_weights.size(); ++k) {
    v.fc_weights.push_back(bind(params.fc_weights[k]));
    v.fc_biases.push_back(bind(params.fc_biases[k]));
  }
  return v;
}

Var materialize_a2(const GraphSample &sample, Var mu, Var sigma) {
  Tape &tape = mu.tape();
  const Real m = mu.value().item();
  const Real s = sigma.value().item();
  if (!(s > 0))
    throw std::invalid_argument("materialize_a2: sigma must be positive");
  const std::size_t n = sample.num_atoms();
  Matrix a2 = sample.a1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (sample.inter_mask(i, j) != 0) {
        const Real d = sample.dist(i, j) - m;
        a2(i, j) = std::exp(-d * d / s);
      }
  // The closure holds the sample by pointer; the sample must outlive the
  // tape's backward pass.
  return tape.record(
      std::move(a2), { mu, sigma },
      [&sample, im = mu.id(), is = sigma.id()](Tape &t, std::size_t self) {
        const Matrix &g = t.grad_buffer(self);
        const Matrix &w = t.value(self);
        const Real m = t.value(im).item();
        const Real s = t.value(is).item();
        Real gm = 0, gs = 0;
        for (std::size_t i = 0; i < w.rows(); ++i)
          for (std::size_t j = 0; j < w.cols(); ++j) {
            if (sample.inter_mask(i, j) == 0)
              continue;
            const Real d = sample.dist(i, j) - m;
            const Real gw = g(i, j) * w(i, j);
            gm += gw * 2 * d / s;
            gs += gw * d * d / (s * s);
          }
        if (t.requires_grad(im))
          t.grad_buffer(im)[0] += gm;
        if (t.requires_grad(is))
          t.grad_buffer(is)[0] += gs;
      });
}

Forward forward(Tape &tape, const GraphSample &sample, const ParamVars &params,
                const ModelConfig &cfg, std::mt19937_64 *dropout_rng) {
  if (sample.features.cols() != cfg.input_dim)
    throw ShapeError("sample has " + std::to_string(sample.features.cols())
                     + " features, model expects "
                     + std::to_string(cfg.input_dim));
  if (params.layers.size() != cfg.num_gat_layers
      || params.fc_weights.size() != cfg.fc_dims.size())
    throw ShapeError("parameters do not match model config");

  Forward fw;
  const Var sigma = ops::add_scalar(ops::softplus(params.sigma_raw),
                                    static_cast<Real>(kSigmaFloor));
  fw.a2 = materialize_a2(sample, params.mu, sigma);
  const Var a1 = tape.constant(sample.a1);

  Var h = ops::matmul(tape.constant(sample.features), params.embed);
  for (const GatVars &layer: params.layers) {
    GatOutput covalent = gat_forward(h, a1, layer);
    GatOutput contact = gat_forward(h, fw.a2, layer);
    h = ops::sub(contact.out, covalent.out);
    if (dropout_rng && cfg.dropout_after_gat)
      h = dropout(h, cfg.dropout_rate, *dropout_rng);
    fw.covalent.push_back(std::move(covalent));
    fw.contact.push_back(std::move(contact));
  }
  fw.pooled = ops::sum_rows(h);

  Var y = fw.pooled;
  for (std::size_t k = 0; k < params.fc_weights.size(); ++k) {
    y = ops::add_row(ops::matmul(y, params.fc_weights[k]), params.fc_biases[k]);
    if (k + 1 < params.fc_weights.size()) {
      y = ops::relu(y);
      if (dropout_rng)
        y = dropout(y, cfg.dropout_rate, *dropout_rng);
    }
  }
  fw.logit = y;
  fw.probability = ops::sigmoid(y);
  return fw;
}

double predict(const GraphSample &sample, const ModelParams &params,
               const ModelConfig &cfg) {
  Tape tape;
  const ParamVars vars = bind_params(tape, params, false);
  return static_cast<double>(
      forward(tape, sample, vars, cfg).probability.value().item());
}

} // namespace dagat
