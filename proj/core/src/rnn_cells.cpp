// SPDX-License-Identifier: Apache-2.0
#include "newsblend/rnn_cells.hpp"

#include <cmath>
#include <string>

namespace newsblend {

namespace {

std::string dims(std::size_t n) { return std::to_string(n); }

void require(bool ok, const std::string& what) {
  if (!ok) throw ShapeError(what);
}

void require_matrix(const Matrix& m, std::size_t rows, std::size_t cols, std::string_view name) {
  require(m.rows() == rows && m.cols() == cols,
          std::string(name) + " is " + m.shape_string() + ", expected " + dims(rows) + "x" +
              dims(cols));
}

void require_vector(const Vector& v, std::size_t len, std::string_view name) {
  require(v.size() == len,
          std::string(name) + " has length " + dims(v.size()) + ", expected " + dims(len));
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameter construction

LstmParams LstmParams::zeros(std::size_t input, std::size_t hidden) {
  const std::size_t cols = hidden + input;
  LstmParams p;
  p.forget_w = p.input_w = p.candidate_w = p.output_w = Matrix(hidden, cols);
  p.forget_b = p.input_b = p.candidate_b = p.output_b = Vector(hidden, 0.0);
  return p;
}

LstmParams LstmParams::random(Rng& rng, std::size_t input, std::size_t hidden) {
  const std::size_t cols = hidden + input;
  const double scale = 1.0 / std::sqrt(static_cast<double>(cols));
  LstmParams p = zeros(input, hidden);
  p.forget_w = uniform_init(rng, hidden, cols, scale);
  p.input_w = uniform_init(rng, hidden, cols, scale);
  p.candidate_w = uniform_init(rng, hidden, cols, scale);
  p.output_w = uniform_init(rng, hidden, cols, scale);
  return p;
}

void LstmParams::check_shapes() const {
  const std::size_t h = forget_b.size();
  const std::size_t cols = forget_w.cols();
  require(h > 0 && cols > h, "lstm: need hidden >= 1 and input >= 1");
  require_matrix(forget_w, h, cols, "forget_w");
  require_matrix(input_w, h, cols, "input_w");
  require_matrix(candidate_w, h, cols, "candidate_w");
  require_matrix(output_w, h, cols, "output_w");
  require_vector(input_b, h, "input_b");
  require_vector(candidate_b, h, "candidate_b");
  require_vector(output_b, h, "output_b");
}

GruParams GruParams::zeros(std::size_t input, std::size_t hidden) {
  GruParams p;
  p.update_w = p.reset_w = p.candidate_w = Matrix(hidden, input);
  p.update_u = p.reset_u = p.candidate_u = Matrix(hidden, hidden);
  p.update_b = p.reset_b = p.candidate_b = Vector(hidden, 0.0);
  return p;
}

GruParams GruParams::random(Rng& rng, std::size_t input, std::size_t hidden) {
  const double w_scale = 1.0 / std::sqrt(static_cast<double>(input));
  const double u_scale = 1.0 / std::sqrt(static_cast<double>(hidden));
  GruParams p = zeros(input, hidden);
  p.update_w = uniform_init(rng, hidden, input, w_scale);
  p.reset_w = uniform_init(rng, hidden, input, w_scale);
  p.candidate_w = uniform_init(rng, hidden, input, w_scale);
  p.update_u = uniform_init(rng, hidden, hidden, u_scale);
  p.reset_u = uniform_init(rng, hidden, hidden, u_scale);
  p.candidate_u = uniform_init(rng, hidden, hidden, u_scale);
  return p;
}

void GruParams::check_shapes() const {
  const std::size_t h = update_b.size();
  const std::size_t in = update_w.cols();
  require(h > 0 && in > 0, "gru: need hidden >= 1 and input >= 1");
  require_matrix(update_w, h, in, "update_w");
  require_matrix(reset_w, h, in, "reset_w");
  require_matrix(candidate_w, h, in, "candidate_w");
  require_matrix(update_u, h, h, "update_u");
  require_matrix(reset_u, h, h, "reset_u");
  require_matrix(candidate_u, h, h, "candidate_u");
  require_vector(reset_b, h, "reset_b");
  require_vector(candidate_b, h, "candidate_b");
}

std::string_view to_string(Activation a) noexcept {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::identity: return "identity";
    case Activation::sigmoid: return "sigmoid";
    case Activation::tanh: return "tanh";
  }
  return "identity";
}

Activation activation_from_string(std::string_view name) {
  if (name == "relu") return Activation::relu;
  if (name == "identity") return Activation::identity;
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "tanh") return Activation::tanh;
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

DenseParams DenseParams::zeros(std::size_t in, std::size_t out, Activation act) {
  return DenseParams{Matrix(out, in), Vector(out, 0.0), act};
}

DenseParams DenseParams::random(Rng& rng, std::size_t in, std::size_t out, Activation act) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(in));
  return DenseParams{uniform_init(rng, out, in, scale), Vector(out, 0.0), act};
}

void DenseParams::check_shapes() const {
  require(weight.rows() > 0 && weight.cols() > 0, "dense: empty weight matrix");
  require_vector(bias, weight.rows(), "bias");
}

CellState CellState::zeros(std::size_t hidden, bool with_cell) {
  return CellState{Vector(hidden, 0.0), with_cell ? Vector(hidden, 0.0) : Vector{}};
}

// ---------------------------------------------------------------------------
// LSTM

LstmStep lstm_forward(const LstmParams& p, std::span<const double> x, const CellState& prev) {
  const std::size_t h = p.hidden();
  require(x.size() == p.input(),
          "lstm_forward: input length " + dims(x.size()) + ", expected " + dims(p.input()));
  require(prev.h.size() == h && prev.c.size() == h,
          "lstm_forward: state lengths " + dims(prev.h.size()) + "/" + dims(prev.c.size()) +
              ", expected " + dims(h));

  LstmStep step;
  LstmCache& k = step.cache;
  k.concat.resize(h + x.size());
  std::copy(prev.h.begin(), prev.h.end(), k.concat.begin());
  std::copy(x.begin(), x.end(), k.concat.begin() + static_cast<std::ptrdiff_t>(h));

  k.forget = p.forget_b;
  k.input = p.input_b;
  k.candidate = p.candidate_b;
  k.output = p.output_b;
  matvec_accumulate(p.forget_w, k.concat, k.forget);
  matvec_accumulate(p.input_w, k.concat, k.input);
  matvec_accumulate(p.candidate_w, k.concat, k.candidate);
  matvec_accumulate(p.output_w, k.concat, k.output);

  k.c_prev = prev.c;
  k.c.resize(h);
  k.tanh_c.resize(h);
  step.next.h.resize(h);
  for (std::size_t j = 0; j < h; ++j) {
    k.forget[j] = sigmoid(k.forget[j]);
    k.input[j] = sigmoid(k.input[j]);
    k.candidate[j] = tanh_act(k.candidate[j]);
    k.output[j] = sigmoid(k.output[j]);
    k.c[j] = k.forget[j] * prev.c[j] + k.input[j] * k.candidate[j];
    k.tanh_c[j] = tanh_act(k.c[j]);
    step.next.h[j] = k.output[j] * k.tanh_c[j];
  }
  step.next.c = k.c;
  return step;
}

CellInputGrads lstm_backward_accumulate(const LstmParams& p, const LstmCache& cache,
                                        const CellState& grad_next, LstmParams& grads) {
  const std::size_t h = p.hidden();
  require(cache.c.size() == h && cache.concat.size() == p.forget_w.cols(),
          "lstm_backward: cache does not match parameters");
  require(grad_next.h.size() == h && grad_next.c.size() == h,
          "lstm_backward: upstream gradient lengths " + dims(grad_next.h.size()) + "/" +
              dims(grad_next.c.size()) + ", expected " + dims(h));
  require(grads.hidden() == h && grads.forget_w.cols() == p.forget_w.cols(),
          "lstm_backward: gradient accumulator shape mismatch");

  Vector d_forget(h), d_input(h), d_candidate(h), d_output(h);
  CellInputGrads out;
  out.grad_prev.c.resize(h);
  for (std::size_t j = 0; j < h; ++j) {
    const double o = cache.output[j];
    const double tc = cache.tanh_c[j];
    const double dc = grad_next.c[j] + grad_next.h[j] * o * (1.0 - tc * tc);
    const double f = cache.forget[j];
    const double i = cache.input[j];
    const double g = cache.candidate[j];
    d_output[j] = grad_next.h[j] * tc * o * (1.0 - o);
    d_forget[j] = dc * cache.c_prev[j] * f * (1.0 - f);
    d_input[j] = dc * g * i * (1.0 - i);
    d_candidate[j] = dc * i * (1.0 - g * g);
    out.grad_prev.c[j] = dc * f;
  }

  outer_accumulate(grads.forget_w, d_forget, cache.concat);
  outer_accumulate(grads.input_w, d_input, cache.concat);
  outer_accumulate(grads.candidate_w, d_candidate, cache.concat);
  outer_accumulate(grads.output_w, d_output, cache.concat);
  for (std::size_t j = 0; j < h; ++j) {
    grads.forget_b[j] += d_forget[j];
    grads.input_b[j] += d_input[j];
    grads.candidate_b[j] += d_candidate[j];
    grads.output_b[j] += d_output[j];
  }

  Vector d_concat(cache.concat.size(), 0.0);
  matvec_transposed_accumulate(p.forget_w, d_forget, d_concat);
  matvec_transposed_accumulate(p.input_w, d_input, d_concat);
  matvec_transposed_accumulate(p.candidate_w, d_candidate, d_concat);
  matvec_transposed_accumulate(p.output_w, d_output, d_concat);
  out.grad_prev.h.assign(d_concat.begin(), d_concat.begin() + static_cast<std::ptrdiff_t>(h));
  out.grad_x.assign(d_concat.begin() + static_cast<std::ptrdiff_t>(h), d_concat.end());
  return out;
}

CellBackward<LstmParams> lstm_backward(const LstmParams& p, const LstmCache& cache,
                                       const CellState& grad_next) {
  CellBackward<LstmParams> out{zeros_like(p), {}, {}};
  auto in = lstm_backward_accumulate(p, cache, grad_next, out.param_grads);
  out.grad_x = std::move(in.grad_x);
  out.grad_prev = std::move(in.grad_prev);
  return out;
}

// ---------------------------------------------------------------------------
// GRU

GruStep gru_forward(const GruParams& p, std::span<const double> x, const CellState& prev) {
  const std::size_t h = p.hidden();
  require(x.size() == p.input(),
          "gru_forward: input length " + dims(x.size()) + ", expected " + dims(p.input()));
  require(prev.h.size() == h,
          "gru_forward: state length " + dims(prev.h.size()) + ", expected " + dims(h));

  GruStep step;
  GruCache& k = step.cache;
  k.x.assign(x.begin(), x.end());
  k.h_prev = prev.h;

  k.update = p.update_b;
  k.reset = p.reset_b;
  matvec_accumulate(p.update_w, x, k.update);
  matvec_accumulate(p.update_u, prev.h, k.update);
  matvec_accumulate(p.reset_w, x, k.reset);
  matvec_accumulate(p.reset_u, prev.h, k.reset);
  k.reset_h.resize(h);
  for (std::size_t j = 0; j < h; ++j) {
    k.update[j] = sigmoid(k.update[j]);
    k.reset[j] = sigmoid(k.reset[j]);
    k.reset_h[j] = k.reset[j] * prev.h[j];
  }

  k.candidate = p.candidate_b;
  matvec_accumulate(p.candidate_w, x, k.candidate);
  matvec_accumulate(p.candidate_u, k.reset_h, k.candidate);
  step.next.h.resize(h);
  for (std::size_t j = 0; j < h; ++j) {
    k.candidate[j] = tanh_act(k.candidate[j]);
    step.next.h[j] = (1.0 - k.update[j]) * prev.h[j] + k.update[j] * k.candidate[j];
  }
  return step;
}

CellInputGrads gru_backward_accumulate(const GruParams& p, const GruCache& cache,
                                       const CellState& grad_next, GruParams& grads) {
  const std::size_t h = p.hidden();
  require(cache.h_prev.size() == h && cache.x.size() == p.input(),
          "gru_backward: cache does not match parameters");
  require(grad_next.h.size() == h, "gru_backward: upstream gradient length " +
                                       dims(grad_next.h.size()) + ", expected " + dims(h));
  require(grads.hidden() == h && grads.input() == p.input(),
          "gru_backward: gradient accumulator shape mismatch");

  CellInputGrads out;
  out.grad_x.assign(p.input(), 0.0);
  out.grad_prev.h.assign(h, 0.0);

  Vector d_update(h), d_candidate(h);
  for (std::size_t j = 0; j < h; ++j) {
    const double dh = grad_next.h[j];
    const double z = cache.update[j];
    const double hc = cache.candidate[j];
    d_update[j] = dh * (hc - cache.h_prev[j]) * z * (1.0 - z);
    d_candidate[j] = dh * z * (1.0 - hc * hc);
    out.grad_prev.h[j] = dh * (1.0 - z);
  }

  // Candidate path: Wh x + Uh (r * h_prev) + bh.
  outer_accumulate(grads.candidate_w, d_candidate, cache.x);
  outer_accumulate(grads.candidate_u, d_candidate, cache.reset_h);
  Vector d_reset_h(h, 0.0);
  matvec_transposed_accumulate(p.candidate_u, d_candidate, d_reset_h);
  matvec_transposed_accumulate(p.candidate_w, d_candidate, out.grad_x);

  Vector d_reset(h);
  for (std::size_t j = 0; j < h; ++j) {
    const double r = cache.reset[j];
    d_reset[j] = d_reset_h[j] * cache.h_prev[j] * r * (1.0 - r);
    out.grad_prev.h[j] += d_reset_h[j] * r;
    grads.update_b[j] += d_update[j];
    grads.reset_b[j] += d_reset[j];
    grads.candidate_b[j] += d_candidate[j];
  }

  outer_accumulate(grads.update_w, d_update, cache.x);
  outer_accumulate(grads.update_u, d_update, cache.h_prev);
  outer_accumulate(grads.reset_w, d_reset, cache.x);
  outer_accumulate(grads.reset_u, d_reset, cache.h_prev);
  matvec_transposed_accumulate(p.update_w, d_update, out.grad_x);
  matvec_transposed_accumulate(p.reset_w, d_reset, out.grad_x);
  matvec_transposed_accumulate(p.update_u, d_update, out.grad_prev.h);
  matvec_transposed_accumulate(p.reset_u, d_reset, out.grad_prev.h);
  return out;
}

CellBackward<GruParams> gru_backward(const GruParams& p, const GruCache& cache,
                                     const CellState& grad_next) {
  CellBackward<GruParams> out{zeros_like(p), {}, {}};
  auto in = gru_backward_accumulate(p, cache, grad_next, out.param_grads);
  out.grad_x = std::move(in.grad_x);
  out.grad_prev = std::move(in.grad_prev);
  return out;
}

// ---------------------------------------------------------------------------
// Dense

namespace {

double activate(Activation a, double v) noexcept {
  switch (a) {
    case Activation::relu: return relu(v);
    case Activation::identity: return v;
    case Activation::sigmoid: return sigmoid(v);
    case Activation::tanh: return tanh_act(v);
  }
  return v;
}

double activation_slope(Activation a, double pre, double y) noexcept {
  switch (a) {
    case Activation::relu: return pre > 0.0 ? 1.0 : 0.0;
    case Activation::identity: return 1.0;
    case Activation::sigmoid: return y * (1.0 - y);
    case Activation::tanh: return 1.0 - y * y;
  }
  return 1.0;
}

}  // namespace

DenseStep dense_forward(const DenseParams& p, std::span<const double> x) {
  require(x.size() == p.in() && p.bias.size() == p.out(),
          "dense_forward: weight " + p.weight.shape_string() + ", bias " + dims(p.bias.size()) +
              ", input " + dims(x.size()));
  DenseStep step;
  step.cache.x.assign(x.begin(), x.end());
  step.cache.pre = p.bias;
  matvec_accumulate(p.weight, x, step.cache.pre);
  step.y.resize(p.out());
  for (std::size_t j = 0; j < p.out(); ++j) step.y[j] = activate(p.activation, step.cache.pre[j]);
  step.cache.y = step.y;
  return step;
}

Vector dense_backward_accumulate(const DenseParams& p, const DenseCache& cache,
                                 std::span<const double> grad_y, DenseParams& grads) {
  require(grad_y.size() == p.out() && cache.x.size() == p.in() && cache.pre.size() == p.out(),
          "dense_backward: gradient length " + dims(grad_y.size()) + " for weight " +
              p.weight.shape_string());
  require(grads.weight.rows() == p.out() && grads.weight.cols() == p.in() &&
              grads.bias.size() == p.out(),
          "dense_backward: gradient accumulator shape mismatch");
  Vector d_pre(p.out());
  for (std::size_t j = 0; j < p.out(); ++j) {
    d_pre[j] = grad_y[j] * activation_slope(p.activation, cache.pre[j], cache.y[j]);
    grads.bias[j] += d_pre[j];
  }
  outer_accumulate(grads.weight, d_pre, cache.x);
  Vector grad_x(p.in(), 0.0);
  matvec_transposed_accumulate(p.weight, d_pre, grad_x);
  return grad_x;
}

DenseBackward dense_backward(const DenseParams& p, const DenseCache& cache,
                             std::span<const double> grad_y) {
  DenseBackward out{zeros_like(p), {}};
  out.grad_x = dense_backward_accumulate(p, cache, grad_y, out.param_grads);
  return out;
}

Vector dropout_mask(Rng& rng, std::size_t len, double rate) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw std::invalid_argument("dropout rate must be in [0, 1), got " + std::to_string(rate));
  }
  Vector mask(len, 1.0);
  if (rate == 0.0) return mask;
  const double keep = 1.0 / (1.0 - rate);
  for (double& m : mask) m = rng.uniform01() < rate ? 0.0 : keep;
  return mask;
}

}  // namespace newsblend
