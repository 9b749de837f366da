// SPDX-License-Identifier: Apache-2.0
/**
 * @file   rnn_cells.hpp
 * @brief  Single-step LSTM / GRU cells and dense layers with analytic gradients.
 *
 * LSTM (gate weights act on the concatenation [h_prev, x], hidden first):
 *   f = sigmoid(Wf [h,x] + bf)    i = sigmoid(Wi [h,x] + bi)
 *   g = tanh(Wc [h,x] + bc)       o = sigmoid(Wo [h,x] + bo)
 *   c' = f * c + i * g            h' = o * tanh(c')
 *
 * GRU:
 *   z  = sigmoid(Wz x + Uz h + bz)        r = sigmoid(Wr x + Ur h + br)
 *   h~ = tanh(Wh x + Uh (r * h) + bh)     h' = (1 - z) * h + z * h~
 *
 * Backward passes accumulate parameter gradients into a caller-owned
 * params-shaped struct so a BPTT loop can sum over time without allocating.
 */
#pragma once

#include <cstddef>
#include <string_view>

#include "newsblend/numerics.hpp"

namespace newsblend {

struct LstmParams {
  Matrix forget_w, input_w, candidate_w, output_w;  // hidden x (hidden + input)
  Vector forget_b, input_b, candidate_b, output_b;  // hidden

  static LstmParams zeros(std::size_t input, std::size_t hidden);
  /// Weights uniform in +-1/sqrt(hidden + input), biases zero.
  static LstmParams random(Rng& rng, std::size_t input, std::size_t hidden);

  std::size_t hidden() const noexcept { return forget_b.size(); }
  std::size_t input() const noexcept { return forget_w.cols() - forget_b.size(); }
  void check_shapes() const;

  template <class F>
  void for_each_tensor(F&& f) {
    f(std::string_view{"forget_w"}, forget_w);
    f(std::string_view{"input_w"}, input_w);
    f(std::string_view{"candidate_w"}, candidate_w);
    f(std::string_view{"output_w"}, output_w);
    f(std::string_view{"forget_b"}, forget_b);
    f(std::string_view{"input_b"}, input_b);
    f(std::string_view{"candidate_b"}, candidate_b);
    f(std::string_view{"output_b"}, output_b);
  }
  template <class F>
  void for_each_tensor(F&& f) const {
    const_cast<LstmParams*>(this)->for_each_tensor(
        [&](std::string_view name, const auto& t) { f(name, t); });
  }

  friend bool operator==(const LstmParams&, const LstmParams&) = default;
};

struct GruParams {
  Matrix update_w, reset_w, candidate_w;  // hidden x input
  Matrix update_u, reset_u, candidate_u;  // hidden x hidden
  Vector update_b, reset_b, candidate_b;  // hidden

  static GruParams zeros(std::size_t input, std::size_t hidden);
  /// W uniform in +-1/sqrt(input), U uniform in +-1/sqrt(hidden), biases zero.
  static GruParams random(Rng& rng, std::size_t input, std::size_t hidden);

  std::size_t hidden() const noexcept { return update_b.size(); }
  std::size_t input() const noexcept { return update_w.cols(); }
  void check_shapes() const;

  template <class F>
  void for_each_tensor(F&& f) {
    f(std::string_view{"update_w"}, update_w);
    f(std::string_view{"reset_w"}, reset_w);
    f(std::string_view{"candidate_w"}, candidate_w);
    f(std::string_view{"update_u"}, update_u);
    f(std::string_view{"reset_u"}, reset_u);
    f(std::string_view{"candidate_u"}, candidate_u);
    f(std::string_view{"update_b"}, update_b);
    f(std::string_view{"reset_b"}, reset_b);
    f(std::string_view{"candidate_b"}, candidate_b);
  }
  template <class F>
  void for_each_tensor(F&& f) const {
    const_cast<GruParams*>(this)->for_each_tensor(
        [&](std::string_view name, const auto& t) { f(name, t); });
  }

  friend bool operator==(const GruParams&, const GruParams&) = default;
};

enum class Activation { relu, identity, sigmoid, tanh };

std::string_view to_string(Activation a) noexcept;
Activation activation_from_string(std::string_view name);

struct DenseParams {
  Matrix weight;  // out x in
  Vector bias;    // out
  Activation activation = Activation::identity;

  static DenseParams zeros(std::size_t in, std::size_t out, Activation act);
  /// Weights uniform in +-1/sqrt(in), biases zero.
  static DenseParams random(Rng& rng, std::size_t in, std::size_t out, Activation act);

  std::size_t in() const noexcept { return weight.cols(); }
  std::size_t out() const noexcept { return weight.rows(); }
  void check_shapes() const;

  template <class F>
  void for_each_tensor(F&& f) {
    f(std::string_view{"weight"}, weight);
    f(std::string_view{"bias"}, bias);
  }
  template <class F>
  void for_each_tensor(F&& f) const {
    f(std::string_view{"weight"}, weight);
    f(std::string_view{"bias"}, bias);
  }

  friend bool operator==(const DenseParams&, const DenseParams&) = default;
};

/// Recurrent state. `c` is empty for GRU cells. Also used for state gradients.
struct CellState {
  Vector h;
  Vector c;

  static CellState zeros(std::size_t hidden, bool with_cell);
  friend bool operator==(const CellState&, const CellState&) = default;
};

struct LstmCache {
  Vector concat;  // [h_prev, x]
  Vector forget, input, candidate, output;
  Vector c_prev, c, tanh_c;
};

struct LstmStep {
  CellState next;
  LstmCache cache;
};

struct GruCache {
  Vector x, h_prev;
  Vector update, reset, candidate;
  Vector reset_h;  // r * h_prev
};

struct GruStep {
  CellState next;
  GruCache cache;
};

struct DenseCache {
  Vector x, pre, y;
};

struct DenseStep {
  Vector y;
  DenseCache cache;
};

struct CellInputGrads {
  Vector grad_x;
  CellState grad_prev;
};

template <class Params>
struct CellBackward {
  Params param_grads;
  Vector grad_x;
  CellState grad_prev;
};

LstmStep lstm_forward(const LstmParams& p, std::span<const double> x, const CellState& prev);
/// Adds dLoss/dparams into `grads` and returns input / previous-state gradients.
CellInputGrads lstm_backward_accumulate(const LstmParams& p, const LstmCache& cache,
                                        const CellState& grad_next, LstmParams& grads);
CellBackward<LstmParams> lstm_backward(const LstmParams& p, const LstmCache& cache,
                                       const CellState& grad_next);

GruStep gru_forward(const GruParams& p, std::span<const double> x, const CellState& prev);
CellInputGrads gru_backward_accumulate(const GruParams& p, const GruCache& cache,
                                       const CellState& grad_next, GruParams& grads);
CellBackward<GruParams> gru_backward(const GruParams& p, const GruCache& cache,
                                     const CellState& grad_next);

DenseStep dense_forward(const DenseParams& p, std::span<const double> x);
Vector dense_backward_accumulate(const DenseParams& p, const DenseCache& cache,
                                 std::span<const double> grad_y, DenseParams& grads);

struct DenseBackward {
  DenseParams param_grads;
  Vector grad_x;
};
DenseBackward dense_backward(const DenseParams& p, const DenseCache& cache,
                             std::span<const double> grad_y);

/// Inverted-dropout mask: each entry is 0 with probability `rate`, else 1/(1-rate).
Vector dropout_mask(Rng& rng, std::size_t len, double rate);

/// Params-shaped zero tensor set, used as a gradient accumulator.
template <class Params>
Params zeros_like(const Params& p) {
  Params z = p;
  z.for_each_tensor([](std::string_view, auto& t) {
    for (double& v : values(t)) v = 0.0;
  });
  return z;
}

}  // namespace newsblend
