// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "newsblend/numerics.hpp"

namespace newsblend {

enum class OptimizerKind { sgd, adam };

std::string_view to_string(OptimizerKind k) noexcept;
OptimizerKind optimizer_from_string(std::string_view name);

/// Flat views over every tensor of a params struct, in for_each_tensor order.
template <class Params>
std::vector<std::span<double>> parameter_spans(Params& p) {
  std::vector<std::span<double>> out;
  p.for_each_tensor([&](std::string_view, auto& t) { out.push_back(values(t)); });
  return out;
}

/// Scales all gradients in place so their joint L2 norm is at most max_norm.
/// Returns the norm before clipping. max_norm <= 0 disables clipping.
double clip_global_norm(std::span<const std::span<double>> grads, double max_norm) noexcept;

/// Full-batch first-order optimizer. Adam uses beta1=0.9, beta2=0.999, eps=1e-8.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double learning_rate);

  void step(std::span<const std::span<double>> params,
            std::span<const std::span<double>> grads);

  std::size_t steps_taken() const noexcept { return t_; }

 private:
  OptimizerKind kind_;
  double lr_;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  std::size_t t_ = 0;
  std::vector<Vector> m_;
  std::vector<Vector> v_;
};

}  // namespace newsblend
