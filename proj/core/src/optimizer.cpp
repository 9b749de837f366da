// SPDX-License-Identifier: Apache-2.0
#include "newsblend/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace newsblend {

std::string_view to_string(OptimizerKind k) noexcept {
  return k == OptimizerKind::sgd ? "sgd" : "adam";
}

OptimizerKind optimizer_from_string(std::string_view name) {
  if (name == "sgd") return OptimizerKind::sgd;
  if (name == "adam") return OptimizerKind::adam;
  throw std::invalid_argument("unknown optimizer '" + std::string(name) + "'");
}

double clip_global_norm(std::span<const std::span<double>> grads, double max_norm) noexcept {
  double sq = 0.0;
  for (const auto& g : grads) {
    for (double v : g) sq += v * v;
  }
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double s = max_norm / norm;
    for (const auto& g : grads) {
      for (double& v : g) v *= s;
    }
  }
  return norm;
}

Optimizer::Optimizer(OptimizerKind kind, double learning_rate) : kind_(kind), lr_(learning_rate) {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
}

void Optimizer::step(std::span<const std::span<double>> params,
                     std::span<const std::span<double>> grads) {
  if (params.size() != grads.size()) {
    throw ShapeError("optimizer: " + std::to_string(params.size()) + " parameter tensors vs " +
                     std::to_string(grads.size()) + " gradient tensors");
  }
  ++t_;
  if (kind_ == OptimizerKind::sgd) {
    for (std::size_t k = 0; k < params.size(); ++k) {
      for (std::size_t j = 0; j < params[k].size(); ++j) params[k][j] -= lr_ * grads[k][j];
    }
    return;
  }

  if (m_.empty()) {
    for (const auto& p : params) {
      m_.emplace_back(p.size(), 0.0);
      v_.emplace_back(p.size(), 0.0);
    }
  }
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto p = params[k];
    auto g = grads[k];
    auto& m = m_[k];
    auto& v = v_[k];
    if (p.size() != m.size() || g.size() != m.size()) {
      throw ShapeError("optimizer: tensor " + std::to_string(k) + " changed size");
    }
    for (std::size_t j = 0; j < p.size(); ++j) {
      m[j] = beta1_ * m[j] + (1.0 - beta1_) * g[j];
      v[j] = beta2_ * v[j] + (1.0 - beta2_) * g[j] * g[j];
      const double m_hat = m[j] / c1;
      const double v_hat = v[j] / c2;
      p[j] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
    }
  }
}

}  // namespace newsblend
