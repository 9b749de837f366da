// SPDX-License-Identifier: Apache-2.0
//
// Independent scalar re-implementations used as test oracles. Parameters are
// held by tensor name in extended precision so finite differences can be
// taken without double rounding of the perturbed value.

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "newsblend/metrics.hpp"
#include "newsblend/training.hpp"

namespace oracle {

using Real = long double;

struct Tensor {
  std::size_t rows = 0, cols = 0;  // vectors: rows = n, cols = 1
  std::vector<Real> data;
  Real at(std::size_t r, std::size_t c = 0) const { return data[r * cols + c]; }
};

using Params = std::map<std::string, Tensor>;

inline Tensor to_tensor(const newsblend::Matrix& m) {
  Tensor t{m.rows(), m.cols(), {}};
  for (double v : m.values()) t.data.push_back(v);
  return t;
}
inline Tensor to_tensor(const newsblend::Vector& v) {
  Tensor t{v.size(), 1, {}};
  for (double x : v) t.data.push_back(x);
  return t;
}

/// Flattens anything with for_each_tensor, optionally under a name prefix.
template <class P>
Params collect(const P& p, const std::string& prefix = "") {
  Params out;
  p.for_each_tensor([&](std::string_view name, const auto& t) {
    out[prefix + std::string(name)] = to_tensor(t);
  });
  return out;
}

inline Real sig(Real x) { return 1.0L / (1.0L + std::exp(-x)); }

inline std::vector<Real> affine(const Tensor& w, const Tensor& b, const std::vector<Real>& x) {
  std::vector<Real> y(w.rows);
  for (std::size_t k = 0; k < w.rows; ++k) {
    Real s = b.at(k);
    for (std::size_t j = 0; j < w.cols; ++j) s += w.at(k, j) * x[j];
    y[k] = s;
  }
  return y;
}

/// One LSTM step; gates act on [h, x] with the hidden part first.
inline void lstm_step(const Params& p, const std::string& pre, const std::vector<Real>& x,
                      std::vector<Real>& h, std::vector<Real>& c) {
  std::vector<Real> z = h;
  z.insert(z.end(), x.begin(), x.end());
  const auto f = affine(p.at(pre + "forget_w"), p.at(pre + "forget_b"), z);
  const auto i = affine(p.at(pre + "input_w"), p.at(pre + "input_b"), z);
  const auto g = affine(p.at(pre + "candidate_w"), p.at(pre + "candidate_b"), z);
  const auto o = affine(p.at(pre + "output_w"), p.at(pre + "output_b"), z);
  for (std::size_t k = 0; k < h.size(); ++k) {
    c[k] = sig(f[k]) * c[k] + sig(i[k]) * std::tanh(g[k]);
    h[k] = sig(o[k]) * std::tanh(c[k]);
  }
}

inline void gru_step(const Params& p, const std::string& pre, const std::vector<Real>& x,
                     std::vector<Real>& h) {
  const std::size_t n = h.size();
  const Tensor& wz = p.at(pre + "update_w");
  const Tensor& wr = p.at(pre + "reset_w");
  const Tensor& wh = p.at(pre + "candidate_w");
  const Tensor& uz = p.at(pre + "update_u");
  const Tensor& ur = p.at(pre + "reset_u");
  const Tensor& uh = p.at(pre + "candidate_u");
  std::vector<Real> z(n), r(n);
  for (std::size_t k = 0; k < n; ++k) {
    Real sz = p.at(pre + "update_b").at(k), sr = p.at(pre + "reset_b").at(k);
    for (std::size_t j = 0; j < x.size(); ++j) {
      sz += wz.at(k, j) * x[j];
      sr += wr.at(k, j) * x[j];
    }
    for (std::size_t j = 0; j < n; ++j) {
      sz += uz.at(k, j) * h[j];
      sr += ur.at(k, j) * h[j];
    }
    z[k] = sig(sz);
    r[k] = sig(sr);
  }
  std::vector<Real> next(n);
  for (std::size_t k = 0; k < n; ++k) {
    Real s = p.at(pre + "candidate_b").at(k);
    for (std::size_t j = 0; j < x.size(); ++j) s += wh.at(k, j) * x[j];
    for (std::size_t j = 0; j < n; ++j) s += uh.at(k, j) * (r[j] * h[j]);
    next[k] = (1.0L - z[k]) * h[k] + z[k] * std::tanh(s);
  }
  h = next;
}

inline Real activate(newsblend::Activation a, Real v) {
  switch (a) {
    case newsblend::Activation::relu: return v > 0 ? v : 0;
    case newsblend::Activation::identity: return v;
    case newsblend::Activation::sigmoid: return sig(v);
    case newsblend::Activation::tanh: return std::tanh(v);
  }
  return v;
}

inline std::vector<Real> dense(const Params& p, const std::string& pre, newsblend::Activation act,
                               const std::vector<Real>& x) {
  auto y = affine(p.at(pre + "weight"), p.at(pre + "bias"), x);
  for (auto& v : y) v = activate(act, v);
  return y;
}

/// Mean squared error of a stacked sequence model (no dropout).
inline Real sequence_loss(const Params& p, const newsblend::SequenceModel& shape,
                          std::span<const newsblend::WindowSample> samples) {
  const std::size_t hidden = shape.config.hidden;
  Real total = 0;
  for (const auto& s : samples) {
    std::vector<std::vector<Real>> seq(s.inputs.rows());
    for (std::size_t t = 0; t < s.inputs.rows(); ++t) {
      for (double v : s.inputs.row(t)) seq[t].push_back(v);
    }
    for (std::size_t l = 0; l < shape.layers.size(); ++l) {
      const std::string pre = "layer" + std::to_string(l) + ".";
      std::vector<Real> h(hidden, 0), c(hidden, 0);
      for (auto& x : seq) {
        if (shape.config.cell == newsblend::CellKind::lstm) lstm_step(p, pre, x, h, c);
        else gru_step(p, pre, x, h);
        x = h;
      }
    }
    const Real y = dense(p, "head.", newsblend::Activation::identity, seq.back())[0];
    total += (y - s.target) * (y - s.target);
  }
  return total / static_cast<Real>(samples.size());
}

/// Central difference of `f` with respect to every scalar in `p`, by name.
inline std::map<std::string, std::vector<Real>> numeric_gradient(
    Params& p, const std::function<Real(const Params&)>& f, Real h = 1e-6L) {
  std::map<std::string, std::vector<Real>> out;
  for (auto& [name, t] : p) {
    auto& g = out[name];
    for (auto& v : t.data) {
      const Real saved = v;
      v = saved + h;
      const Real up = f(p);
      v = saved - h;
      const Real down = f(p);
      v = saved;
      g.push_back((up - down) / (2 * h));
    }
  }
  return out;
}

/// |a - n| / max(|a|, |n|, floor).
inline double rel_error(double analytic, long double numeric, double floor = 1e-6) {
  const long double a = analytic;
  const long double den = std::max({std::fabs(a), std::fabs(numeric), (long double)floor});
  return static_cast<double>(std::fabs(a - numeric) / den);
}

/// Largest relative error between analytic gradients (by name) and numeric ones.
inline double max_rel_error(const Params& analytic, const std::map<std::string, std::vector<Real>>& numeric,
                            std::string* worst = nullptr) {
  double m = 0;
  for (const auto& [name, g] : numeric) {
    const auto& a = analytic.at(name).data;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double e = rel_error(static_cast<double>(a[k]), g[k]);
      if (e > m) {
        m = e;
        if (worst) *worst = name + "[" + std::to_string(k) + "]";
      }
    }
  }
  return m;
}

// ---- metrics --------------------------------------------------------------

struct MetricsOracle {
  double mse = 0, mpa = 0, precision = 0, recall = 0, f1 = 0, mda = 0;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

/// Straight-line recomputation from the textbook definitions.
inline MetricsOracle brute_force_metrics(const std::vector<double>& actual,
                                         const std::vector<double>& predicted,
                                         const std::vector<double>& prev) {
  MetricsOracle o;
  const std::size_t n = actual.size();
  double sq = 0, rel = 0;
  std::size_t same = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sq += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
    rel += std::fabs(actual[i] - predicted[i]) / actual[i];
    const bool up_actual = actual[i] > prev[i];
    const bool up_pred = predicted[i] > prev[i];
    if (up_actual && up_pred) ++o.tp;
    if (!up_actual && up_pred) ++o.fp;
    if (up_actual && !up_pred) ++o.fn;
    if (!up_actual && !up_pred) ++o.tn;
    if (up_actual == up_pred) ++same;
  }
  o.mse = sq / n;
  o.mpa = 1.0 - rel / n;
  o.precision = (o.tp + o.fp) ? double(o.tp) / double(o.tp + o.fp) : 0.0;
  o.recall = (o.tp + o.fn) ? double(o.tp) / double(o.tp + o.fn) : 0.0;
  o.f1 = (o.precision + o.recall) > 0 ? 2 * o.precision * o.recall / (o.precision + o.recall) : 0.0;
  o.mda = double(same) / double(n);
  return o;
}

}  // namespace oracle
