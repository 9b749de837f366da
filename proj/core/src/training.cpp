// SPDX-License-Identifier: Apache-2.0
#include "newsblend/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace newsblend {

std::string_view to_string(CellKind k) noexcept { return k == CellKind::lstm ? "lstm" : "gru"; }

CellKind cell_kind_from_string(std::string_view name) {
  if (name == "lstm") return CellKind::lstm;
  if (name == "gru") return CellKind::gru;
  throw std::invalid_argument("unknown cell kind '" + std::string(name) + "'");
}

void ModelConfig::validate() const {
  auto bad = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("model config: " + field + " " + why);
  };
  if (layers < 1) bad("layers", "must be >= 1");
  if (hidden < 1) bad("hidden", "must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) bad("dropout", "must be in [0, 1)");
  if (epochs < 1) bad("epochs", "must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    bad("learning_rate", "must be finite and > 0");
  }
  if (!std::isfinite(clip_norm)) bad("clip_norm", "must be finite");
}

TrainingDiverged::TrainingDiverged(std::size_t epoch, double loss)
    : std::runtime_error("training loss became non-finite (" + std::to_string(loss) +
                         ") at epoch " + std::to_string(epoch)),
      epoch_(epoch) {}

std::size_t SequenceModel::parameter_count() const {
  std::size_t n = 0;
  for_each_tensor([&](std::string_view, const auto& t) { n += values(t).size(); });
  return n;
}

SequenceModel build_model(const ModelConfig& cfg, std::size_t feature_count) {
  cfg.validate();
  if (feature_count < 1) throw std::invalid_argument("build_model: feature_count must be >= 1");
  Rng rng(cfg.seed);
  SequenceModel model;
  model.config = cfg;
  model.input_size = feature_count;
  std::size_t in = feature_count;
  for (std::size_t k = 0; k < cfg.layers; ++k) {
    if (cfg.cell == CellKind::lstm) {
      model.layers.emplace_back(LstmParams::random(rng, in, cfg.hidden));
    } else {
      model.layers.emplace_back(GruParams::random(rng, in, cfg.hidden));
    }
    in = cfg.hidden;
  }
  model.head = DenseParams::random(rng, cfg.hidden, 1, Activation::identity);
  return model;
}

namespace {

struct LstmOps {
  using Params = LstmParams;
  using Cache = LstmCache;
  static constexpr bool with_cell = true;
  static auto forward(const Params& p, std::span<const double> x, const CellState& s) {
    return lstm_forward(p, x, s);
  }
  static CellInputGrads backward(const Params& p, const Cache& c, const CellState& g, Params& acc) {
    return lstm_backward_accumulate(p, c, g, acc);
  }
};

struct GruOps {
  using Params = GruParams;
  using Cache = GruCache;
  static constexpr bool with_cell = false;
  static auto forward(const Params& p, std::span<const double> x, const CellState& s) {
    return gru_forward(p, x, s);
  }
  static CellInputGrads backward(const Params& p, const Cache& c, const CellState& g, Params& acc) {
    return gru_backward_accumulate(p, c, g, acc);
  }
};

template <class Params>
struct OpsFor;
template <>
struct OpsFor<LstmParams> : LstmOps {};
template <>
struct OpsFor<GruParams> : GruOps {};

using LayerCaches = std::variant<std::vector<LstmCache>, std::vector<GruCache>>;

struct SampleTrace {
  std::vector<LayerCaches> caches;
  DenseCache head_cache;
  double prediction = 0.0;
};

void check_samples(const SequenceModel& model, std::span<const WindowSample> samples) {
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto& in = samples[s].inputs;
    if (in.rows() == 0 || in.cols() != model.input_size) {
      throw ShapeError("sample " + std::to_string(s) + " has inputs " + in.shape_string() +
                       ", model expects T x " + std::to_string(model.input_size));
    }
  }
}

std::vector<Vector> input_sequence(const Matrix& inputs) {
  std::vector<Vector> seq(inputs.rows());
  for (std::size_t t = 0; t < inputs.rows(); ++t) {
    const auto r = inputs.row(t);
    seq[t].assign(r.begin(), r.end());
  }
  return seq;
}

/// Runs one layer over the sequence in place. Caches are stored when `trace` is set.
template <class Params>
void run_layer(const Params& p, std::vector<Vector>& seq, const Vector* mask,
               LayerCaches* trace) {
  using Ops = OpsFor<Params>;
  std::vector<typename Ops::Cache>* caches = nullptr;
  if (trace) {
    *trace = std::vector<typename Ops::Cache>{};
    caches = &std::get<std::vector<typename Ops::Cache>>(*trace);
    caches->reserve(seq.size());
  }
  CellState state = CellState::zeros(p.hidden(), Ops::with_cell);
  for (auto& x : seq) {
    auto step = Ops::forward(p, x, state);
    state = std::move(step.next);
    x = state.h;
    if (mask) {
      for (std::size_t j = 0; j < x.size(); ++j) x[j] *= (*mask)[j];
    }
    if (caches) caches->push_back(std::move(step.cache));
  }
}

double forward_sample(const SequenceModel& model, const Matrix& inputs,
                      const std::vector<Vector>* masks, SampleTrace* trace) {
  auto seq = input_sequence(inputs);
  if (trace) trace->caches.resize(model.layers.size());
  for (std::size_t k = 0; k < model.layers.size(); ++k) {
    const Vector* mask = masks ? &(*masks)[k] : nullptr;
    LayerCaches* caches = trace ? &trace->caches[k] : nullptr;
    std::visit([&](const auto& p) { run_layer(p, seq, mask, caches); }, model.layers[k]);
  }
  auto head = dense_forward(model.head, seq.back());
  if (trace) {
    trace->head_cache = std::move(head.cache);
    trace->prediction = head.y[0];
  }
  return head.y[0];
}

template <class Params>
std::vector<Vector> backward_layer(const Params& p, const LayerCaches& trace,
                                   const std::vector<Vector>& d_out, const Vector* mask,
                                   Params& grads) {
  using Ops = OpsFor<Params>;
  const auto& caches = std::get<std::vector<typename Ops::Cache>>(trace);
  const std::size_t steps = caches.size();
  const std::size_t h = p.hidden();
  std::vector<Vector> d_in(steps);
  CellState carry = CellState::zeros(h, Ops::with_cell);
  for (std::size_t t = steps; t-- > 0;) {
    CellState g = std::move(carry);
    for (std::size_t j = 0; j < h; ++j) {
      const double up = mask ? d_out[t][j] * (*mask)[j] : d_out[t][j];
      g.h[j] += up;
    }
    auto res = Ops::backward(p, caches[t], g, grads);
    d_in[t] = std::move(res.grad_x);
    carry = std::move(res.grad_prev);
  }
  return d_in;
}

void backward_sample(const SequenceModel& model, const SampleTrace& trace, double d_pred,
                     const std::vector<Vector>* masks, SequenceModel& grads) {
  const Vector d_y{d_pred};
  Vector d_top = dense_backward_accumulate(model.head, trace.head_cache, d_y, grads.head);
  const std::size_t steps =
      std::visit([](const auto& v) { return v.size(); }, trace.caches.back());
  std::vector<Vector> d_seq(steps, Vector(model.config.hidden, 0.0));
  d_seq.back() = std::move(d_top);
  for (std::size_t k = model.layers.size(); k-- > 0;) {
    const Vector* mask = masks ? &(*masks)[k] : nullptr;
    std::visit(
        [&](const auto& p) {
          using P = std::decay_t<decltype(p)>;
          d_seq = backward_layer(p, trace.caches[k], d_seq, mask, std::get<P>(grads.layers[k]));
        },
        model.layers[k]);
  }
}

/// Loss and gradient over the batch; masks[s] holds per-layer masks for sample s.
double accumulate_batch(const SequenceModel& model, std::span<const WindowSample> samples,
                        const std::vector<std::vector<Vector>>* masks, SequenceModel& grads) {
  const double n = static_cast<double>(samples.size());
  double loss = 0.0;
  SampleTrace trace;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto* m = masks ? &(*masks)[s] : nullptr;
    const double pred = forward_sample(model, samples[s].inputs, m, &trace);
    const double err = pred - samples[s].target;
    loss += err * err;
    backward_sample(model, trace, 2.0 * err / n, m, grads);
  }
  return loss / n;
}

}  // namespace

TrainResult train(SequenceModel model, std::span<const WindowSample> samples) {
  model.config.validate();
  if (samples.empty()) throw std::invalid_argument("train: no samples");
  check_samples(model, samples);

  const auto started = std::chrono::steady_clock::now();
  const ModelConfig& cfg = model.config;
  Rng dropout_rng(mix_seed(cfg.seed, 1));
  Optimizer opt(cfg.optimizer, cfg.learning_rate);
  SequenceModel grads = zeros_like(model);
  auto param_views = parameter_spans(model);
  auto grad_views = parameter_spans(grads);

  TrainTrace trace;
  trace.epoch_loss.reserve(cfg.epochs);
  std::vector<std::vector<Vector>> masks;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const bool use_dropout = cfg.dropout > 0.0;
    if (use_dropout) {
      masks.assign(samples.size(), {});
      for (auto& per_sample : masks) {
        per_sample.reserve(model.layers.size());
        for (std::size_t k = 0; k < model.layers.size(); ++k) {
          per_sample.push_back(dropout_mask(dropout_rng, cfg.hidden, cfg.dropout));
        }
      }
    }
    for (auto& g : grad_views) std::fill(g.begin(), g.end(), 0.0);
    const double loss = accumulate_batch(model, samples, use_dropout ? &masks : nullptr, grads);
    if (!std::isfinite(loss) || !std::all_of(grad_views.begin(), grad_views.end(),
                                             [](auto g) { return all_finite(g); })) {
      throw TrainingDiverged(epoch, loss);
    }
    trace.epoch_loss.push_back(loss);
    clip_global_norm(grad_views, cfg.clip_norm);
    opt.step(param_views, grad_views);
  }
  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return TrainResult{std::move(model), std::move(trace)};
}

double predict_one(const SequenceModel& model, const Matrix& inputs) {
  if (inputs.rows() == 0 || inputs.cols() != model.input_size) {
    throw ShapeError("predict: inputs " + inputs.shape_string() + ", model expects T x " +
                     std::to_string(model.input_size));
  }
  return forward_sample(model, inputs, nullptr, nullptr);
}

Vector predict(const SequenceModel& model, std::span<const WindowSample> samples) {
  check_samples(model, samples);
  Vector out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(forward_sample(model, s.inputs, nullptr, nullptr));
  return out;
}

double mse_loss(const SequenceModel& model, std::span<const WindowSample> samples) {
  if (samples.empty()) throw std::invalid_argument("mse_loss: no samples");
  const Vector pred = predict(model, samples);
  double acc = 0.0;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const double e = pred[s] - samples[s].target;
    acc += e * e;
  }
  return acc / static_cast<double>(samples.size());
}

LossGradient loss_gradient(const SequenceModel& model, std::span<const WindowSample> samples) {
  if (samples.empty()) throw std::invalid_argument("loss_gradient: no samples");
  check_samples(model, samples);
  LossGradient out{0.0, zeros_like(model)};
  out.loss = accumulate_batch(model, samples, nullptr, out.gradient);
  return out;
}

}  // namespace newsblend
