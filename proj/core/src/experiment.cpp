// SPDX-License-Identifier: Apache-2.0
#include "newsblend/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <map>
#include <set>

#include "json.hpp"
#include "newsblend/csv.hpp"

#ifndef NEWSBLEND_VERSION
#define NEWSBLEND_VERSION "0.0.0"
#endif

namespace newsblend {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

StageError::StageError(std::string stage, const std::string& cause)
    : std::runtime_error(stage + ": " + cause), stage_(std::move(stage)) {}

namespace {

bool is_model_name(std::string_view name) {
  return std::find(kModelNames.begin(), kModelNames.end(), name) != kModelNames.end();
}

bool selected(const ExperimentConfig& cfg, std::string_view name) {
  return std::find(cfg.models.begin(), cfg.models.end(), name) != cfg.models.end();
}

bool needs_combiner(const ExperimentConfig& cfg) {
  return selected(cfg, "averaging") || selected(cfg, "weighted_average") ||
         selected(cfg, "blending");
}

template <class F>
auto in_stage(std::string_view stage, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(std::string(stage), e.what());
  }
}

// ---- config JSON -----------------------------------------------------------

void reject_unknown(const ojson& obj, std::initializer_list<std::string_view> allowed,
                    std::string_view where) {
  if (!obj.is_object()) throw std::invalid_argument(std::string(where) + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw std::invalid_argument(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  if (path.empty() || path.is_absolute() || base.empty()) return path;
  return base / path;
}

DateRange range_from_json(const ojson& j, std::string_view name) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("split." + std::string(name) + ": expected [first, last]");
  }
  DateRange r;
  for (int k = 0; k < 2; ++k) {
    const auto text = j[static_cast<std::size_t>(k)].get<std::string>();
    const auto fmt = detect_date_format(text);
    if (!fmt) throw std::invalid_argument("split." + std::string(name) + ": bad date '" + text + "'");
    (k == 0 ? r.first : r.last) = parse_date(text, *fmt);
  }
  return r;
}

void model_from_json(const ojson& j, ModelConfig& m, std::string_view where) {
  reject_unknown(j,
                 {"layers", "hidden", "dropout", "epochs", "learning_rate", "optimizer", "clip_norm",
                  "seed"},
                 where);
  if (j.contains("layers")) m.layers = j["layers"].get<std::size_t>();
  if (j.contains("hidden")) m.hidden = j["hidden"].get<std::size_t>();
  if (j.contains("dropout")) m.dropout = j["dropout"].get<double>();
  if (j.contains("epochs")) m.epochs = j["epochs"].get<std::size_t>();
  if (j.contains("learning_rate")) m.learning_rate = j["learning_rate"].get<double>();
  if (j.contains("optimizer")) m.optimizer = optimizer_from_string(j["optimizer"].get<std::string>());
  if (j.contains("clip_norm")) m.clip_norm = j["clip_norm"].get<double>();
}

ojson model_to_json(const ModelConfig& m) {
  return ojson{{"layers", m.layers},
               {"hidden", m.hidden},
               {"dropout", m.dropout},
               {"epochs", m.epochs},
               {"learning_rate", m.learning_rate},
               {"optimizer", to_string(m.optimizer)},
               {"clip_norm", m.clip_norm},
               {"seed", m.seed}};
}

ojson metrics_json(const EvalReport& r) {
  return ojson{{"mse", r.mse},
               {"mpa", r.mpa},
               {"precision", r.precision},
               {"recall", r.recall},
               {"f1", r.f1},
               {"mda", r.mda},
               {"precision_degenerate", r.precision_degenerate},
               {"recall_degenerate", r.recall_degenerate},
               {"f1_degenerate", r.f1_degenerate},
               {"confusion",
                {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"fn", r.confusion.fn},
                 {"tn", r.confusion.tn}}},
               {"n", r.n}};
}

std::optional<double> parse_real(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

Date parse_any_date(const std::string& text, const std::string& source, std::size_t line) {
  const auto fmt = detect_date_format(text);
  if (!fmt) throw DataError(source, line, "unparseable date '" + text + "'");
  try {
    return parse_date(text, *fmt);
  } catch (const std::invalid_argument& e) {
    throw DataError(source, line, e.what());
  }
}

// ---- pipeline pieces -------------------------------------------------------

LoadedDataset load_inputs(const ExperimentConfig& cfg) {
  if (!cfg.data.empty()) return load_csv(cfg.data);
  const Lexicon lex = parse_lexicon(cfg.lexicon);
  const auto days = score_headlines_csv(cfg.headlines, lex);
  return parse_dataset_csv(compounds_csv(days, cfg.prices), cfg.headlines.string());
}

Vector unscale_all(const ScalerParams& s, std::span<const double> scaled) {
  Vector out(scaled.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) out[i] = s.unscale(scaled[i]);
  return out;
}

Vector targets_of(std::span<const WindowSample> samples) {
  Vector out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.target);
  return out;
}

struct Level0Run {
  Vector validation;
  Vector test;
  double final_loss = 0.0;
};

Level0Run run_level0(const ModelConfig& cfg, const WindowedSplits& w) {
  auto result = train(build_model(cfg, kFeatureCount), w.train);
  return Level0Run{predict(result.model, w.validation), predict(result.model, w.test),
                   result.trace.epoch_loss.back()};
}

void write_all(const std::vector<std::pair<fs::path, std::string>>& files) {
  std::vector<fs::path> written;
  try {
    for (const auto& [path, content] : files) {
      write_file_atomic(path, content);
      written.push_back(path);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) fs::remove(p, ec);
    throw;
  }
}

std::vector<std::pair<fs::path, std::string>> plot_files(const RunReport& r, const fs::path& dir) {
  std::string series = "date,series,value\n";
  for (std::size_t i = 0; i < r.dates.size(); ++i) {
    const std::string d = format_date(r.dates[i]);
    series += d + ",actual," + format_double(r.actual[i]) + "\n";
    for (const auto& m : r.models) {
      series += d + "," + csv_escape(m.name) + "," + format_double(m.predicted[i]) + "\n";
    }
  }
  std::string bars = "model,metric,value\n";
  for (const auto& m : r.models) {
    const std::pair<const char*, double> values[] = {{"MSE", m.eval.mse},
                                                     {"Precision", m.eval.precision},
                                                     {"Recall", m.eval.recall},
                                                     {"F1", m.eval.f1},
                                                     {"MDA", m.eval.mda}};
    for (const auto& [metric, v] : values) {
      bars += csv_escape(m.name) + "," + metric + "," + format_double(v) + "\n";
    }
  }
  return {{dir / "plot_series.csv", std::move(series)}, {dir / "plot_metrics.csv", std::move(bars)}};
}

}  // namespace

// ---- ExperimentConfig -------------------------------------------------------

void ExperimentConfig::set_seed(std::uint64_t s) {
  seed = s;
  lstm.seed = s;
  gru.seed = s + 1;
  meta.seed = s + 2;
}

void ExperimentConfig::set_models(std::string_view list) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto comma = list.find(',', pos);
    auto item = list.substr(pos, comma == std::string_view::npos ? list.npos : comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  models = std::move(out);
}

void ExperimentConfig::validate() const {
  if (models.empty()) throw std::invalid_argument("models: at least one model must be selected");
  std::set<std::string> seen;
  for (const auto& m : models) {
    if (!is_model_name(m)) {
      throw std::invalid_argument("models: unknown model '" + m +
                                  "' (expected lstm, gru, averaging, weighted_average, blending)");
    }
    if (!seen.insert(m).second) throw std::invalid_argument("models: '" + m + "' listed twice");
  }
  const bool combined = !headlines.empty() || !prices.empty() || !lexicon.empty();
  if (data.empty() == !combined) {
    throw std::invalid_argument("data: give either 'data' or 'headlines' + 'prices' + 'lexicon'");
  }
  if (combined && (headlines.empty() || prices.empty() || lexicon.empty())) {
    throw std::invalid_argument("data: 'headlines', 'prices' and 'lexicon' must all be set");
  }
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  split.validate();
  lstm.validate();
  gru.validate();
  if (lstm.cell != CellKind::lstm || gru.cell != CellKind::gru) {
    throw std::invalid_argument("lstm/gru: cell kinds are fixed");
  }
  meta.validate();
  if (!(weight_step > 0.0 && weight_step <= 1.0)) {
    throw std::invalid_argument("weight_step must be in (0, 1]");
  }
  if (!out.empty()) {
    const auto out_norm = fs::absolute(out).lexically_normal();
    for (const auto* in : {&data, &headlines, &prices, &lexicon}) {
      if (in->empty()) continue;
      const auto norm = fs::absolute(*in).lexically_normal();
      if (norm == out_norm || norm.parent_path() == out_norm) {
        throw std::invalid_argument("out: output directory must not hold input " + in->string());
      }
    }
  }
}

ExperimentConfig ExperimentConfig::from_json(std::string_view text, const fs::path& base_dir) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const ojson::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    reject_unknown(j,
                   {"data", "headlines", "prices", "lexicon", "split", "window", "split_mode",
                    "scaler_fit", "lstm", "gru", "meta", "weight_step", "models", "seed", "out",
                    "emit_plots"},
                   "config");
    for (const auto& [key, field] :
         {std::pair{"data", &cfg.data}, std::pair{"headlines", &cfg.headlines},
          std::pair{"prices", &cfg.prices}, std::pair{"lexicon", &cfg.lexicon},
          std::pair{"out", &cfg.out}}) {
      if (j.contains(key)) *field = resolve(base_dir, j[key].get<std::string>());
    }
    if (j.contains("split")) {
      const auto& s = j["split"];
      reject_unknown(s, {"train", "validation", "test"}, "split");
      if (s.contains("train")) cfg.split.train = range_from_json(s["train"], "train");
      if (s.contains("validation")) cfg.split.validation = range_from_json(s["validation"], "validation");
      if (s.contains("test")) cfg.split.test = range_from_json(s["test"], "test");
    }
    if (j.contains("window")) cfg.window = j["window"].get<std::size_t>();
    if (j.contains("split_mode")) {
      cfg.split_mode = window_assignment_from_string(j["split_mode"].get<std::string>());
    }
    if (j.contains("scaler_fit")) {
      const auto v = j["scaler_fit"].get<std::string>();
      if (v == "train") cfg.scaler_fit = ScalerFit::train;
      else if (v == "full_series") cfg.scaler_fit = ScalerFit::full_series;
      else throw std::invalid_argument("scaler_fit: expected train or full_series");
    }
    if (j.contains("lstm")) model_from_json(j["lstm"], cfg.lstm, "lstm");
    if (j.contains("gru")) model_from_json(j["gru"], cfg.gru, "gru");
    if (j.contains("meta")) {
      const auto& m = j["meta"];
      reject_unknown(m, {"hidden1", "hidden2", "learning_rate", "epochs", "seed"}, "meta");
      if (m.contains("hidden1")) cfg.meta.hidden1 = m["hidden1"].get<std::size_t>();
      if (m.contains("hidden2")) cfg.meta.hidden2 = m["hidden2"].get<std::size_t>();
      if (m.contains("learning_rate")) cfg.meta.learning_rate = m["learning_rate"].get<double>();
      if (m.contains("epochs")) cfg.meta.epochs = m["epochs"].get<std::size_t>();
    }
    if (j.contains("weight_step")) cfg.weight_step = j["weight_step"].get<double>();
    if (j.contains("models")) cfg.models = j["models"].get<std::vector<std::string>>();
    if (j.contains("emit_plots")) cfg.emit_plots = j["emit_plots"].get<bool>();
    cfg.set_seed(j.contains("seed") ? j["seed"].get<std::uint64_t>() : 0);
    // Per-model seeds are derived from `seed`; they may appear (as in a report
    // echo) but must agree with the derivation.
    for (const auto& [key, derived] : {std::pair{"lstm", cfg.lstm.seed}, std::pair{"gru", cfg.gru.seed},
                                       std::pair{"meta", cfg.meta.seed}}) {
      if (j.contains(key) && j[key].contains("seed") &&
          j[key]["seed"].get<std::uint64_t>() != derived) {
        throw std::invalid_argument(std::string(key) + ".seed must be " + std::to_string(derived) +
                                    " (derived from seed); set the top-level seed instead");
      }
    }
  } catch (const ojson::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const fs::path& path) {
  return from_json(read_text_file(path), path.parent_path());
}

std::string ExperimentConfig::to_json() const {
  ojson j;
  if (!data.empty()) j["data"] = data.string();
  if (!headlines.empty()) j["headlines"] = headlines.string();
  if (!prices.empty()) j["prices"] = prices.string();
  if (!lexicon.empty()) j["lexicon"] = lexicon.string();
  j["split"] = {{"train", {format_date(split.train.first), format_date(split.train.last)}},
                {"validation",
                 {format_date(split.validation.first), format_date(split.validation.last)}},
                {"test", {format_date(split.test.first), format_date(split.test.last)}}};
  j["window"] = window;
  j["split_mode"] = to_string(split_mode);
  j["scaler_fit"] = scaler_fit == ScalerFit::train ? "train" : "full_series";
  j["lstm"] = model_to_json(lstm);
  j["gru"] = model_to_json(gru);
  j["meta"] = {{"hidden1", meta.hidden1},
               {"hidden2", meta.hidden2},
               {"learning_rate", meta.learning_rate},
               {"epochs", meta.epochs},
               {"seed", meta.seed}};
  j["weight_step"] = weight_step;
  j["models"] = models;
  j["seed"] = seed;
  return j.dump(2);
}

// ---- RunReport ---------------------------------------------------------------

const ModelOutcome* RunReport::find(std::string_view name) const noexcept {
  for (const auto& m : models) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

std::string report_to_json(const RunReport& r) {
  ojson j;
  j["version"] = r.version;
  // The output directory is left out so reports are comparable across locations.
  j["config"] = ojson::parse(r.config.to_json());
  j["data"] = {{"records", r.records},
               {"dropped_rows", r.dropped_rows},
               {"train_samples", r.train_samples},
               {"validation_samples", r.validation_samples},
               {"test_samples", r.dates.size()}};
  j["scaler"] = {{"min", r.scaler.min}, {"max", r.scaler.max}};
  ojson training = ojson::object();
  if (r.lstm_final_loss) training["lstm_final_loss"] = *r.lstm_final_loss;
  if (r.gru_final_loss) training["gru_final_loss"] = *r.gru_final_loss;
  j["training"] = training;
  if (r.weights) j["weights"] = r.weights->weights;
  ojson models = ojson::array();
  for (const auto& m : r.models) models.push_back({{"name", m.name}, {"metrics", metrics_json(m.eval)}});
  j["models"] = models;
  ojson preds;
  ojson dates = ojson::array();
  for (const auto& d : r.dates) dates.push_back(format_date(d));
  preds["dates"] = dates;
  preds["actual"] = r.actual;
  preds["prev_actual"] = r.prev_actual;
  for (const auto& m : r.models) preds[m.name] = m.predicted;
  j["predictions"] = preds;
  return j.dump(2) + "\n";
}

std::string predictions_csv(const RunReport& r) {
  std::string out = "date,actual,prev_actual";
  for (const auto& m : r.models) out += "," + csv_escape(m.name);
  out += "\n";
  for (std::size_t i = 0; i < r.dates.size(); ++i) {
    out += format_date(r.dates[i]) + "," + format_double(r.actual[i]) + "," +
           format_double(r.prev_actual[i]);
    for (const auto& m : r.models) out += "," + format_double(m.predicted[i]);
    out += "\n";
  }
  return out;
}

std::string metrics_table(const RunReport& r) {
  std::vector<NamedReport> named;
  for (const auto& m : r.models) named.emplace_back(m.name, m.eval);
  return format_table(named);
}

std::vector<fs::path> emit_plot_data(const RunReport& report, const fs::path& dir) {
  if (report.dates.empty()) throw std::invalid_argument("emit_plot_data: report has no predictions");
  fs::create_directories(dir);
  const auto files = plot_files(report, dir);
  write_all(files);
  std::vector<fs::path> paths;
  for (const auto& [p, _] : files) paths.push_back(p);
  return paths;
}

// ---- pipeline ------------------------------------------------------------------

RunReport run_experiment(const ExperimentConfig& cfg) {
  in_stage("config", [&] { cfg.validate(); });

  RunReport report;
  report.version = std::string("newsblend ") + NEWSBLEND_VERSION;
  report.config = cfg;

  const auto loaded = in_stage("load", [&] { return load_inputs(cfg); });
  report.records = loaded.records.size();
  report.dropped_rows = loaded.dropped_rows;

  report.scaler = in_stage("scale", [&] {
    if (cfg.scaler_fit == ScalerFit::full_series) return fit_scaler(loaded.records);
    const auto train_days = records_in(loaded.records, cfg.split.train);
    if (train_days.empty()) throw std::invalid_argument("no records inside the training range");
    return fit_scaler(train_days);
  });

  const auto windows = in_stage("window", [&] {
    return make_windows(loaded.records, report.scaler, cfg.split, cfg.window, cfg.split_mode);
  });
  report.train_samples = windows.train.size();
  report.validation_samples = windows.validation.size();

  const bool combine = needs_combiner(cfg);
  const bool want_lstm = combine || selected(cfg, "lstm");
  const bool want_gru = combine || selected(cfg, "gru");

  std::optional<Level0Run> lstm_run, gru_run;
  in_stage("train", [&] {
    // The two sub-models are independent; each is deterministic in its own seed.
    std::future<Level0Run> gru_future;
    if (want_gru) {
      gru_future = std::async(std::launch::async, [&] { return run_level0(cfg.gru, windows); });
    }
    std::exception_ptr lstm_error;
    try {
      if (want_lstm) lstm_run = run_level0(cfg.lstm, windows);
    } catch (...) {
      lstm_error = std::current_exception();
    }
    if (want_gru) {
      try {
        gru_run = gru_future.get();
      } catch (const std::exception& e) {
        throw StageError("train[gru]", e.what());
      }
    }
    if (lstm_error) {
      try {
        std::rethrow_exception(lstm_error);
      } catch (const std::exception& e) {
        throw StageError("train[lstm]", e.what());
      }
    }
  });
  if (lstm_run) report.lstm_final_loss = lstm_run->final_loss;
  if (gru_run) report.gru_final_loss = gru_run->final_loss;

  std::map<std::string, Vector, std::less<>> scaled_test;
  if (lstm_run) scaled_test["lstm"] = lstm_run->test;
  if (gru_run) scaled_test["gru"] = gru_run->test;

  in_stage("combine", [&] {
    if (!combine) return;
    const auto val = Level0Predictions::from_columns({lstm_run->validation, gru_run->validation},
                                                     {"lstm", "gru"});
    const auto test = Level0Predictions::from_columns({lstm_run->test, gru_run->test}, {"lstm", "gru"});
    const Vector val_targets = targets_of(windows.validation);
    if (selected(cfg, "averaging")) scaled_test["averaging"] = average_predict(test);
    if (selected(cfg, "weighted_average")) {
      report.weights = weighted_average_fit(val, val_targets, cfg.weight_step);
      scaled_test["weighted_average"] = weighted_average_predict(*report.weights, test);
    }
    if (selected(cfg, "blending")) {
      const auto meta = blend_fit(val, val_targets, cfg.meta);
      scaled_test["blending"] = blend_predict(meta, test);
    }
  });

  in_stage("evaluate", [&] {
    for (const auto& s : windows.test) {
      report.dates.push_back(s.target_date);
      report.actual.push_back(s.target_close);
      report.prev_actual.push_back(s.prev_actual_close);
    }
    for (const auto& name : cfg.models) {
      ModelOutcome m;
      m.name = name;
      m.predicted = unscale_all(report.scaler, scaled_test.at(name));
      m.eval = evaluate(report.actual, m.predicted, report.prev_actual);
      report.models.push_back(std::move(m));
    }
  });

  if (!cfg.out.empty()) {
    in_stage("write", [&] {
      fs::create_directories(cfg.out);
      std::vector<std::pair<fs::path, std::string>> files{
          {cfg.out / "report.json", report_to_json(report)},
          {cfg.out / "predictions.csv", predictions_csv(report)},
          {cfg.out / "table.txt", metrics_table(report)}};
      if (cfg.emit_plots) {
        for (auto& f : plot_files(report, cfg.out)) files.push_back(std::move(f));
      }
      write_all(files);
    });
  }
  return report;
}

// ---- score / eval helpers --------------------------------------------------------

std::string compounds_csv(const std::vector<DailySentiment>& days, const fs::path& prices) {
  std::string out = std::string(kDatasetHeader) + "\n";
  auto emit = [&](Date d, const DailySentiment* day, const std::string& price) {
    out += format_date(d);
    for (std::size_t j = 0; j < kNewsSources.size(); ++j) {
      out += ",";
      if (day && day->compounds[j]) out += format_double(*day->compounds[j]);
    }
    out += "," + price + "\n";
  };

  if (prices.empty()) {
    for (const auto& d : days) emit(d.date, &d, "");
    return out;
  }

  const std::string source = prices.string();
  const auto rows = parse_csv(read_text_file(prices), source);
  if (rows.empty()) throw DataError(source, 0, "prices file is empty");
  const auto& h = rows.front().fields;
  if (h.size() != 2 || h[0] != "date" || h[1] != "adj_close") {
    throw DataError(source, rows.front().line, "header must be 'date,adj_close'");
  }
  std::map<Date, const DailySentiment*> by_date;
  for (const auto& d : days) by_date[d.date] = &d;
  std::map<Date, std::string> price_rows;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != 2) throw DataError(source, row.line, "expected 2 fields");
    const Date d = parse_any_date(row.fields[0], source, row.line);
    if (!price_rows.emplace(d, row.fields[1]).second) {
      throw DataError(source, row.line, "duplicate date " + format_date(d));
    }
  }
  for (const auto& [d, price] : price_rows) {
    const auto it = by_date.find(d);
    emit(d, it == by_date.end() ? nullptr : it->second, price);
  }
  return out;
}

PredictionsFile parse_predictions_csv(std::string_view text, const std::string& source) {
  const auto rows = parse_csv(text, source);
  if (rows.empty()) throw DataError(source, 0, "predictions file is empty");
  const auto& h = rows.front().fields;
  if (h.size() < 4 || h[0] != "date" || h[1] != "actual" || h[2] != "prev_actual") {
    throw DataError(source, rows.front().line,
                    "header must be 'date,actual,prev_actual,<model>[,<model>...]'");
  }
  PredictionsFile f;
  f.models.assign(h.begin() + 3, h.end());
  f.predicted.resize(f.models.size());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != h.size()) {
      throw DataError(source, row.line, "expected " + std::to_string(h.size()) + " fields");
    }
    f.dates.push_back(parse_any_date(row.fields[0], source, row.line));
    std::vector<double> nums;
    for (std::size_t j = 1; j < row.fields.size(); ++j) {
      const auto v = parse_real(row.fields[j]);
      if (!v) throw DataError(source, row.line, "column " + h[j] + ": unparseable number");
      nums.push_back(*v);
    }
    f.actual.push_back(nums[0]);
    f.prev_actual.push_back(nums[1]);
    for (std::size_t m = 0; m < f.models.size(); ++m) f.predicted[m].push_back(nums[2 + m]);
  }
  if (f.dates.empty()) throw DataError(source, 0, "predictions file has no rows");
  return f;
}

std::vector<NamedReport> evaluate_predictions(const PredictionsFile& f) {
  std::vector<NamedReport> out;
  for (std::size_t m = 0; m < f.models.size(); ++m) {
    out.emplace_back(f.models[m], evaluate(f.actual, f.predicted[m], f.prev_actual));
  }
  return out;
}

std::string eval_reports_json(std::span<const NamedReport> reports) {
  ojson arr = ojson::array();
  for (const auto& [name, rep] : reports) arr.push_back({{"name", name}, {"metrics", metrics_json(rep)}});
  return arr.dump(2) + "\n";
}

}  // namespace newsblend
