// SPDX-License-Identifier: Apache-2.0
#include "newsblend/model_io.hpp"

#include <cmath>
#include <type_traits>

#include "json.hpp"
#include "newsblend/csv.hpp"

namespace newsblend {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "newsblend.model";
constexpr int kVersion = 1;

template <class T>
json tensor_json(std::string_view name, const T& t) {
  json out;
  out["name"] = name;
  if constexpr (std::is_same_v<T, Matrix>) {
    out["shape"] = {t.rows(), t.cols()};
    out["data"] = std::vector<double>(t.values().begin(), t.values().end());
  } else {
    out["shape"] = {t.size()};
    out["data"] = t;
  }
  return out;
}

template <class Model>
json tensors_json(const Model& m) {
  json arr = json::array();
  m.for_each_tensor([&](std::string_view name, const auto& t) { arr.push_back(tensor_json(name, t)); });
  return arr;
}

std::vector<double> read_data(const json& j, std::size_t expected, std::string_view name) {
  if (!j.is_array() || j.size() != expected) {
    throw ModelFormatError("tensor " + std::string(name) + ": expected " +
                           std::to_string(expected) + " values");
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& v : j) {
    if (!v.is_number()) throw ModelFormatError("tensor " + std::string(name) + ": non-numeric value");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ModelFormatError("tensor " + std::string(name) + ": non-finite value");
    out.push_back(d);
  }
  return out;
}

/// Fills the tensors of a correctly shaped model from the document, in order.
template <class Model>
void fill_tensors(Model& m, const json& arr) {
  if (!arr.is_array()) throw ModelFormatError("'tensors' must be an array");
  std::size_t k = 0;
  m.for_each_tensor([&](std::string_view name, auto& t) {
    if (k >= arr.size()) throw ModelFormatError("missing tensor " + std::string(name));
    const json& e = arr[k++];
    if (e.value("name", std::string{}) != name) {
      throw ModelFormatError("expected tensor " + std::string(name) + ", found '" +
                             e.value("name", std::string{}) + "'");
    }
    const auto shape = e.at("shape").get<std::vector<std::size_t>>();
    using T = std::decay_t<decltype(t)>;
    if constexpr (std::is_same_v<T, Matrix>) {
      if (shape != std::vector<std::size_t>{t.rows(), t.cols()}) {
        throw ModelFormatError("tensor " + std::string(name) + ": shape mismatch, expected " +
                               t.shape_string());
      }
      const auto data = read_data(e.at("data"), t.size(), name);
      std::copy(data.begin(), data.end(), t.values().begin());
    } else {
      if (shape != std::vector<std::size_t>{t.size()}) {
        throw ModelFormatError("tensor " + std::string(name) + ": shape mismatch, expected [" +
                               std::to_string(t.size()) + "]");
      }
      t = read_data(e.at("data"), t.size(), name);
    }
  });
  if (k != arr.size()) throw ModelFormatError("unexpected extra tensors");
}

json parse_document(std::string_view text, std::string_view kind) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ModelFormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", std::string{}) != kFormat) {
    throw ModelFormatError("not a newsblend model document");
  }
  if (doc.value("version", 0) != kVersion) {
    throw ModelFormatError("unsupported model version " + doc.value("version", json{}).dump());
  }
  if (doc.value("kind", std::string{}) != kind) {
    throw ModelFormatError("expected kind '" + std::string(kind) + "', found '" +
                           doc.value("kind", std::string{}) + "'");
  }
  return doc;
}

json header(std::string_view kind) {
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["kind"] = kind;
  return doc;
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ModelFormatError(std::string("malformed model document: ") + e.what());
  }
}

}  // namespace

std::string to_json(const SequenceModel& model) {
  json doc = header("sequence_model");
  const auto& c = model.config;
  doc["config"] = {{"cell", to_string(c.cell)},
                   {"layers", c.layers},
                   {"hidden", c.hidden},
                   {"dropout", c.dropout},
                   {"epochs", c.epochs},
                   {"learning_rate", c.learning_rate},
                   {"optimizer", to_string(c.optimizer)},
                   {"clip_norm", c.clip_norm},
                   {"seed", c.seed}};
  doc["input_size"] = model.input_size;
  doc["tensors"] = tensors_json(model);
  return doc.dump(1);
}

SequenceModel sequence_model_from_json(std::string_view text) {
  return guarded([&] {
    const json doc = parse_document(text, "sequence_model");
    const json& jc = doc.at("config");
    ModelConfig c;
    c.cell = cell_kind_from_string(jc.at("cell").get<std::string>());
    c.layers = jc.at("layers").get<std::size_t>();
    c.hidden = jc.at("hidden").get<std::size_t>();
    c.dropout = jc.at("dropout").get<double>();
    c.epochs = jc.at("epochs").get<std::size_t>();
    c.learning_rate = jc.at("learning_rate").get<double>();
    c.optimizer = optimizer_from_string(jc.at("optimizer").get<std::string>());
    c.clip_norm = jc.at("clip_norm").get<double>();
    c.seed = jc.at("seed").get<std::uint64_t>();
    const auto input = doc.at("input_size").get<std::size_t>();
    if (input == 0) throw ModelFormatError("input_size must be >= 1");
    SequenceModel model = build_model(c, input);
    fill_tensors(model, doc.at("tensors"));
    return model;
  });
}

std::string to_json(const MetaLearner& meta) {
  json doc = header("meta_learner");
  const auto& c = meta.config;
  doc["config"] = {{"hidden1", c.hidden1},
                   {"hidden2", c.hidden2},
                   {"learning_rate", c.learning_rate},
                   {"epochs", c.epochs},
                   {"seed", c.seed}};
  doc["input_size"] = meta.input_size();
  doc["standardization"] = {{"input_mean", meta.input_mean},
                            {"input_scale", meta.input_scale},
                            {"output_mean", meta.output_mean},
                            {"output_scale", meta.output_scale}};
  doc["tensors"] = tensors_json(meta);
  return doc.dump(1);
}

MetaLearner meta_learner_from_json(std::string_view text) {
  return guarded([&] {
    const json doc = parse_document(text, "meta_learner");
    const json& jc = doc.at("config");
    MetaLearnerConfig c;
    c.hidden1 = jc.at("hidden1").get<std::size_t>();
    c.hidden2 = jc.at("hidden2").get<std::size_t>();
    c.learning_rate = jc.at("learning_rate").get<double>();
    c.epochs = jc.at("epochs").get<std::size_t>();
    c.seed = jc.at("seed").get<std::uint64_t>();
    const auto input = doc.at("input_size").get<std::size_t>();
    MetaLearner meta = MetaLearner::initialize(c, input);
    const json& js = doc.at("standardization");
    meta.input_mean = read_data(js.at("input_mean"), input, "input_mean");
    meta.input_scale = read_data(js.at("input_scale"), input, "input_scale");
    meta.output_mean = read_data(json::array({js.at("output_mean")}), 1, "output_mean")[0];
    meta.output_scale = read_data(json::array({js.at("output_scale")}), 1, "output_scale")[0];
    fill_tensors(meta, doc.at("tensors"));
    return meta;
  });
}

std::string to_json(const WeightVector& w) {
  json doc = header("weight_vector");
  doc["weights"] = w.weights;
  return doc.dump(1);
}

WeightVector weight_vector_from_json(std::string_view text) {
  return guarded([&] {
    const json doc = parse_document(text, "weight_vector");
    const json& jw = doc.at("weights");
    WeightVector w{read_data(jw, jw.size(), "weights")};
    try {
      w.validate();
    } catch (const std::invalid_argument& e) {
      throw ModelFormatError(e.what());
    }
    return w;
  });
}

template <class Model>
void save_model(const std::filesystem::path& path, const Model& model) {
  write_file_atomic(path, to_json(model) + "\n");
}

template void save_model(const std::filesystem::path&, const SequenceModel&);
template void save_model(const std::filesystem::path&, const MetaLearner&);
template void save_model(const std::filesystem::path&, const WeightVector&);

SequenceModel load_sequence_model(const std::filesystem::path& path) {
  return sequence_model_from_json(read_text_file(path));
}

MetaLearner load_meta_learner(const std::filesystem::path& path) {
  return meta_learner_from_json(read_text_file(path));
}

WeightVector load_weight_vector(const std::filesystem::path& path) {
  return weight_vector_from_json(read_text_file(path));
}

}  // namespace newsblend
