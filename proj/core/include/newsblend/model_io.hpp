// SPDX-License-Identifier: Apache-2.0
/**
 * @file   model_io.hpp
 * @brief  JSON persistence for trained models.
 *
 * Document layout:
 *
 *     {"format": "newsblend.model", "version": 1, "kind": "...",
 *      "config": {...}, "tensors": [{"name", "shape", "data"}, ...]}
 *
 * Numbers are written in shortest round-trip form, so save/load is bit-exact.
 */
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "newsblend/ensemble.hpp"
#include "newsblend/training.hpp"

namespace newsblend {

/// Malformed or mismatched model document.
class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_json(const SequenceModel& model);
std::string to_json(const MetaLearner& meta);
std::string to_json(const WeightVector& w);

SequenceModel sequence_model_from_json(std::string_view text);
MetaLearner meta_learner_from_json(std::string_view text);
WeightVector weight_vector_from_json(std::string_view text);

/// Writes atomically.
template <class Model>
void save_model(const std::filesystem::path& path, const Model& model);

SequenceModel load_sequence_model(const std::filesystem::path& path);
MetaLearner load_meta_learner(const std::filesystem::path& path);
WeightVector load_weight_vector(const std::filesystem::path& path);

}  // namespace newsblend
