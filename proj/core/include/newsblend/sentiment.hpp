// SPDX-License-Identifier: Apache-2.0
/**
 * @file   sentiment.hpp
 * @brief  Lexicon-driven headline scoring with VADER-compatible compound scores.
 *
 * Implemented rules, applied to each token whose lowercase form is in the
 * lexicon:
 *   - for each of the three preceding tokens that is itself not a lexicon
 *     word: a degree booster adds +-0.293 in the valence's direction, damped
 *     by 1, 0.95, 0.9 with distance; a negator (or any "n't" token) then
 *     multiplies the running valence by -0.74;
 *   - booster tokens contribute zero valence themselves.
 * The token valences are summed and squashed: compound = s / sqrt(s^2 + 15).
 *
 * Not implemented: ALL-CAPS emphasis, '!' / '?' amplification, "but"
 * reweighting, idiom and special-phrase tables, the "no" / "least" rules.
 *
 * Tokens are whitespace-separated; leading and trailing ASCII punctuation is
 * stripped unless that would leave two or fewer characters.
 */
#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "newsblend/date.hpp"

namespace newsblend {

inline constexpr double kBoosterIncrement = 0.293;
inline constexpr double kNegationScalar = -0.74;
inline constexpr double kCompoundAlpha = 15.0;

struct Lexicon {
  std::unordered_map<std::string, double> valence;
  std::unordered_map<std::string, double> boosters;
  std::unordered_set<std::string> negators;
  std::size_t line_count = 0;
  std::vector<std::string> warnings;

  /// Booster and negator tables of the reference scorer, no valences.
  static Lexicon with_default_modifiers();

  const double* find(const std::string& lowercase_token) const noexcept;
  bool is_negation(const std::string& lowercase_token) const noexcept;
};

/// Tab-separated `token<TAB>mean-valence[<TAB>...]`, one entry per line.
/// Duplicate tokens: last one wins and a warning is recorded.
Lexicon parse_lexicon(const std::filesystem::path& path);
Lexicon parse_lexicon_text(std::string_view text, const std::string& source = "<lexicon>");

struct SentimentResult {
  double compound = 0.0;
  double raw_sum = 0.0;
  std::size_t token_count = 0;
};

std::vector<std::string> tokenize_headline(std::string_view title);
double normalize_compound(double raw_sum, double alpha = kCompoundAlpha) noexcept;
SentimentResult compound_score(const Lexicon& lex, std::string_view title);

/// Mean compound per news source for one date; nullopt when no headline.
struct DailySentiment {
  Date date{};
  std::array<std::optional<double>, 4> compounds;  // kNewsSources order
};

/// Reads `date,source,title` rows and averages compounds per (date, source).
/// Sorted by date. Unknown source labels are rejected.
std::vector<DailySentiment> score_headlines_csv(const std::filesystem::path& path,
                                                const Lexicon& lex);
std::vector<DailySentiment> score_headlines_text(std::string_view text, const Lexicon& lex,
                                                 const std::string& source = "<headlines>");

}  // namespace newsblend
