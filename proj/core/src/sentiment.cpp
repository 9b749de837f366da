// SPDX-License-Identifier: Apache-2.0
#include "newsblend/sentiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "newsblend/csv.hpp"
#include "newsblend/dataset.hpp"

namespace newsblend {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool is_ascii_punct(char c) noexcept {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') ||
         (c >= '{' && c <= '~');
}

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

Lexicon Lexicon::with_default_modifiers() {
  Lexicon lex;
  constexpr double up = kBoosterIncrement;
  constexpr double down = -kBoosterIncrement;
  for (const char* w :
       {"absolutely", "amazingly", "awfully", "completely", "considerable", "considerably",
        "decidedly", "deeply", "effing", "enormous", "enormously", "entirely", "especially",
        "exceptional", "exceptionally", "extreme", "extremely", "fabulously", "flipping",
        "flippin", "frackin", "fracking", "fricking", "frickin", "frigging", "friggin", "fully",
        "fuckin", "fucking", "fuggin", "fugging", "greatly", "hella", "highly", "hugely",
        "incredible", "incredibly", "intensely", "major", "majorly", "more", "most",
        "particularly", "purely", "quite", "really", "remarkably", "so", "substantially",
        "thoroughly", "total", "totally", "tremendous", "tremendously", "uber", "unbelievably",
        "unusually", "utter", "utterly", "very"}) {
    lex.boosters.emplace(w, up);
  }
  for (const char* w : {"almost", "barely", "hardly", "kinda", "kindof", "kind-of", "less",
                        "little", "marginal", "marginally", "occasional", "occasionally",
                        "partly", "scarce", "scarcely", "slight", "slightly", "somewhat",
                        "sorta", "sortof", "sort-of"}) {
    lex.boosters.emplace(w, down);
  }
  for (const char* w :
       {"aint",    "arent",    "cannot",   "cant",    "couldnt", "darent",   "didnt",
        "doesnt",  "ain't",    "aren't",   "can't",   "couldn't", "daren't", "didn't",
        "doesn't", "dont",     "hadnt",    "hasnt",   "havent",  "isnt",     "mightnt",
        "mustnt",  "neither",  "don't",    "hadn't",  "hasn't",  "haven't",  "isn't",
        "mightn't", "mustn't", "neednt",   "needn't", "never",   "none",     "nope",
        "nor",     "not",      "nothing",  "nowhere", "oughtnt", "shant",    "shouldnt",
        "uhuh",    "wasnt",    "werent",   "oughtn't", "shan't", "shouldn't", "uh-uh",
        "wasn't",  "weren't",  "without",  "wont",    "wouldnt", "won't",    "wouldn't",
        "rarely",  "seldom",   "despite"}) {
    lex.negators.emplace(w);
  }
  return lex;
}

const double* Lexicon::find(const std::string& token) const noexcept {
  const auto it = valence.find(token);
  return it == valence.end() ? nullptr : &it->second;
}

bool Lexicon::is_negation(const std::string& token) const noexcept {
  return negators.contains(token) || token.find("n't") != std::string::npos;
}

Lexicon parse_lexicon(const std::filesystem::path& path) {
  return parse_lexicon_text(read_text_file(path), path.string());
}

Lexicon parse_lexicon_text(std::string_view text, const std::string& source) {
  Lexicon lex = Lexicon::with_default_modifiers();
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
    while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
    if (line.empty()) continue;

    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw DataError(source, line_no, "expected 'token<TAB>valence'");
    }
    const std::string token(line.substr(0, tab));
    auto rest = line.substr(tab + 1);
    const auto field = rest.substr(0, rest.find('\t'));
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v)) {
      throw DataError(source, line_no, "non-numeric valence '" + std::string(field) + "'");
    }
    ++lex.line_count;
    if (const auto [it, inserted] = lex.valence.insert_or_assign(token, v); !inserted) {
      lex.warnings.push_back(source + ":" + std::to_string(line_no) + ": duplicate token '" +
                             token + "', keeping last value");
    }
  }
  if (lex.line_count == 0) throw DataError(source, 0, "lexicon is empty");
  return lex;
}

std::vector<std::string> tokenize_headline(std::string_view title) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < title.size()) {
    while (i < title.size() && is_space(title[i])) ++i;
    const std::size_t start = i;
    while (i < title.size() && !is_space(title[i])) ++i;
    if (i == start) break;
    std::string_view word = title.substr(start, i - start);
    std::string_view stripped = word;
    while (!stripped.empty() && is_ascii_punct(stripped.front())) stripped.remove_prefix(1);
    while (!stripped.empty() && is_ascii_punct(stripped.back())) stripped.remove_suffix(1);
    tokens.emplace_back(stripped.size() <= 2 ? word : stripped);
  }
  return tokens;
}

double normalize_compound(double raw_sum, double alpha) noexcept {
  // Past 1e150 the square overflows; the limit is the sign.
  if (std::abs(raw_sum) > 1e150) return raw_sum > 0 ? 1.0 : -1.0;
  const double v = raw_sum / std::sqrt(raw_sum * raw_sum + alpha);
  return std::clamp(v, -1.0, 1.0);
}

SentimentResult compound_score(const Lexicon& lex, std::string_view title) {
  const auto tokens = tokenize_headline(title);
  std::vector<std::string> low;
  low.reserve(tokens.size());
  for (const auto& t : tokens) low.push_back(lower(t));

  double raw = 0.0;
  for (std::size_t i = 0; i < low.size(); ++i) {
    if (lex.boosters.contains(low[i])) continue;
    const double* base = lex.find(low[i]);
    if (!base) continue;
    double v = *base;
    for (std::size_t back = 1; back <= 3 && back <= i; ++back) {
      const std::string& prev = low[i - back];
      if (lex.find(prev)) continue;
      if (const auto b = lex.boosters.find(prev); b != lex.boosters.end()) {
        double s = v < 0.0 ? -b->second : b->second;
        if (back == 2) s *= 0.95;
        if (back == 3) s *= 0.9;
        v += s;
      }
      if (lex.is_negation(prev)) v *= kNegationScalar;
    }
    raw += v;
  }
  return SentimentResult{normalize_compound(raw), raw, tokens.size()};
}

std::vector<DailySentiment> score_headlines_csv(const std::filesystem::path& path,
                                                const Lexicon& lex) {
  return score_headlines_text(read_text_file(path), lex, path.string());
}

std::vector<DailySentiment> score_headlines_text(std::string_view text, const Lexicon& lex,
                                                 const std::string& source) {
  const auto rows = parse_csv(text, source);
  if (rows.empty()) throw DataError(source, 0, "headlines file is empty");
  const auto& header = rows.front().fields;
  if (header.size() != 3 || header[0] != "date" || header[1] != "source" || header[2] != "title") {
    throw DataError(source, rows.front().line, "header must be 'date,source,title'");
  }
  if (rows.size() == 1) throw DataError(source, 0, "headlines file has no rows");

  struct Acc {
    double sum = 0.0;
    std::size_t n = 0;
  };
  std::map<Date, std::array<Acc, 4>> by_date;
  std::optional<DateFormat> format;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != 3) {
      throw DataError(source, row.line,
                      "expected 3 fields, found " + std::to_string(row.fields.size()));
    }
    const auto detected = detect_date_format(row.fields[0]);
    if (!detected) throw DataError(source, row.line, "unparseable date '" + row.fields[0] + "'");
    if (format && *format != *detected) {
      throw DataError(source, row.line, "date format differs from earlier rows");
    }
    format = detected;
    Date date;
    try {
      date = parse_date(row.fields[0], *detected);
    } catch (const std::invalid_argument& e) {
      throw DataError(source, row.line, e.what());
    }

    const std::string label = lower(row.fields[1]);
    const auto it = std::find(kNewsSources.begin(), kNewsSources.end(), label);
    if (it == kNewsSources.end()) {
      throw DataError(source, row.line,
                      "unknown source '" + row.fields[1] + "' (allowed: wsj, reuters, cnbc, fortune)");
    }
    auto& acc = by_date[date][static_cast<std::size_t>(it - kNewsSources.begin())];
    acc.sum += compound_score(lex, row.fields[2]).compound;
    ++acc.n;
  }

  std::vector<DailySentiment> out;
  out.reserve(by_date.size());
  for (const auto& [date, accs] : by_date) {
    DailySentiment day{date, {}};
    for (std::size_t j = 0; j < accs.size(); ++j) {
      if (accs[j].n > 0) day.compounds[j] = accs[j].sum / static_cast<double>(accs[j].n);
    }
    out.push_back(day);
  }
  return out;
}

}  // namespace newsblend
