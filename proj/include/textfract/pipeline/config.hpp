#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "textfract/corpus/document.hpp"
#include "textfract/corpus/extract.hpp"
#include "textfract/corpus/segment.hpp"
#include "textfract/detail/digest.hpp"
#include "textfract/error.hpp"
#include "textfract/mfdfa.hpp"
#include "textfract/report/csv.hpp"
#include "textfract/spectral.hpp"

#ifndef TEXTFRACT_DATA_DIR
#define TEXTFRACT_DATA_DIR "data"
#endif

namespace textfract::pipeline {

enum class ScaleGrid { Log, Dyadic };

inline const char* to_string(ScaleGrid g) { return g == ScaleGrid::Log ? "log" : "dyadic"; }

/// Every tunable of the analysis pipelines.
///
/// Keys accepted by `set` and by config files are the canonical key names
/// listed in `canonical()`. "auto" leaves a range to its documented default.
struct AnalysisConfig {
  // segmentation
  std::string language = "en";
  std::string lexicon_path;  // empty: <data>/lexicons/<language>.txt, or no lexicon if absent
  bool bracket_rule = true;
  bool keep_tail = false;
  corpus::NormalizationForm normalization = corpus::NormalizationForm::NFC;
  corpus::LengthUnit unit = corpus::LengthUnit::Words;
  bool fold_case = true;
  std::size_t min_sentences = corpus::kDefaultMinSentences;
  // spectrum
  int bins_per_decade = 20;
  std::optional<double> fit_fmin, fit_fmax;
  bool hann = false;
  // mfdfa
  double q_min = -4.0, q_max = 4.0, q_step = 0.25;
  std::size_t scale_min = 20;
  std::optional<std::size_t> scale_max;  // default N/5
  std::size_t scale_count = 30;
  ScaleGrid scale_grid = ScaleGrid::Log;
  int detrend_order = 2;
  std::optional<double> fit_smin, fit_smax;
  // surrogates
  std::size_t surrogates = 20;
  std::uint64_t seed = 1;
  // tails, vocabulary, recurrence
  double tail_start = 100.0;
  std::size_t zipf_rank_lo = 10, zipf_rank_hi = 1000;
  std::string recurrence_word = "the";
  // output; not part of the digest
  std::vector<std::string> formats{"csv", "json", "svg"};
  std::string out_dir = "textfract-out";
  std::size_t jobs = 1;

  bool wants(const std::string& format) const {
    return std::find(formats.begin(), formats.end(), format) != formats.end();
  }

  void set(const std::string& key, const std::string& value);

  void validate() const;

  std::vector<double> q_grid() const { return make_q_grid(q_min, q_max, q_step); }

  std::vector<std::size_t> scales(std::size_t n) const {
    const std::size_t hi = scale_max.value_or(n / 5);
    if (hi < scale_min) {
      throw Error(ErrorKind::ScaleRange, "series of " + std::to_string(n) + " points leaves no scales in [" +
                                             std::to_string(scale_min) + ", " + std::to_string(hi) + "]");
    }
    if (scale_grid == ScaleGrid::Log) return log_spaced_scales(scale_min, hi, scale_count);
    std::vector<std::size_t> out;
    std::size_t s = 1;
    while (s < scale_min) s *= 2;
    for (; s <= hi; s *= 2) out.push_back(s);
    if (out.empty()) throw Error(ErrorKind::ScaleRange, "no power-of-two scale in range");
    return out;
  }

  ScaleRange hurst_fit_range(std::size_t n) const {
    return {fit_smin.value_or(static_cast<double>(scale_min)),
            fit_smax.value_or(static_cast<double>(scale_max.value_or(n / 5)))};
  }

  FrequencyRange spectrum_fit_range(const PowerSpectrum& ps) const {
    const auto d = default_fit_range(ps);
    return {fit_fmin.value_or(d.lo), fit_fmax.value_or(d.hi)};
  }

  corpus::TokenizerConfig tokenizer() const {
    corpus::TokenizerConfig t;
    t.normalization = normalization;
    return t;
  }

  corpus::SegmenterConfig segmenter() const {
    corpus::SegmenterConfig s;
    s.bracket_rule = bracket_rule;
    s.keep_unterminated_tail = keep_tail;
    return s;
  }

  std::string resolved_lexicon_path() const {
    if (!lexicon_path.empty()) return lexicon_path;
    const auto p = std::filesystem::path(TEXTFRACT_DATA_DIR) / "lexicons" / (language + ".txt");
    return std::filesystem::exists(p) ? p.string() : std::string{};
  }

  corpus::AbbreviationLexicon lexicon() const {
    const auto path = resolved_lexicon_path();
    if (path.empty()) return corpus::AbbreviationLexicon::parse("", language);
    return corpus::AbbreviationLexicon::load(path, language);
  }

  /// One "key=value" per line, sorted by key. The lexicon enters by the
  /// digest of its parsed contents, so the same entries at another path
  /// give the same form.
  std::string canonical() const {
    auto opt = [](const auto& v) { return v ? report::format_number(static_cast<double>(*v)) : std::string("auto"); };
    std::map<std::string, std::string> kv;
    kv["language"] = language;
    kv["lexicon_sha256"] = detail::sha256_hex(lexicon().canonical());
    kv["bracket_rule"] = bracket_rule ? "1" : "0";
    kv["keep_tail"] = keep_tail ? "1" : "0";
    kv["tokenizer"] = tokenizer().canonical();
    kv["unit"] = corpus::to_string(unit);
    kv["fold_case"] = fold_case ? "1" : "0";
    kv["min_sentences"] = std::to_string(min_sentences);
    kv["bins_per_decade"] = std::to_string(bins_per_decade);
    kv["fit_fmin"] = opt(fit_fmin);
    kv["fit_fmax"] = opt(fit_fmax);
    kv["hann"] = hann ? "1" : "0";
    kv["q_min"] = report::format_number(q_min);
    kv["q_max"] = report::format_number(q_max);
    kv["q_step"] = report::format_number(q_step);
    kv["scale_min"] = std::to_string(scale_min);
    kv["scale_max"] = opt(scale_max);
    kv["scale_count"] = std::to_string(scale_count);
    kv["scale_grid"] = to_string(scale_grid);
    kv["detrend_order"] = std::to_string(detrend_order);
    kv["fit_smin"] = opt(fit_smin);
    kv["fit_smax"] = opt(fit_smax);
    kv["surrogates"] = std::to_string(surrogates);
    kv["seed"] = std::to_string(seed);
    kv["tail_start"] = report::format_number(tail_start);
    kv["zipf_rank_lo"] = std::to_string(zipf_rank_lo);
    kv["zipf_rank_hi"] = std::to_string(zipf_rank_hi);
    kv["recurrence_word"] = recurrence_word;
    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
  }

  std::string digest() const { return detail::sha256_hex(canonical()); }

  /// Applies a key=value file: '#' comments, blank lines ignored.
  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot read config " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
      const auto eq = line.find('=');
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string{};
        return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
      };
      if (trim(line).empty()) continue;
      if (eq == std::string::npos) {
        throw Error(ErrorKind::InvalidParameter, path + ":" + std::to_string(lineno) + ": expected key=value");
      }
      try {
        set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
      } catch (const Error& e) {
        throw Error(ErrorKind::InvalidParameter, path + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
  }
};

namespace config_detail {

inline double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw Error(ErrorKind::InvalidParameter, key + ": not a number: '" + v + "'");
  return d;
}

inline std::uint64_t to_uint(const std::string& key, const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorKind::InvalidParameter, key + ": not a non-negative integer: '" + v + "'");
  }
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidParameter, key + ": out of range: '" + v + "'");
  }
}

inline bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw Error(ErrorKind::InvalidParameter, key + ": not a boolean: '" + v + "'");
}

}  // namespace config_detail

inline void AnalysisConfig::set(const std::string& key, const std::string& value) {
  using namespace config_detail;
  auto opt_double = [&](std::optional<double>& dst) {
    if (value == "auto") dst.reset();
    else dst = to_double(key, value);
  };
  if (key == "language") language = value;
  else if (key == "lexicon") lexicon_path = value;
  else if (key == "bracket_rule") bracket_rule = to_bool(key, value);
  else if (key == "keep_tail") keep_tail = to_bool(key, value);
  else if (key == "fold_case") fold_case = to_bool(key, value);
  else if (key == "normalization") {
    if (value == "NFC" || value == "nfc") normalization = corpus::NormalizationForm::NFC;
    else if (value == "NFKC" || value == "nfkc") normalization = corpus::NormalizationForm::NFKC;
    else if (value == "none") normalization = corpus::NormalizationForm::None;
    else throw Error(ErrorKind::InvalidParameter, "normalization: expected NFC, NFKC or none");
  } else if (key == "unit") {
    if (value == "words") unit = corpus::LengthUnit::Words;
    else if (value == "chars") unit = corpus::LengthUnit::Characters;
    else throw Error(ErrorKind::InvalidParameter, "unit: expected words or chars");
  } else if (key == "min_sentences") min_sentences = to_uint(key, value);
  else if (key == "bins_per_decade") bins_per_decade = static_cast<int>(to_uint(key, value));
  else if (key == "fit_fmin") opt_double(fit_fmin);
  else if (key == "fit_fmax") opt_double(fit_fmax);
  else if (key == "hann") hann = to_bool(key, value);
  else if (key == "q_min") q_min = to_double(key, value);
  else if (key == "q_max") q_max = to_double(key, value);
  else if (key == "q_step") q_step = to_double(key, value);
  else if (key == "scale_min") scale_min = to_uint(key, value);
  else if (key == "scale_max") {
    if (value == "auto") scale_max.reset();
    else scale_max = to_uint(key, value);
  } else if (key == "scale_count") scale_count = to_uint(key, value);
  else if (key == "scale_grid") {
    if (value == "log") scale_grid = ScaleGrid::Log;
    else if (value == "dyadic") scale_grid = ScaleGrid::Dyadic;
    else throw Error(ErrorKind::InvalidParameter, "scale_grid: expected log or dyadic");
  } else if (key == "detrend_order") detrend_order = static_cast<int>(to_uint(key, value));
  else if (key == "fit_smin") opt_double(fit_smin);
  else if (key == "fit_smax") opt_double(fit_smax);
  else if (key == "surrogates") surrogates = to_uint(key, value);
  else if (key == "seed") seed = to_uint(key, value);
  else if (key == "tail_start") tail_start = to_double(key, value);
  else if (key == "zipf_rank_lo") zipf_rank_lo = to_uint(key, value);
  else if (key == "zipf_rank_hi") zipf_rank_hi = to_uint(key, value);
  else if (key == "recurrence_word") recurrence_word = value;
  else if (key == "formats") {
    formats.clear();
    std::istringstream in(value);
    std::string f;
    while (std::getline(in, f, ',')) {
      if (f != "csv" && f != "json" && f != "svg") {
        throw Error(ErrorKind::InvalidParameter, "formats: unknown format '" + f + "'");
      }
      formats.push_back(f);
    }
  } else if (key == "out_dir") out_dir = value;
  else if (key == "jobs") jobs = to_uint(key, value);
  else throw Error(ErrorKind::InvalidParameter, "unknown config key '" + key + "'");
}

inline void AnalysisConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidParameter, msg); };
  if (!(q_step > 0.0) || !(q_min < q_max)) fail("q grid needs q_min < q_max and q_step > 0");
  make_q_grid(q_min, q_max, q_step);
  if (detrend_order < 0 || detrend_order > 8) fail("detrend_order must lie in 0..8");
  if (scale_min < static_cast<std::size_t>(detrend_order) + 2) fail("scale_min must exceed detrend_order + 1");
  if (scale_max && *scale_max < scale_min) fail("scale_max below scale_min");
  if (scale_count < 2) fail("scale_count must be at least 2");
  if (fit_smin && fit_smax && !(*fit_smin < *fit_smax)) fail("fit_smin must be below fit_smax");
  if (fit_fmin && !(*fit_fmin > 0.0)) fail("fit_fmin must be positive");
  if (fit_fmax && !(*fit_fmax <= 0.5)) fail("fit_fmax must not exceed 0.5");
  if (fit_fmin && fit_fmax && !(*fit_fmin < *fit_fmax)) fail("fit_fmin must be below fit_fmax");
  if (bins_per_decade < 1) fail("bins_per_decade must be positive");
  if (!(tail_start >= 0.0)) fail("tail_start must be non-negative");
  if (zipf_rank_lo < 1 || zipf_rank_lo >= zipf_rank_hi) fail("zipf ranks need 1 <= rank_lo < rank_hi");
  if (recurrence_word.empty()) fail("recurrence_word is empty");
  if (jobs < 1) fail("jobs must be at least 1");
  if (formats.empty()) fail("no output format selected");
}

/// Independent 64-bit seeds for surrogate streams (splitmix64 finaliser).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream * 1000003ULL + index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace textfract::pipeline
