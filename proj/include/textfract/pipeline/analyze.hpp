#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "textfract/corpus/document.hpp"
#include "textfract/corpus/extract.hpp"
#include "textfract/corpus/segment.hpp"
#include "textfract/detail/digest.hpp"
#include "textfract/distfit.hpp"
#include "textfract/mfdfa.hpp"
#include "textfract/pipeline/config.hpp"
#include "textfract/report/json.hpp"
#include "textfract/series.hpp"
#include "textfract/spectral.hpp"

namespace textfract::pipeline {

enum class InputKind { Text, SeriesCsv };

struct Input {
  std::string path;
  InputKind kind = InputKind::Text;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Values of a one- or two-column CSV; with two or more columns the second
/// is used ("index,length"). '#' lines and a non-numeric first row are skipped.
inline std::vector<double> parse_series_csv(const std::string& text, const std::string& name = "series") {
  std::vector<double> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    const std::string& cell = cells.size() >= 2 ? cells[1] : cells.front();
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    const bool numeric = end != cell.c_str() && *end == '\0';
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw Error(ErrorKind::InvalidParameter, name + ":" + std::to_string(lineno) + ": not a number: '" + cell + "'");
    }
    first = false;
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidParameter, name + ":" + std::to_string(lineno) + ": non-finite value");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorKind::EmptyInput, name + ": no values");
  return out;
}

/// A series ready for analysis, with everything needed to trace it back.
struct SeriesData {
  std::string path;
  std::string title;
  InputKind kind = InputKind::Text;
  std::string source_hash;
  corpus::LengthUnit unit = corpus::LengthUnit::Words;
  std::vector<double> values;
  std::size_t full_length = 0;
  std::size_t from = 1, to = 0;  // 1-based inclusive slice into the full series
  std::optional<corpus::Document> document;
  std::optional<corpus::Segmentation> segmentation;
  std::vector<std::string> warnings;

  Series series() const { return make_series(values); }
};

inline void check_minimum(SeriesData& d, std::size_t min_sentences) {
  if (d.values.size() < min_sentences) {
    d.warnings.push_back("series has " + std::to_string(d.values.size()) + " points, below " +
                         std::to_string(min_sentences) + " sentences");
  }
}

inline SeriesData load_input(const Input& in, const AnalysisConfig& cfg, const corpus::AbbreviationLexicon& lexicon) {
  SeriesData d;
  d.path = in.path;
  d.kind = in.kind;
  d.title = std::filesystem::path(in.path).stem().string();
  d.unit = cfg.unit;
  const std::string raw = read_file(in.path);
  if (in.kind == InputKind::SeriesCsv) {
    d.source_hash = detail::sha256_hex(raw);
    d.values = parse_series_csv(raw, in.path);
  } else {
    d.document = corpus::tokenize(raw, cfg.tokenizer(), d.title, cfg.language);
    d.source_hash = d.document->source_hash;
    d.segmentation = corpus::segment_sentences(*d.document, lexicon, cfg.segmenter());
    const auto sls = corpus::sentence_length_series(d.segmentation->sentences, cfg.unit,
                                                    {d.title, d.source_hash, 0, 0}, cfg.min_sentences);
    d.values.assign(sls.values.begin(), sls.values.end());
    if (const auto dropped = d.segmentation->report.dropped_tail_words) {
      d.warnings.push_back("dropped " + std::to_string(dropped) + " words of unterminated trailing text");
    }
  }
  d.full_length = d.values.size();
  d.to = d.values.size();
  return d;
}

/// Restricts to [from, to], 1-based inclusive, relative to the full series.
inline void apply_slice(SeriesData& d, std::size_t from, std::size_t to) {
  if (from < 1 || from > to || to > d.full_length) {
    throw Error(ErrorKind::Bounds, "slice [" + std::to_string(from) + ", " + std::to_string(to) + "] outside 1.." +
                                       std::to_string(d.full_length));
  }
  std::vector<double> v(d.values.begin() + static_cast<std::ptrdiff_t>(from - d.from),
                        d.values.begin() + static_cast<std::ptrdiff_t>(to - d.from + 1));
  d.values = std::move(v);
  d.from = from;
  d.to = to;
}

struct SpectrumStage {
  PowerSpectrum spectrum;
  SpectrumFit fit;
};

inline SpectrumStage spectrum_stage(const Series& s, const AnalysisConfig& cfg) {
  SpectrumStage st;
  st.spectrum = power_spectrum(s, {cfg.hann});
  st.fit = fit_beta(st.spectrum, cfg.spectrum_fit_range(st.spectrum), cfg.bins_per_decade);
  return st;
}

inline MfdfaResult mfdfa_stage(const Series& s, const AnalysisConfig& cfg) {
  MfdfaResult r;
  const auto q = cfg.q_grid();
  const auto scales = cfg.scales(s.size());
  r.surface = fluctuation_surface(s, q, scales, cfg.detrend_order);
  r.hurst = fit_generalized_hurst(r.surface, cfg.hurst_fit_range(s.size()));
  r.spectrum = singularity_spectrum(r.hurst);
  return r;
}

enum class SurrogateKind { Shuffled, PhaseRandomized };

inline const char* to_string(SurrogateKind k) { return k == SurrogateKind::Shuffled ? "shuffled" : "phase-randomized"; }

inline std::uint64_t surrogate_seed(const AnalysisConfig& cfg, SurrogateKind k, std::size_t i) {
  return derive_seed(cfg.seed, k == SurrogateKind::Shuffled ? 0 : 1, i);
}

inline Series make_surrogate(const Series& s, SurrogateKind k, std::uint64_t seed) {
  return k == SurrogateKind::Shuffled ? shuffle_surrogate(s, seed) : phase_randomized_surrogate(s, seed);
}

struct SurrogateRun {
  std::uint64_t seed = 0;
  std::optional<double> hurst, delta_alpha, beta;
  std::string error;
};

struct Stat {
  std::size_t n = 0;
  double mean = std::numeric_limits<double>::quiet_NaN();
  double sd = std::numeric_limits<double>::quiet_NaN();
  double min = std::numeric_limits<double>::quiet_NaN();
  double max = std::numeric_limits<double>::quiet_NaN();
};

inline Stat summarize(const std::vector<double>& v) {
  Stat s;
  s.n = v.size();
  if (v.empty()) return s;
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  return s;
}

struct SurrogateSummary {
  SurrogateKind kind = SurrogateKind::Shuffled;
  std::vector<SurrogateRun> runs;
  std::optional<SingularitySpectrum> first_spectrum;  // of run 0, for plots

  std::vector<double> collect(std::optional<double> SurrogateRun::*field) const {
    std::vector<double> v;
    for (const auto& r : runs) {
      if (r.*field) v.push_back(*(r.*field));
    }
    return v;
  }
  Stat hurst() const { return summarize(collect(&SurrogateRun::hurst)); }
  Stat delta_alpha() const { return summarize(collect(&SurrogateRun::delta_alpha)); }
  Stat beta() const { return summarize(collect(&SurrogateRun::beta)); }
};

inline SurrogateSummary run_surrogates(const Series& s, const AnalysisConfig& cfg, SurrogateKind kind) {
  SurrogateSummary out;
  out.kind = kind;
  for (std::size_t i = 0; i < cfg.surrogates; ++i) {
    SurrogateRun run;
    run.seed = surrogate_seed(cfg, kind, i);
    const Series sur = make_surrogate(s, kind, run.seed);
    try {
      const auto mf = mfdfa_stage(sur, cfg);
      run.hurst = hurst_exponent(mf.hurst);
      run.delta_alpha = mf.spectrum.delta_alpha;
      if (i == 0) out.first_spectrum = mf.spectrum;
    } catch (const Error& e) {
      run.error = e.what();
    }
    try {
      run.beta = spectrum_stage(sur, cfg).fit.beta;
    } catch (const Error& e) {
      if (run.error.empty()) run.error = e.what();
    }
    out.runs.push_back(std::move(run));
  }
  return out;
}

/// Everything computed for one input by the analyze pipeline.
struct TextReport {
  SeriesData data;
  std::string config_digest;
  std::optional<SpectrumStage> spectrum;
  std::optional<MfdfaResult> mfdfa;
  std::optional<SurrogateSummary> shuffled, phase;
  std::optional<CCDF> ccdf;
  std::optional<TailFit> tail;
  std::map<std::string, std::string> stage_errors;

  std::optional<double> hurst() const {
    return mfdfa ? std::optional<double>(hurst_exponent(mfdfa->hurst)) : std::nullopt;
  }
  std::optional<double> delta_alpha() const {
    return mfdfa ? std::optional<double>(mfdfa->spectrum.delta_alpha) : std::nullopt;
  }
};

/// Runs fn(); an Error is recorded against `stage` and turned into a warning.
template <class Fn>
bool run_stage(TextReport& r, const std::string& stage, Fn&& fn) {
  try {
    fn();
    return true;
  } catch (const Error& e) {
    r.stage_errors[stage] = e.what();
    r.data.warnings.push_back(stage + " skipped: " + e.what());
    return false;
  }
}

/// Spectrum and fit, MFDFA and f(alpha), both surrogate families, CCDF and
/// tail fit. Stage failures are recorded, never thrown.
inline TextReport analyze(SeriesData data, const AnalysisConfig& cfg, const std::string& config_digest) {
  TextReport r;
  r.data = std::move(data);
  r.config_digest = config_digest;
  check_minimum(r.data, cfg.min_sentences);
  const Series s = r.data.series();
  run_stage(r, "spectrum", [&] { r.spectrum = spectrum_stage(s, cfg); });
  run_stage(r, "mfdfa", [&] { r.mfdfa = mfdfa_stage(s, cfg); });
  if (cfg.surrogates > 0 && !r.mfdfa) {
    r.stage_errors["surrogates"] = "skipped: MFDFA of the original series failed";
  } else if (cfg.surrogates > 0) {
    r.shuffled = run_surrogates(s, cfg, SurrogateKind::Shuffled);
    r.phase = run_surrogates(s, cfg, SurrogateKind::PhaseRandomized);
  }
  run_stage(r, "ccdf", [&] { r.ccdf = ccdf(s); });
  if (r.ccdf) run_stage(r, "tail_fit", [&] { r.tail = fit_stretched_exponential(*r.ccdf, cfg.tail_start); });
  return r;
}

inline report::Json stat_json(const Stat& s) {
  return {{"n", s.n}, {"mean", s.mean}, {"sd", s.sd}, {"min", s.min}, {"max", s.max}};
}

inline report::Json config_json(const AnalysisConfig& cfg) {
  report::Json j = report::Json::object();
  std::istringstream in(cfg.canonical());
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find('=');
    j[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return j;
}

inline report::Json provenance_json(const SeriesData& d, const AnalysisConfig& cfg, const std::string& digest) {
  report::Json seeds = {{"base", cfg.seed}, {"rng", detail::Rng::kName}};
  for (auto k : {SurrogateKind::Shuffled, SurrogateKind::PhaseRandomized}) {
    std::vector<std::uint64_t> v;
    for (std::size_t i = 0; i < cfg.surrogates; ++i) v.push_back(surrogate_seed(cfg, k, i));
    seeds[to_string(k)] = v;
  }
  return {{"source_path", d.path},
          {"input_kind", d.kind == InputKind::Text ? "text" : "series-csv"},
          {"source_hash", d.source_hash},
          {"config_digest", digest},
          {"slice", {{"from", d.from}, {"to", d.to}, {"full_length", d.full_length}}},
          {"seeds", seeds}};
}

inline report::Json surrogate_json(const SurrogateSummary& s) {
  report::Json runs = report::Json::array();
  for (const auto& r : s.runs) {
    report::Json j = {{"seed", r.seed}};
    j["H"] = r.hurst ? report::Json(*r.hurst) : report::Json(nullptr);
    j["delta_alpha"] = r.delta_alpha ? report::Json(*r.delta_alpha) : report::Json(nullptr);
    j["beta"] = r.beta ? report::Json(*r.beta) : report::Json(nullptr);
    if (!r.error.empty()) j["error"] = r.error;
    runs.push_back(j);
  }
  return {{"kind", to_string(s.kind)},
          {"count", s.runs.size()},
          {"H", stat_json(s.hurst())},
          {"delta_alpha", stat_json(s.delta_alpha())},
          {"beta", stat_json(s.beta())},
          {"runs", runs}};
}

inline report::Json to_json(const TextReport& r, const AnalysisConfig& cfg) {
  report::Json j;
  j["title"] = r.data.title;
  j["provenance"] = provenance_json(r.data, cfg, r.config_digest);
  j["config"] = config_json(cfg);
  j["unit"] = corpus::to_string(r.data.unit);
  j["j_max"] = r.data.values.size();
  j["length_moments"] = report::moments_json(r.data.values);
  if (r.data.segmentation) j["segmentation"] = report::to_json(r.data.segmentation->report);
  j["spectrum"] = r.spectrum ? report::to_json(r.spectrum->fit) : report::Json(nullptr);
  j["mfdfa"] = r.mfdfa ? report::to_json(*r.mfdfa) : report::Json(nullptr);
  if (r.mfdfa) j["beta_from_H"] = beta_from_hurst(hurst_exponent(r.mfdfa->hurst));
  report::Json sur = report::Json::object();
  if (r.shuffled) sur["shuffled"] = surrogate_json(*r.shuffled);
  if (r.phase) sur["phase_randomized"] = surrogate_json(*r.phase);
  j["surrogates"] = sur;
  j["tail_fit"] = r.tail ? report::to_json(*r.tail) : report::Json(nullptr);
  report::Json errs = report::Json::object();
  for (const auto& [k, v] : r.stage_errors) errs[k] = v;
  j["stage_errors"] = errs;
  j["warnings"] = r.data.warnings;
  return j;
}

struct ScatterPoint {
  std::string title;
  double hurst = 0.0, sigma_hurst = 0.0, delta_alpha = 0.0;
  std::optional<double> beta;
};

/// Corpus-level view: Delta alpha against H per text with the shuffled band
/// (lower = mean shuffled Delta alpha over the set, upper = its maximum), and
/// the geometric-mean spectrum of all members.
struct CorpusSummary {
  std::vector<ScatterPoint> points;
  std::optional<double> band_lo, band_hi;
  std::optional<PowerSpectrum> average;
  std::optional<SpectrumFit> average_fit;
  std::string average_error;
};

inline CorpusSummary summarize_corpus(const std::vector<const TextReport*>& reports, const AnalysisConfig& cfg) {
  CorpusSummary c;
  std::vector<double> shuffled_da;
  std::vector<PowerSpectrum> spectra;
  for (const auto* r : reports) {
    if (r->mfdfa) {
      c.points.push_back({r->data.title, hurst_exponent(r->mfdfa->hurst), hurst_stderr(r->mfdfa->hurst),
                          r->mfdfa->spectrum.delta_alpha,
                          r->spectrum ? std::optional<double>(r->spectrum->fit.beta) : std::nullopt});
    }
    if (r->shuffled) {
      const auto v = r->shuffled->collect(&SurrogateRun::delta_alpha);
      shuffled_da.insert(shuffled_da.end(), v.begin(), v.end());
    }
    if (r->spectrum) spectra.push_back(r->spectrum->spectrum);
  }
  if (!shuffled_da.empty()) {
    const auto st = summarize(shuffled_da);
    c.band_lo = st.mean;
    c.band_hi = st.max;
  }
  if (!spectra.empty()) {
    try {
      c.average = average_spectrum(spectra);
      c.average_fit = fit_beta(*c.average, cfg.spectrum_fit_range(*c.average), cfg.bins_per_decade);
    } catch (const Error& e) {
      c.average_error = e.what();
    }
  }
  return c;
}

inline report::Json to_json(const CorpusSummary& c) {
  report::Json pts = report::Json::array();
  for (const auto& p : c.points) {
    pts.push_back({{"title", p.title},
                   {"H", p.hurst},
                   {"sigma_H", p.sigma_hurst},
                   {"delta_alpha", p.delta_alpha},
                   {"beta", p.beta ? report::Json(*p.beta) : report::Json(nullptr)}});
  }
  report::Json j = {{"scatter", pts}};
  j["shuffled_band"] = c.band_lo ? report::Json{{"lower_mean", *c.band_lo}, {"upper_max", *c.band_hi}}
                                 : report::Json(nullptr);
  if (c.average_fit) {
    j["average_spectrum"] = report::to_json(*c.average_fit);
    j["average_spectrum"]["members"] = c.average->members;
  } else {
    j["average_spectrum"] = nullptr;
    if (!c.average_error.empty()) j["average_spectrum_error"] = c.average_error;
  }
  return j;
}

/// Calls fn(i) for i in [0, n) on up to `jobs` threads; fn must not throw.
inline void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  }
}

/// Per-input outcome of a batch: a result or the reason it was skipped.
template <class T>
struct BatchItem {
  Input input;
  std::optional<T> result;
  std::string error;
};

/// Inputs sorted by path, processed in a worker pool, returned in that order.
template <class T, class Fn>
std::vector<BatchItem<T>> run_batch(std::vector<Input> inputs, std::size_t jobs, Fn&& fn) {
  std::stable_sort(inputs.begin(), inputs.end(), [](const Input& a, const Input& b) { return a.path < b.path; });
  std::vector<BatchItem<T>> items(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) items[i].input = inputs[i];
  parallel_for(items.size(), jobs, [&](std::size_t i) {
    try {
      items[i].result.emplace(fn(items[i].input));
    } catch (const std::exception& e) {
      items[i].error = e.what();
    }
  });
  return items;
}

}  // namespace textfract::pipeline
