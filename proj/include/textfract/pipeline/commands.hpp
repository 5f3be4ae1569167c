#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "textfract/corpus/extract.hpp"
#include "textfract/pipeline/analyze.hpp"
#include "textfract/pipeline/config.hpp"
#include "textfract/report/csv.hpp"
#include "textfract/report/json.hpp"
#include "textfract/report/plots.hpp"
#include "textfract/wavelet.hpp"

namespace textfract::pipeline {

enum ExitCode : int { kOk = 0, kFatal = 1, kPartial = 2 };

/// Serialized diagnostics on standard error.
class Log {
 public:
  explicit Log(bool quiet = false) : quiet_(quiet) {}

  void info(const std::string& msg) { write("info", msg, quiet_); }
  void warn(const std::string& msg) { write("warning", msg, false); }
  void error(const std::string& msg) { write("error", msg, false); }

 private:
  void write(const char* level, const std::string& msg, bool suppress) {
    if (suppress) return;
    std::lock_guard lock(mu_);
    std::cerr << "textfract: " << level << ": " << msg << "\n";
  }

  bool quiet_;
  std::mutex mu_;
};

/// Writes result files below cfg.out_dir, honouring cfg.formats. With
/// out_dir "-" JSON documents go to standard output and nothing else is written.
class OutputWriter {
 public:
  OutputWriter(const AnalysisConfig& cfg, std::string digest) : cfg_(cfg), digest_(std::move(digest)) {}

  bool to_stdout() const { return cfg_.out_dir == "-"; }

  void csv(const std::string& rel, report::CsvTable table, const std::string& source_hash = {}) {
    if (!cfg_.wants("csv") || to_stdout()) return;
    report::CsvTable t = std::move(table);
    t.note_front("config_digest", digest_);
    if (!source_hash.empty()) t.note_front("source_hash", source_hash);
    put(rel + ".csv", t.str());
  }

  void json(const std::string& rel, const report::Json& j) {
    if (!cfg_.wants("json")) return;
    if (to_stdout()) {
      std::cout << report::dump(j);
      return;
    }
    put(rel + ".json", report::dump(j));
  }

  void svg(const std::string& rel, const std::string& doc) {
    if (!cfg_.wants("svg") || to_stdout()) return;
    put(rel + ".svg", doc);
  }

  const std::vector<std::string>& written() const { return written_; }

 private:
  void put(const std::string& rel, const std::string& content) {
    const auto path = std::filesystem::path(cfg_.out_dir) / rel;
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << content;
    written_.push_back(path.string());
  }

  const AnalysisConfig& cfg_;
  std::string digest_;
  std::vector<std::string> written_;
};

/// Output sub-directory per input: file stem, de-duplicated in order.
inline std::vector<std::string> unique_names(const std::vector<std::string>& paths) {
  std::vector<std::string> out;
  std::map<std::string, int> seen;
  for (const auto& p : paths) {
    std::string stem = std::filesystem::path(p).stem().string();
    if (stem.empty()) stem = "input";
    const int k = ++seen[stem];
    out.push_back(k == 1 ? stem : stem + "-" + std::to_string(k));
  }
  return out;
}

struct Context {
  AnalysisConfig cfg;
  std::string digest;
  corpus::AbbreviationLexicon lexicon;
  Log* log = nullptr;
};

inline Context make_context(const AnalysisConfig& cfg, Log& log) {
  cfg.validate();
  Context c{cfg, cfg.digest(), cfg.lexicon(), &log};
  log.info("config digest " + c.digest);
  return c;
}

/// Common tail of every batch command: exit code from per-input outcomes.
template <class T>
int finish(const std::vector<BatchItem<T>>& items, Log& log) {
  std::size_t failed = 0;
  for (const auto& it : items) {
    if (!it.result) {
      ++failed;
      log.error(it.input.path + ": " + it.error);
    }
  }
  if (items.empty() || failed == items.size()) return kFatal;
  return failed ? kPartial : kOk;
}

inline report::Json skipped_json(const auto& items) {
  report::Json j = report::Json::array();
  for (const auto& it : items) {
    if (!it.result) j.push_back({{"path", it.input.path}, {"error", it.error}});
  }
  return j;
}

inline void log_warnings(Log& log, const SeriesData& d) {
  for (const auto& w : d.warnings) log.warn(d.path + ": " + w);
}

inline report::CsvTable surrogate_table(const TextReport& r) {
  report::CsvTable t({"kind", "index", "seed", "H", "delta_alpha", "beta"});
  for (const auto* s : {r.shuffled ? &*r.shuffled : nullptr, r.phase ? &*r.phase : nullptr}) {
    if (!s) continue;
    for (std::size_t i = 0; i < s->runs.size(); ++i) {
      const auto& run = s->runs[i];
      auto cell = [](const std::optional<double>& v) { return v ? report::format_number(*v) : std::string("nan"); };
      t.add_row({to_string(s->kind), std::to_string(i), std::to_string(run.seed), cell(run.hurst),
                 cell(run.delta_alpha), cell(run.beta)});
    }
  }
  return t;
}

inline void write_spectrum(OutputWriter& out, const std::string& dir, const SpectrumStage& st, const SeriesData& d) {
  out.csv(dir + "/spectrum", report::spectrum_table(st.spectrum, &st.fit), d.source_hash);
  out.svg(dir + "/spectrum", report::spectrum_plot(st.spectrum, st.fit, d.title));
}

inline void write_mfdfa(OutputWriter& out, const std::string& dir, const MfdfaResult& mf, const SeriesData& d,
                        const std::vector<std::pair<std::string, const SingularitySpectrum*>>& overlays = {}) {
  out.csv(dir + "/fluctuation", report::surface_table(mf.surface), d.source_hash);
  out.csv(dir + "/hurst", report::hurst_table(mf.hurst), d.source_hash);
  out.csv(dir + "/singularity", report::singularity_table(mf.spectrum), d.source_hash);
  out.svg(dir + "/fluctuation", report::surface_plot(mf.surface, d.title));
  out.svg(dir + "/singularity", report::singularity_plot(mf.spectrum, d.title, overlays));
}

inline void write_series(OutputWriter& out, const std::string& dir, const SeriesData& d) {
  auto t = report::series_table(d.values, d.kind == InputKind::Text ? "length" : "value");
  t.note("unit", corpus::to_string(d.unit)).note("slice_from", report::num(d.from)).note("slice_to", report::num(d.to));
  out.csv(dir + "/series", std::move(t), d.source_hash);
  if (d.segmentation) out.csv(dir + "/sentences", report::sentence_table(d.segmentation->sentences), d.source_hash);
}

/// Full pipeline per input plus the corpus summary (scatter and average spectrum).
inline int cmd_analyze(const std::vector<Input>& inputs, const AnalysisConfig& cfg_in, Log& log) {
  const Context ctx = make_context(cfg_in, log);
  const auto& cfg = ctx.cfg;
  auto items = run_batch<TextReport>(inputs, cfg.jobs, [&](const Input& in) {
    auto r = analyze(load_input(in, cfg, ctx.lexicon), cfg, ctx.digest);
    log.info(in.path + ": " + std::to_string(r.data.values.size()) + " points analysed");
    return r;
  });
  OutputWriter out(cfg, ctx.digest);
  std::vector<std::string> paths;
  for (const auto& it : items) paths.push_back(it.input.path);
  const auto names = unique_names(paths);
  std::vector<const TextReport*> ok;
  report::Json texts = report::Json::array();
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!items[i].result) continue;
    const auto& r = *items[i].result;
    ok.push_back(&r);
    log_warnings(log, r.data);
    const std::string& dir = names[i];
    auto j = to_json(r, cfg);
    j["output_name"] = dir;
    out.json(dir + "/report", j);
    texts.push_back({{"title", r.data.title}, {"output_name", dir}, {"path", r.data.path}});
    write_series(out, dir, r.data);
    if (r.spectrum) write_spectrum(out, dir, *r.spectrum, r.data);
    if (r.mfdfa) {
      std::vector<std::pair<std::string, const SingularitySpectrum*>> overlays;
      if (r.shuffled && r.shuffled->first_spectrum) overlays.emplace_back("shuffled", &*r.shuffled->first_spectrum);
      if (r.phase && r.phase->first_spectrum) overlays.emplace_back("phase-randomized", &*r.phase->first_spectrum);
      write_mfdfa(out, dir, *r.mfdfa, r.data, overlays);
    }
    if (r.shuffled || r.phase) out.csv(dir + "/surrogates", surrogate_table(r), r.data.source_hash);
    if (r.ccdf) {
      out.csv(dir + "/ccdf", report::ccdf_table(*r.ccdf, r.tail ? &*r.tail : nullptr), r.data.source_hash);
      out.svg(dir + "/ccdf", report::ccdf_plot(*r.ccdf, r.tail ? &*r.tail : nullptr, r.data.title));
    }
  }
  const auto summary = summarize_corpus(ok, cfg);
  report::Json corpus = to_json(summary);
  corpus["texts"] = texts;
  corpus["skipped"] = skipped_json(items);
  corpus["config_digest"] = ctx.digest;
  corpus["config"] = config_json(cfg);
  out.json("corpus", corpus);
  report::CsvTable scatter({"title", "H", "sigma_H", "delta_alpha", "beta"});
  std::vector<report::ScatterEntry> entries;
  for (const auto& p : summary.points) {
    scatter.add_row({p.title, report::num(p.hurst), report::num(p.sigma_hurst), report::num(p.delta_alpha),
                     p.beta ? report::num(*p.beta) : "nan"});
    entries.push_back({p.title, p.hurst, p.delta_alpha});
  }
  if (summary.band_lo) scatter.note("shuffled_band_lower_mean", *summary.band_lo).note("shuffled_band_upper_max", *summary.band_hi);
  out.csv("scatter", scatter);
  out.svg("scatter", report::scatter_plot(entries, summary.band_lo, summary.band_hi, "delta alpha against H"));
  if (summary.average_fit) {
    out.csv("average_spectrum", report::spectrum_table(*summary.average, &*summary.average_fit));
    out.svg("average_spectrum", report::spectrum_plot(*summary.average, *summary.average_fit, "average spectrum"));
  }
  return finish(items, log);
}

/// Loads every input and applies an optional slice; shared by the single-purpose commands.
inline std::vector<BatchItem<SeriesData>> load_all(const std::vector<Input>& inputs, const Context& ctx,
                                                   std::optional<std::pair<std::size_t, std::size_t>> slice = {}) {
  return run_batch<SeriesData>(inputs, ctx.cfg.jobs, [&](const Input& in) {
    auto d = load_input(in, ctx.cfg, ctx.lexicon);
    if (slice) apply_slice(d, slice->first, std::min(slice->second, d.full_length));
    check_minimum(d, ctx.cfg.min_sentences);
    return d;
  });
}

inline std::vector<std::string> item_names(const auto& items) {
  std::vector<std::string> paths;
  for (const auto& it : items) paths.push_back(it.input.path);
  return unique_names(paths);
}

inline report::Json base_json(const SeriesData& d, const Context& ctx) {
  report::Json j;
  j["title"] = d.title;
  j["provenance"] = provenance_json(d, ctx.cfg, ctx.digest);
  j["config"] = config_json(ctx.cfg);
  j["j_max"] = d.values.size();
  j["warnings"] = d.warnings;
  return j;
}

inline int cmd_spectrum(const std::vector<Input>& inputs, const AnalysisConfig& cfg_in, Log& log,
                        std::optional<std::pair<std::size_t, std::size_t>> slice = {}) {
  const Context ctx = make_context(cfg_in, log);
  auto items = load_all(inputs, ctx, slice);
  OutputWriter out(ctx.cfg, ctx.digest);
  const auto names = item_names(items);
  std::vector<PowerSpectrum> spectra;
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto& it = items[i];
    if (!it.result) continue;
    try {
      const auto st = spectrum_stage(it.result->series(), ctx.cfg);
      log_warnings(log, *it.result);
      auto j = base_json(*it.result, ctx);
      j["spectrum"] = report::to_json(st.fit);
      j["dc_power"] = st.spectrum.dc_power;
      j["total_power"] = st.spectrum.total_power();
      out.json(names[i] + "/spectrum", j);
      write_spectrum(out, names[i], st, *it.result);
      spectra.push_back(st.spectrum);
    } catch (const Error& e) {
      it.error = e.what();
      it.result.reset();
    }
  }
  if (spectra.size() > 1) {
    try {
      const auto avg = average_spectrum(spectra);
      const auto fit = fit_beta(avg, ctx.cfg.spectrum_fit_range(avg), ctx.cfg.bins_per_decade);
      report::Json j = {{"average_spectrum", report::to_json(fit)}, {"members", avg.members}, {"config_digest", ctx.digest}};
      out.json("average_spectrum", j);
      out.csv("average_spectrum", report::spectrum_table(avg, &fit));
      out.svg("average_spectrum", report::spectrum_plot(avg, fit, "average spectrum"));
    } catch (const Error& e) {
      log.warn(std::string("average spectrum skipped: ") + e.what());
    }
  }
  return finish(items, log);
}

inline int cmd_mfdfa(const std::vector<Input>& inputs, const AnalysisConfig& cfg_in, Log& log,
                     std::optional<std::pair<std::size_t, std::size_t>> slice = {}) {
  const Context ctx = make_context(cfg_in, log);
  auto items = load_all(inputs, ctx, slice);
  std::vector<std::optional<MfdfaResult>> results(items.size());
  parallel_for(items.size(), ctx.cfg.jobs, [&](std::size_t i) {
    if (!items[i].result) return;
    try {
      results[i] = mfdfa_stage(items[i].result->series(), ctx.cfg);
    } catch (const Error& e) {
      items[i].error = e.what();
    }
  });
  OutputWriter out(ctx.cfg, ctx.digest);
  const auto names = item_names(items);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!results[i]) {
      items[i].result.reset();
      continue;
    }
    log_warnings(log, *items[i].result);
    auto j = base_json(*items[i].result, ctx);
    j["mfdfa"] = report::to_json(*results[i]);
    j["beta_from_H"] = beta_from_hurst(hurst_exponent(results[i]->hurst));
    out.json(names[i] + "/mfdfa", j);
    write_mfdfa(out, names[i], *results[i], *items[i].result);
  }
  return finish(items, log);
}

inline int cmd_wavelet(const std::vector<Input>& inputs, const AnalysisConfig& cfg_in, Log& log,
                       std::optional<std::pair<std::size_t, std::size_t>> slice = {}) {
  const Context ctx = make_context(cfg_in, log);
  auto items = load_all(inputs, ctx, slice);
  OutputWriter out(ctx.cfg, ctx.digest);
  const auto names = item_names(items);
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto& it = items[i];
    if (!it.result) continue;
    try {
      const auto& d = *it.result;
      const auto scales = default_wavelet_scales(d.values.size());
      auto positions = default_wavelet_positions(d.values.size());
      auto map = wavelet_map(d.series(), scales, positions);
      // report positions in full-series numbering
      for (auto& p : map.positions) p += d.from - 1;
      log_warnings(log, d);
      auto j = base_json(d, ctx);
      j["wavelet"] = report::wavelet_summary(map);
      j["wavelet"]["mother"] = "(3x - x^3) exp(-x^2/2)";
      out.json(names[i] + "/wavelet", j);
      out.csv(names[i] + "/wavelet", report::wavelet_table(map), d.source_hash);
      out.svg(names[i] + "/wavelet", report::wavelet_heatmap(map, d.title + ": |T(s, j)|"));
    } catch (const Error& e) {
      it.error = e.what();
      it.result.reset();
    }
  }
  return finish(items, log);
}

/// Surrogate series written out and compared with the original (H, delta alpha, beta).
inline int cmd_surrogate(const std::vector<Input>& inputs, const AnalysisConfig& cfg_in, Log& log,
                         const std::vector<SurrogateKind>& kinds) {
  const Context ctx = make_context(cfg_in, log);
  auto items = load_all(inputs, ctx);
  OutputWriter out(ctx.cfg, ctx.digest);
  const auto names = item_names(items);
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto& it = items[i];
    if (!it.result) continue;
    const auto& d = *it.result;
    log_warnings(log, d);
    const Series s = d.series();
    auto j = base_json(d, ctx);
    std::optional<MfdfaResult> orig;
    try {
      orig = mfdfa_stage(s, ctx.cfg);
      j["original"] = {{"H", hurst_exponent(orig->hurst)}, {"delta_alpha", orig->spectrum.delta_alpha}};
    } catch (const Error& e) {
      j["original"] = {{"error", e.what()}};
    }
    try {
      j["original"]["beta"] = spectrum_stage(s, ctx.cfg).fit.beta;
    } catch (const Error& e) {
      j["original"]["beta_error"] = e.what();
    }
    std::vector<SurrogateSummary> sums;
    for (auto k : kinds) {
      sums.push_back(run_surrogates(s, ctx.cfg, k));
      j[to_string(k)] = surrogate_json(sums.back());
      for (std::size_t n = 0; n < ctx.cfg.surrogates; ++n) {
        const Series sur = make_surrogate(s, k, surrogate_seed(ctx.cfg, k, n));
        auto t = report::series_table(sur.values, "value");
        t.note("surrogate", to_string(k)).note("seed", std::to_string(surrogate_seed(ctx.cfg, k, n)));
        out.csv(names[i] + "/" + to_string(k) + "-" + std::to_string(n), std::move(t), d.source_hash);
      }
    }
    out.json(names[i] + "/surrogates", j);
    if (orig) {
      std::vector<std::pair<std::string, const SingularitySpectrum*>> overlays;
      for (const auto& sm : sums) {
        if (sm.first_spectrum) overlays.emplace_back(to_string(sm.kind), &*sm.first_spectrum);
      }
      out.svg(names[i] + "/singularity", report::singularity_plot(orig->spectrum, d.title, overlays));
    }
  }
  return finish(items, log);
}

/// Half-width, in decades of count, of the band around the Zipf line used to
/// place the sentence-end pseudo-word.
inline constexpr double kZipfBandDecades = 0.3;

inline int cmd_zipf(const std::vector<Input>& inputs, const AnalysisConfig& cfg_in, Log& log) {
  const Context ctx = make_context(cfg_in, log);
  auto items = load_all(inputs, ctx);
  OutputWriter out(ctx.cfg, ctx.digest);
  const auto names = item_names(items);
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto& it = items[i];
    if (!it.result) continue;
    try {
      const auto& d = *it.result;
      if (!d.document) throw Error(ErrorKind::InvalidParameter, "zipf needs a text input, not a series");
      const auto words = corpus::rank_frequency(*d.document, false, ctx.cfg.fold_case);
      const auto pooled = corpus::rank_frequency(*d.document, true, ctx.cfg.fold_case);
      const auto fit = corpus::fit_zipf(words, ctx.cfg.zipf_rank_lo, ctx.cfg.zipf_rank_hi);
      auto j = base_json(d, ctx);
      j["tokens"] = words.total();
      j["types"] = words.entries.size();
      j["zipf"] = report::to_json(fit);
      for (const auto& e : pooled.entries) {
        if (e.surface != pooled.pseudo_word) continue;
        const double predicted = fit.intercept + fit.slope * std::log10(static_cast<double>(e.rank));
        const double offset = std::log10(static_cast<double>(e.count)) - predicted;
        j["sentence_end_pseudo_word"] = {{"rank", e.rank},
                                         {"count", e.count},
                                         {"log10_offset_from_fit", offset},
                                         {"band_half_width_decades", kZipfBandDecades},
                                         {"within_band", std::abs(offset) <= kZipfBandDecades}};
      }
      out.json(names[i] + "/zipf", j);
      out.csv(names[i] + "/zipf", report::rank_table(pooled, &fit), d.source_hash);
      out.svg(names[i] + "/zipf", report::zipf_plot(pooled, fit, d.title));
    } catch (const Error& e) {
      it.error = e.what();
      it.result.reset();
    }
  }
  return finish(items, log);
}

/// Survival function pooled over all inputs, with the stretched-exponential tail fit.
inline int cmd_ccdf(const std::vector<Input>& inputs, const AnalysisConfig& cfg_in, Log& log) {
  const Context ctx = make_context(cfg_in, log);
  auto items = load_all(inputs, ctx);
  std::vector<Series> pooled;
  report::Json members = report::Json::array();
  for (const auto& it : items) {
    if (!it.result) continue;
    log_warnings(log, *it.result);
    pooled.push_back(it.result->series());
    members.push_back({{"title", it.result->title}, {"source_hash", it.result->source_hash}, {"j_max", it.result->values.size()}});
  }
  const int code = finish(items, log);
  if (pooled.empty()) return code;
  OutputWriter out(ctx.cfg, ctx.digest);
  const auto c = ccdf(pooled);
  report::Json j = {{"members", members}, {"config_digest", ctx.digest}, {"config", config_json(ctx.cfg)},
                    {"n_samples", c.n_samples}};
  std::optional<TailFit> fit;
  try {
    fit = fit_stretched_exponential(c, ctx.cfg.tail_start);
    j["tail_fit"] = report::to_json(*fit);
  } catch (const Error& e) {
    j["tail_fit"] = nullptr;
    j["tail_fit_error"] = e.what();
    log.warn(std::string("tail fit skipped: ") + e.what());
  }
  out.json("ccdf", j);
  out.csv("ccdf", report::ccdf_table(c, fit ? &*fit : nullptr));
  out.svg("ccdf", report::ccdf_plot(c, fit ? &*fit : nullptr, "pooled"));
  return code;
}

struct RecurrenceResult {
  std::string target;
  std::vector<double> gaps;
  std::optional<SpectrumStage> spectrum;
  std::optional<MfdfaResult> mfdfa;
  std::map<std::string, std::string> errors;
};

inline RecurrenceResult analyze_recurrence(std::string target, std::vector<double> gaps, const AnalysisConfig& cfg) {
  RecurrenceResult r{std::move(target), std::move(gaps), {}, {}, {}};
  const Series s = make_series(r.gaps);
  try {
    r.spectrum = spectrum_stage(s, cfg);
  } catch (const Error& e) {
    r.errors["spectrum"] = e.what();
  }
  try {
    r.mfdfa = mfdfa_stage(s, cfg);
  } catch (const Error& e) {
    r.errors["mfdfa"] = e.what();
  }
  return r;
}

inline report::Json to_json(const RecurrenceResult& r) {
  report::Json j = {{"target", r.target}, {"points", r.gaps.size()}};
  j["beta"] = r.spectrum ? report::Json(r.spectrum->fit.beta) : report::Json(nullptr);
  j["spectrum"] = r.spectrum ? report::to_json(r.spectrum->fit) : report::Json(nullptr);
  j["H"] = r.mfdfa ? report::Json(hurst_exponent(r.mfdfa->hurst)) : report::Json(nullptr);
  j["delta_alpha"] = r.mfdfa ? report::Json(r.mfdfa->spectrum.delta_alpha) : report::Json(nullptr);
  report::Json errs = report::Json::object();
  for (const auto& [k, v] : r.errors) errs[k] = v;
  j["errors"] = errs;
  return j;
}

/// Recurrence series of a word (beta^w) against the sentence-end recurrence,
/// which equals the sentence-length series (beta^s).
inline int cmd_recurrence(const std::vector<Input>& inputs, const AnalysisConfig& cfg_in, Log& log) {
  const Context ctx = make_context(cfg_in, log);
  auto items = load_all(inputs, ctx);
  OutputWriter out(ctx.cfg, ctx.digest);
  const auto names = item_names(items);
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto& it = items[i];
    if (!it.result) continue;
    try {
      const auto& d = *it.result;
      if (!d.document) throw Error(ErrorKind::InvalidParameter, "recurrence needs a text input, not a series");
      const auto w = corpus::word_recurrence_series(*d.document, ctx.cfg.recurrence_word, ctx.cfg.fold_case);
      const auto e = corpus::sentence_end_recurrence(*d.document, d.segmentation->sentences);
      std::vector<double> ends(e.gaps.begin(), e.gaps.end());
      std::vector<double> slv;
      for (const auto& s : d.segmentation->sentences) slv.push_back(static_cast<double>(s.word_count));
      const auto word = analyze_recurrence(ctx.cfg.recurrence_word, {w.gaps.begin(), w.gaps.end()}, ctx.cfg);
      const auto full_stop = analyze_recurrence(e.target_word, ends, ctx.cfg);
      auto j = base_json(d, ctx);
      j["word"] = to_json(word);
      j["sentence_end"] = to_json(full_stop);
      j["sentence_end_equals_word_lengths"] = ends == slv;
      if (word.spectrum && full_stop.spectrum) j["beta_w_le_beta_s"] = word.spectrum->fit.beta <= full_stop.spectrum->fit.beta;
      if (word.mfdfa && full_stop.mfdfa) {
        j["delta_alpha_w_lt_delta_alpha_s"] = word.mfdfa->spectrum.delta_alpha < full_stop.mfdfa->spectrum.delta_alpha;
      }
      out.json(names[i] + "/recurrence", j);
      auto t = report::series_table(word.gaps, "gap");
      t.note("target", ctx.cfg.recurrence_word);
      out.csv(names[i] + "/recurrence", std::move(t), d.source_hash);
      if (word.spectrum) {
        out.svg(names[i] + "/recurrence_spectrum",
                report::spectrum_plot(word.spectrum->spectrum, word.spectrum->fit, d.title + " '" + ctx.cfg.recurrence_word + "'"));
      }
      if (word.mfdfa) {
        std::vector<std::pair<std::string, const SingularitySpectrum*>> overlays;
        if (full_stop.mfdfa) overlays.emplace_back("sentence ends", &full_stop.mfdfa->spectrum);
        out.svg(names[i] + "/recurrence_singularity",
                report::singularity_plot(word.mfdfa->spectrum, d.title + " '" + ctx.cfg.recurrence_word + "'", overlays));
      }
    } catch (const Error& e) {
      it.error = e.what();
      it.result.reset();
    }
  }
  return finish(items, log);
}

/// Explicit slice or repeated bisection to `depth` levels: at level k the
/// series is cut into 2^k contiguous parts, each analysed separately.
inline int cmd_slice(const std::vector<Input>& inputs, const AnalysisConfig& cfg_in, Log& log,
                     std::optional<std::pair<std::size_t, std::size_t>> slice, std::size_t depth) {
  const Context ctx = make_context(cfg_in, log);
  auto items = load_all(inputs, ctx, slice);
  OutputWriter out(ctx.cfg, ctx.digest);
  const auto names = item_names(items);
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto& it = items[i];
    if (!it.result) continue;
    const auto& d = *it.result;
    log_warnings(log, d);
    report::CsvTable table({"level", "part", "from", "to", "points", "H", "sigma_H", "delta_alpha", "beta", "error"});
    report::Json parts = report::Json::array();
    for (std::size_t level = 0; level <= depth; ++level) {
      const std::size_t count = std::size_t{1} << level;
      const std::size_t n = d.values.size();
      for (std::size_t p = 0; p < count; ++p) {
        const std::size_t a = p * n / count, b = (p + 1) * n / count;
        SeriesData part = d;
        part.warnings.clear();
        if (b <= a) continue;
        apply_slice(part, d.from + a, d.from + b - 1);
        std::vector<std::string> row{std::to_string(level), std::to_string(p + 1), std::to_string(part.from),
                                     std::to_string(part.to), std::to_string(part.values.size())};
        report::Json pj = {{"level", level}, {"part", p + 1}, {"from", part.from}, {"to", part.to}};
        std::string err;
        try {
          const auto mf = mfdfa_stage(part.series(), ctx.cfg);
          row.insert(row.end(), {report::num(hurst_exponent(mf.hurst)), report::num(hurst_stderr(mf.hurst)),
                                 report::num(mf.spectrum.delta_alpha)});
          pj["H"] = hurst_exponent(mf.hurst);
          pj["sigma_H"] = hurst_stderr(mf.hurst);
          pj["delta_alpha"] = mf.spectrum.delta_alpha;
        } catch (const Error& e) {
          row.insert(row.end(), {"nan", "nan", "nan"});
          err = e.what();
        }
        try {
          const double beta = spectrum_stage(part.series(), ctx.cfg).fit.beta;
          row.push_back(report::num(beta));
          pj["beta"] = beta;
        } catch (const Error& e) {
          row.push_back("nan");
          if (err.empty()) err = e.what();
        }
        row.push_back(err);
        if (!err.empty()) pj["error"] = err;
        table.add_row(row);
        parts.push_back(pj);
      }
    }
    auto j = base_json(d, ctx);
    j["depth"] = depth;
    j["parts"] = parts;
    out.json(names[i] + "/slices", j);
    out.csv(names[i] + "/slices", std::move(table), d.source_hash);
  }
  return finish(items, log);
}

}  // namespace textfract::pipeline
