#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "textfract/pipeline/commands.hpp"
#include "textfract/report/csv.hpp"
#include "textfract/report/json.hpp"
#include "textfract/series.hpp"

namespace {

using namespace textfract;
using pipeline::AnalysisConfig;
using pipeline::Input;
using pipeline::Log;

/// Options shared by every analysis subcommand.
struct Common {
  std::map<std::string, std::string> overrides;  // config key -> value
  std::string config_file;
  std::vector<std::string> texts;
  std::vector<std::string> series_csv;
  std::optional<std::size_t> from, to;
  bool quiet = false;
};

void keyed(CLI::App* sub, Common& c, const std::string& flag, const std::string& key, const std::string& help) {
  sub->add_option_function<std::string>(flag, [&c, key](const std::string& v) { c.overrides[key] = v; }, help);
}

void switched(CLI::App* sub, Common& c, const std::string& flag, const std::string& key, const std::string& value,
              const std::string& help) {
  sub->add_flag_function(flag, [&c, key, value](std::int64_t) { c.overrides[key] = value; }, help);
}

void add_common(CLI::App* sub, Common& c, bool with_slice) {
  sub->add_option("paths", c.texts, "UTF-8 plain-text inputs");
  sub->add_option("--series-csv", c.series_csv, "series CSV inputs (index,value or one column) analysed as given");
  sub->add_option("--config", c.config_file, "key=value config file; flags override it");
  keyed(sub, c, "--unit", "unit", "sentence length unit: words|chars");
  keyed(sub, c, "--language", "language", "language tag selecting the shipped lexicon (default en)");
  keyed(sub, c, "--lexicon", "lexicon", "abbreviation lexicon file");
  keyed(sub, c, "--normalization", "normalization", "NFC|NFKC|none");
  switched(sub, c, "--no-bracket-rule", "bracket_rule", "0", "terminators inside brackets and quotes always end sentences");
  switched(sub, c, "--keep-tail", "keep_tail", "1", "keep unterminated trailing text as a sentence");
  switched(sub, c, "--no-fold-case", "fold_case", "0", "case-sensitive word counting");
  keyed(sub, c, "--min-sentences", "min_sentences", "warn below this series length (default 5000)");
  keyed(sub, c, "--fit-fmin", "fit_fmin", "lower frequency of the beta fit (default 1/N)");
  keyed(sub, c, "--fit-fmax", "fit_fmax", "upper frequency of the beta fit (default top half-decade excluded)");
  keyed(sub, c, "--bins-per-decade", "bins_per_decade", "log bins per decade for the beta fit (default 20)");
  switched(sub, c, "--hann", "hann", "1", "Hann window before the periodogram");
  keyed(sub, c, "--q-min", "q_min", "smallest q (default -4)");
  keyed(sub, c, "--q-max", "q_max", "largest q (default 4)");
  keyed(sub, c, "--q-step", "q_step", "q spacing (default 0.25)");
  keyed(sub, c, "--scale-min", "scale_min", "smallest MFDFA scale (default 20)");
  keyed(sub, c, "--scale-max", "scale_max", "largest MFDFA scale (default N/5)");
  keyed(sub, c, "--scale-count", "scale_count", "log-spaced scales (default 30)");
  keyed(sub, c, "--scale-grid", "scale_grid", "log|dyadic");
  keyed(sub, c, "--detrend-order", "detrend_order", "polynomial order m (default 2)");
  keyed(sub, c, "--fit-smin", "fit_smin", "lower scale of the h(q) fit (default scale-min)");
  keyed(sub, c, "--fit-smax", "fit_smax", "upper scale of the h(q) fit (default scale-max)");
  keyed(sub, c, "--surrogates", "surrogates", "surrogates per family (default 20)");
  keyed(sub, c, "--seed", "seed", "base seed for surrogates (default 1)");
  keyed(sub, c, "--tail-start", "tail_start", "stretched-exponential fit uses lengths above this (default 100)");
  keyed(sub, c, "--word", "recurrence_word", "recurrence target word (default the)");
  keyed(sub, c, "--rank-lo", "zipf_rank_lo", "first rank of the Zipf fit (default 10)");
  keyed(sub, c, "--rank-hi", "zipf_rank_hi", "last rank of the Zipf fit (default 1000)");
  keyed(sub, c, "--out", "out_dir", "output directory, '-' for JSON on standard output");
  keyed(sub, c, "--format", "formats", "comma list of csv,json,svg");
  keyed(sub, c, "--jobs", "jobs", "worker threads for batch inputs");
  sub->add_flag("--quiet", c.quiet, "only warnings and errors on standard error");
  if (with_slice) {
    sub->add_option("--from", c.from, "first series index (1-based)");
    sub->add_option("--to", c.to, "last series index (inclusive)");
  }
}

AnalysisConfig build_config(const Common& c) {
  AnalysisConfig cfg;
  if (!c.config_file.empty()) cfg.load_file(c.config_file);
  for (const auto& [k, v] : c.overrides) cfg.set(k, v);
  return cfg;
}

std::vector<Input> inputs_of(const Common& c) {
  std::vector<Input> in;
  for (const auto& p : c.texts) in.push_back({p, pipeline::InputKind::Text});
  for (const auto& p : c.series_csv) in.push_back({p, pipeline::InputKind::SeriesCsv});
  if (in.empty()) throw Error(ErrorKind::EmptyInput, "no input paths given");
  return in;
}

std::optional<std::pair<std::size_t, std::size_t>> slice_of(const Common& c) {
  if (!c.from && !c.to) return std::nullopt;
  return std::pair{c.from.value_or(1), c.to.value_or(static_cast<std::size_t>(-1))};
}

struct GenerateArgs {
  std::string kind;
  double p = 0.3;
  int levels = 16;
  double hurst = 0.8;
  std::size_t n = 65536;
  std::uint64_t seed = 1;
  std::string dist = "gaussian";
};

int generate(const GenerateArgs& g) {
  Series s;
  if (g.kind == "cascade") {
    s = generate_binomial_cascade(g.p, g.levels);
  } else if (g.kind == "fgn") {
    s = generate_fgn(g.hurst, g.n, g.seed);
  } else if (g.kind == "noise") {
    if (g.dist == "gaussian") {
      s = generate_white_noise(g.n, g.seed);
    } else {
      s = generate_white_noise(g.n, g.seed, UniformIntegerDist{1, 50});
    }
  } else {
    throw Error(ErrorKind::InvalidParameter, "unknown generator '" + g.kind + "'");
  }
  auto t = report::series_table(s.values, "value");
  t.note("provenance", report::to_json(s.provenance).dump());
  std::cout << t.str();
  return pipeline::kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractal and multifractal analysis of sentence-length variability in texts"};
  app.name("textfract");
  app.require_subcommand(1);

  Common c;
  std::string kind = "both";
  std::size_t depth = 2;
  GenerateArgs gen;

  auto* analyze = app.add_subcommand("analyze", "full pipeline per text plus corpus scatter and average spectrum");
  auto* spectrum = app.add_subcommand("spectrum", "power spectrum and beta fit");
  auto* mfdfa = app.add_subcommand("mfdfa", "fluctuation functions, h(q) and f(alpha)");
  auto* wavelet = app.add_subcommand("wavelet", "wavelet map |T(s, j)|");
  auto* surrogate = app.add_subcommand("surrogate", "shuffled and phase-randomized surrogates against the original");
  auto* zipf = app.add_subcommand("zipf", "rank-frequency table with the sentence-end pseudo-word");
  auto* ccdf = app.add_subcommand("ccdf", "pooled survival function and stretched-exponential tail");
  auto* recurrence = app.add_subcommand("recurrence", "recurrence series of a word against sentence ends");
  auto* slice = app.add_subcommand("slice", "analysis of a slice or of successive bisections");
  auto* generate_cmd = app.add_subcommand("generate", "write a synthetic series as CSV to standard output");

  for (auto* sub : {analyze, spectrum, mfdfa, wavelet, surrogate, zipf, ccdf, recurrence, slice}) {
    add_common(sub, c, sub == spectrum || sub == mfdfa || sub == wavelet || sub == slice);
  }
  surrogate->add_option("--kind", kind, "shuffle|phase|both")->check(CLI::IsMember({"shuffle", "phase", "both"}));
  slice->add_option("--depth", depth, "bisection levels (default 2)");
  generate_cmd->add_option("kind", gen.kind, "cascade|fgn|noise")->required()->check(CLI::IsMember({"cascade", "fgn", "noise"}));
  generate_cmd->add_option("--p", gen.p, "cascade weight p (default 0.3)");
  generate_cmd->add_option("--levels", gen.levels, "cascade levels (default 16)");
  generate_cmd->add_option("--hurst", gen.hurst, "fGn Hurst exponent (default 0.8)");
  generate_cmd->add_option("--n", gen.n, "series length for fgn and noise (default 65536)");
  generate_cmd->add_option("--seed", gen.seed, "seed (default 1)");
  generate_cmd->add_option("--dist", gen.dist, "noise distribution gaussian|uniform-int")
      ->check(CLI::IsMember({"gaussian", "uniform-int"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? pipeline::kOk : pipeline::kFatal;
  }

  Log log(c.quiet);
  try {
    if (generate_cmd->parsed()) return generate(gen);
    const AnalysisConfig cfg = build_config(c);
    const auto inputs = inputs_of(c);
    if (analyze->parsed()) return pipeline::cmd_analyze(inputs, cfg, log);
    if (spectrum->parsed()) return pipeline::cmd_spectrum(inputs, cfg, log, slice_of(c));
    if (mfdfa->parsed()) return pipeline::cmd_mfdfa(inputs, cfg, log, slice_of(c));
    if (wavelet->parsed()) return pipeline::cmd_wavelet(inputs, cfg, log, slice_of(c));
    if (surrogate->parsed()) {
      std::vector<pipeline::SurrogateKind> kinds;
      if (kind != "phase") kinds.push_back(pipeline::SurrogateKind::Shuffled);
      if (kind != "shuffle") kinds.push_back(pipeline::SurrogateKind::PhaseRandomized);
      return pipeline::cmd_surrogate(inputs, cfg, log, kinds);
    }
    if (zipf->parsed()) return pipeline::cmd_zipf(inputs, cfg, log);
    if (ccdf->parsed()) return pipeline::cmd_ccdf(inputs, cfg, log);
    if (recurrence->parsed()) return pipeline::cmd_recurrence(inputs, cfg, log);
    if (slice->parsed()) return pipeline::cmd_slice(inputs, cfg, log, slice_of(c), depth);
  } catch (const std::exception& e) {
    log.error(e.what());
    return pipeline::kFatal;
  }
  return pipeline::kFatal;
}
