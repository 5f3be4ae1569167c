#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "textfract/corpus/extract.hpp"
#include "textfract/corpus/segment.hpp"
#include "textfract/distfit.hpp"
#include "textfract/mfdfa.hpp"
#include "textfract/series.hpp"
#include "textfract/spectral.hpp"
#include "textfract/wavelet.hpp"

namespace textfract::report {

using Json = nlohmann::ordered_json;

inline Json to_json(const Provenance& p) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, provenance::Empirical>) {
          return {{"kind", "empirical"}};
        } else if constexpr (std::is_same_v<T, provenance::Shuffled>) {
          return {{"kind", "shuffled"}, {"seed", v.seed}};
        } else if constexpr (std::is_same_v<T, provenance::PhaseRandomized>) {
          return {{"kind", "phase-randomized"}, {"seed", v.seed}};
        } else {
          Json params = Json::object();
          for (const auto& [k, x] : v.params) params[k] = x;
          return {{"kind", v.kind}, {"params", params}, {"seed", v.seed}};
        }
      },
      p);
}

inline Json to_json(const SpectrumFit& f) {
  return {{"beta", f.beta},
          {"sigma_beta", f.sigma_beta},
          {"fit_fmin", f.fit_range.lo},
          {"fit_fmax", f.fit_range.hi},
          {"binning", f.binning()},
          {"points_used", f.points_used},
          {"bins_used", f.bins_used},
          {"r_squared", f.r_squared},
          {"intercept_log10", f.intercept}};
}

inline Json to_json(const GeneralizedHurst& gh) {
  return {{"q", gh.q_values},
          {"h", gh.h},
          {"h_stderr", gh.h_stderr},
          {"fit_smin", gh.fit_scale_range.lo},
          {"fit_smax", gh.fit_scale_range.hi},
          {"scales_used", gh.scales_used},
          {"non_increasing", gh.non_increasing}};
}

inline Json to_json(const SingularitySpectrum& sp) {
  return {{"alpha", sp.alphas},
          {"f", sp.f_values},
          {"delta_alpha", sp.delta_alpha},
          {"alpha_min", sp.alpha_min},
          {"alpha_max", sp.alpha_max},
          {"alpha_at_peak", sp.alpha_at_peak},
          {"f_exceeds_one", sp.f_exceeds_one}};
}

inline Json grid_json(const FluctuationSurface& surf) {
  return {{"scales", surf.scales},
          {"n_segments", surf.n_segments},
          {"detrend_order", surf.detrend_order},
          {"series_length", surf.series_length}};
}

inline Json to_json(const MfdfaResult& r) {
  Json j = {{"grid", grid_json(r.surface)}, {"generalized_hurst", to_json(r.hurst)}, {"singularity", to_json(r.spectrum)}};
  j["H"] = hurst_exponent(r.hurst);
  j["sigma_H"] = hurst_stderr(r.hurst);
  j["delta_alpha"] = r.spectrum.delta_alpha;
  return j;
}

inline Json to_json(const TailFit& t) {
  return {{"mu", t.mu},
          {"b", t.b},
          {"b_stderr", t.b_stderr},
          {"tail_start_exclusive", t.fit_lo},
          {"tail_end", t.fit_hi},
          {"points_used", t.points_used},
          {"excluded_unit_survival", t.excluded_unit_survival},
          {"rms_residual", t.residual}};
}

inline Json to_json(const corpus::SegmentationReport& r) {
  return {{"sentences", r.sentences},
          {"lexicon_hits", r.lexicon_hits},
          {"initial_hits", r.initial_hits},
          {"bracket_suppressed", r.bracket_suppressed},
          {"ellipsis_continuations", r.ellipsis_continuations},
          {"empty_sentences_skipped", r.empty_sentences_skipped},
          {"dropped_tail_words", r.dropped_tail_words},
          {"tail_emitted", r.tail_emitted}};
}

inline Json to_json(const corpus::ZipfFit& z) {
  return {{"slope", z.slope}, {"intercept_log10", z.intercept}, {"residual_sd_log10", z.residual_sd},
          {"rank_lo", z.rank_lo}, {"rank_hi", z.rank_hi}};
}

inline Json wavelet_summary(const WaveletMap& m) {
  std::size_t edge = 0;
  for (const auto& row : m.edge_affected) {
    for (bool b : row) edge += b;
  }
  return {{"scales", m.scales},
          {"positions", m.positions.size()},
          {"first_position", m.positions.empty() ? 0 : m.positions.front()},
          {"last_position", m.positions.empty() ? 0 : m.positions.back()},
          {"edge_affected_cells", edge},
          {"support_cutoff", kWaveletSupport}};
}

/// Mean and variance (population) of a series.
inline Json moments_json(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - m) * (x - m);
  var /= static_cast<double>(v.size());
  return {{"mean", m}, {"variance", var}};
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace textfract::report
