#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "textfract/corpus/extract.hpp"
#include "textfract/distfit.hpp"
#include "textfract/mfdfa.hpp"
#include "textfract/report/csv.hpp"
#include "textfract/report/svg.hpp"
#include "textfract/spectral.hpp"

namespace textfract::report {

inline std::string spectrum_plot(const PowerSpectrum& ps, const SpectrumFit& fit, const std::string& title) {
  Plot p(title + ": beta = " + format_number(std::round(fit.beta * 1000) / 1000) + " +- " +
             format_number(std::round(fit.sigma_beta * 1000) / 1000),
         "frequency f", "S(f)", true, true);
  p.points(ps.freqs, ps.power, "#9db4d0", "periodogram", 1.2);
  const double lo = fit.fit_range.lo, hi = fit.fit_range.hi;
  auto line = [&](double f) { return std::pow(10.0, fit.intercept - fit.beta * std::log10(f)); };
  p.line({lo, hi}, {line(lo), line(hi)}, "#d62728", "fit over [" + format_number(lo) + ", " + format_number(hi) + "]", 2.0);
  return p.render();
}

inline std::string surface_plot(const FluctuationSurface& surf, const std::string& title) {
  Plot p(title + ": F_q(s), m = " + std::to_string(surf.detrend_order), "scale s", "F_q(s)", true, true);
  std::vector<double> s(surf.scales.begin(), surf.scales.end());
  const std::size_t stride = std::max<std::size_t>(1, surf.q_values.size() / 8);
  std::size_t colour = 0;
  for (std::size_t qi = 0; qi < surf.q_values.size(); qi += stride) {
    const char* c = svg_detail::palette(colour++);
    p.points(s, surf.F[qi], c, "q = " + format_number(surf.q_values[qi]), 2.2);
    p.line(s, surf.F[qi], c, {}, 1.0);
  }
  return p.render();
}

inline std::string singularity_plot(const SingularitySpectrum& sp, const std::string& title,
                                    const std::vector<std::pair<std::string, const SingularitySpectrum*>>& others = {}) {
  Plot p(title + ": f(alpha), delta alpha = " + format_number(std::round(sp.delta_alpha * 1000) / 1000), "alpha",
         "f(alpha)", false, false);
  p.line(sp.alphas, sp.f_values, "#1f77b4", "original", 1.5).points(sp.alphas, sp.f_values, "#1f77b4");
  std::size_t colour = 1;
  for (const auto& [name, o] : others) {
    if (!o) continue;
    const char* c = svg_detail::palette(colour++);
    p.line(o->alphas, o->f_values, c, name, 1.5, true).points(o->alphas, o->f_values, c);
  }
  return p.render();
}

inline std::string ccdf_plot(const CCDF& c, const TailFit* fit, const std::string& title) {
  Plot p(title + ": survival of sentence length", "length l", "F(l)", false, true);
  p.points(c.lengths, c.survival, "#1f77b4", "empirical", 1.8);
  if (fit) {
    std::vector<double> x, y;
    for (double l = std::max(1.0, fit->fit_lo); l <= std::max(fit->fit_hi, fit->fit_lo + 1.0); l += 1.0) {
      x.push_back(l);
      y.push_back(std::exp(-fit->mu * std::pow(l, fit->b)));
    }
    p.line(x, y, "#d62728",
           "exp(-" + format_number(std::round(fit->mu * 1e4) / 1e4) + " l^" + format_number(std::round(fit->b * 1e3) / 1e3) + ")",
           2.0);
  }
  return p.render();
}

struct ScatterEntry {
  std::string name;
  double hurst;
  double delta_alpha;
};

inline std::string scatter_plot(const std::vector<ScatterEntry>& pts, std::optional<double> band_lo,
                                std::optional<double> band_hi, const std::string& title) {
  Plot p(title, "H", "delta alpha", false, false);
  if (band_lo && band_hi) p.hband(*band_lo, *band_hi, "#7f7f7f", "shuffled band");
  std::vector<double> x, y;
  std::vector<std::string> names;
  for (const auto& e : pts) {
    x.push_back(e.hurst);
    y.push_back(e.delta_alpha);
    names.push_back(e.name);
  }
  p.labelled_points(x, y, names, "#1f77b4");
  return p.render();
}

inline std::string zipf_plot(const corpus::RankFrequencyTable& t, const corpus::ZipfFit& fit, const std::string& title) {
  Plot p(title + ": rank-frequency, slope = " + format_number(std::round(fit.slope * 1000) / 1000), "rank", "count",
         true, true);
  std::vector<double> r, c, pr, pc;
  for (const auto& e : t.entries) {
    (e.surface == t.pseudo_word && t.include_terminators ? pr : r).push_back(static_cast<double>(e.rank));
    (e.surface == t.pseudo_word && t.include_terminators ? pc : c).push_back(static_cast<double>(e.count));
  }
  p.points(r, c, "#1f77b4", "words", 1.2);
  if (!pr.empty()) p.points(pr, pc, "#d62728", "sentence ends", 4.0);
  const double lo = static_cast<double>(fit.rank_lo), hi = static_cast<double>(fit.rank_hi);
  auto f = [&](double x) { return std::pow(10.0, fit.intercept + fit.slope * std::log10(x)); };
  p.line({lo, hi}, {f(lo), f(hi)}, "#2ca02c", "fit, ranks " + std::to_string(fit.rank_lo) + "-" + std::to_string(fit.rank_hi), 2.0);
  return p.render();
}

}  // namespace textfract::report
