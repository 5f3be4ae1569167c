#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "textfract/corpus/extract.hpp"
#include "textfract/distfit.hpp"
#include "textfract/mfdfa.hpp"
#include "textfract/spectral.hpp"
#include "textfract/wavelet.hpp"

namespace textfract::report {

/// 12 significant digits, "nan" and "inf" spelled out.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Comma-separated table with "# key=value" preamble lines.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  CsvTable& note(const std::string& key, const std::string& value) {
    notes_.emplace_back(key, value);
    return *this;
  }
  CsvTable& note(const std::string& key, double value) { return note(key, format_number(value)); }
  CsvTable& note_front(const std::string& key, const std::string& value) {
    notes_.insert(notes_.begin(), {key, value});
    return *this;
  }

  void add_row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

  std::size_t rows() const noexcept { return rows_.size(); }

  std::string str() const {
    std::ostringstream out;
    for (const auto& [k, v] : notes_) out << "# " << k << "=" << v << "\n";
    write_row(out, header_);
    for (const auto& r : rows_) write_row(out, r);
    return out.str();
  }

 private:
  static std::string quote(const std::string& cell) {
    if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
    std::string q = "\"";
    for (char c : cell) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  static void write_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << quote(cells[i]);
    out << "\n";
  }

  std::vector<std::string> header_;
  std::vector<std::pair<std::string, std::string>> notes_;
  std::vector<std::vector<std::string>> rows_;
};

inline std::string num(double v) { return format_number(v); }
inline std::string num(std::size_t v) { return std::to_string(v); }

inline CsvTable series_table(const std::vector<double>& values, const std::string& column = "length") {
  CsvTable t({"index", column});
  for (std::size_t i = 0; i < values.size(); ++i) t.add_row({num(i + 1), num(values[i])});
  return t;
}

inline CsvTable sentence_table(const std::vector<corpus::Sentence>& sentences) {
  CsvTable t({"index", "words", "chars", "first_token", "last_token", "terminated"});
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const auto& s = sentences[i];
    t.add_row({num(i + 1), num(s.word_count), num(s.char_count), num(s.begin), num(s.end - 1),
               s.terminated ? "1" : "0"});
  }
  return t;
}

inline CsvTable spectrum_table(const PowerSpectrum& ps, const SpectrumFit* fit = nullptr) {
  CsvTable t({"frequency", "power", "in_fit_range"});
  t.note("n_samples", num(ps.n_samples)).note("members", num(ps.members));
  if (fit) {
    t.note("beta", fit->beta).note("sigma_beta", fit->sigma_beta);
    t.note("fit_fmin", fit->fit_range.lo).note("fit_fmax", fit->fit_range.hi).note("binning", fit->binning());
  }
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const bool in = fit && ps.freqs[i] >= fit->fit_range.lo && ps.freqs[i] <= fit->fit_range.hi;
    t.add_row({num(ps.freqs[i]), num(ps.power[i]), in ? "1" : "0"});
  }
  return t;
}

inline CsvTable surface_table(const FluctuationSurface& surf) {
  CsvTable t({"s", "q", "F"});
  t.note("detrend_order", num(static_cast<std::size_t>(surf.detrend_order)))
      .note("series_length", num(surf.series_length));
  for (std::size_t si = 0; si < surf.scales.size(); ++si) {
    for (std::size_t qi = 0; qi < surf.q_values.size(); ++qi) {
      t.add_row({num(surf.scales[si]), num(surf.q_values[qi]), num(surf.F[qi][si])});
    }
  }
  return t;
}

inline CsvTable hurst_table(const GeneralizedHurst& gh) {
  CsvTable t({"q", "h", "h_stderr"});
  t.note("fit_smin", gh.fit_scale_range.lo).note("fit_smax", gh.fit_scale_range.hi).note("scales_used", num(gh.scales_used));
  for (std::size_t i = 0; i < gh.q_values.size(); ++i) t.add_row({num(gh.q_values[i]), num(gh.h[i]), num(gh.h_stderr[i])});
  return t;
}

inline CsvTable singularity_table(const SingularitySpectrum& sp) {
  CsvTable t({"q", "alpha", "f"});
  t.note("delta_alpha", sp.delta_alpha).note("alpha_at_peak", sp.alpha_at_peak);
  for (std::size_t i = 0; i < sp.q_values.size(); ++i) t.add_row({num(sp.q_values[i]), num(sp.alphas[i]), num(sp.f_values[i])});
  return t;
}

inline CsvTable wavelet_table(const WaveletMap& map) {
  CsvTable t({"scale", "position", "coefficient", "edge_affected"});
  for (std::size_t si = 0; si < map.scales.size(); ++si) {
    for (std::size_t k = 0; k < map.positions.size(); ++k) {
      t.add_row({num(map.scales[si]), num(map.positions[k]), num(map.coefficients[si][k]),
                 map.edge_affected[si][k] ? "1" : "0"});
    }
  }
  return t;
}

inline CsvTable ccdf_table(const CCDF& c, const TailFit* fit = nullptr) {
  CsvTable t({"length", "survival"});
  t.note("n_samples", num(c.n_samples));
  if (fit) t.note("mu", fit->mu).note("b", fit->b).note("tail_start", fit->fit_lo).note("tail_end", fit->fit_hi);
  for (std::size_t i = 0; i < c.size(); ++i) t.add_row({num(c.lengths[i]), num(c.survival[i])});
  return t;
}

inline CsvTable rank_table(const corpus::RankFrequencyTable& table, const corpus::ZipfFit* fit = nullptr) {
  CsvTable t({"rank", "token", "count"});
  if (fit) {
    t.note("zipf_slope", fit->slope).note("zipf_intercept", fit->intercept);
    t.note("rank_lo", num(fit->rank_lo)).note("rank_hi", num(fit->rank_hi));
  }
  for (const auto& e : table.entries) t.add_row({num(e.rank), e.surface, num(e.count)});
  return t;
}

}  // namespace textfract::report
