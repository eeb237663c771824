#pragma once

// JSON and SVG renderings of barcodes, reports and complexes, and atomic file output.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "seqbar/errors.hpp"
#include "seqbar/ingest.hpp"
#include "seqbar/persistence.hpp"
#include "seqbar/rational.hpp"
#include "seqbar/sequents.hpp"
#include "seqbar/stability.hpp"
#include "seqbar/topology.hpp"

namespace seqbar {

/// Writes through a sibling temp file and renames it into place.
inline void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into '" + path + "'");
  }
}

inline std::string dump(const ojson& doc) { return doc.dump(2) + "\n"; }

inline ojson names_json(const std::vector<std::string>& names) {
  ojson a = ojson::array();
  for (const auto& n : names) a.push_back(n);
  return a;
}

inline ojson caps_json(const SequentCaps& caps) {
  ojson c;
  c["max_gamma"] = caps.max_gamma ? ojson(*caps.max_gamma) : ojson(nullptr);
  c["max_delta"] = caps.max_delta ? ojson(*caps.max_delta) : ojson(nullptr);
  c["include_empty_gamma"] = caps.include_empty_gamma;
  c["include_empty_delta"] = caps.include_empty_delta;
  return c;
}

inline ojson filtration_conventions(FiltrationKind kind) {
  ojson c;
  if (kind == FiltrationKind::I) {
    c["birth"] = "1 - m(meet(Gamma) & join(Delta)) / m(meet(Gamma))";
    c["null_meet"] = "vacuous inclusion: birth 0";
  } else {
    c["birth"] = "1 - m(truth set); member when m(truth set) >= 1 - t";
  }
  c["intervals"] = "half-open [birth, death); closed [birth, 1] when minimal at t = 1";
  return c;
}

/// {metadata, bars, births}; bars in ranking order.
inline ojson barcode_json(const SequentUniverse& u, const BirthTable& births, std::vector<PosetBar> bars,
                          bool with_births = true) {
  rank_bars(u, bars);
  ojson doc;
  auto& meta = doc["metadata"];
  meta["filtration"] = to_string(births.kind);
  meta["caps"] = caps_json(u.caps());
  meta["universe_size"] = u.size();
  meta["antecedent_vars"] = names_json(u.variables().antecedents());
  meta["consequent_vars"] = names_json(u.variables().consequents());
  meta["data_digest"] = births.digest;
  meta["conventions"] = filtration_conventions(births.kind);
  doc["bars"] = ojson::array();
  for (const auto& b : bars) {
    ojson j;
    j["gamma"] = names_json(u.gamma_names(b.sequent));
    j["delta"] = names_json(u.delta_names(b.sequent));
    j["birth"] = to_string(b.birth);
    j["death"] = to_string(b.death);
    j["closed_at_end"] = b.closed_at_end;
    j["length"] = to_string(b.length());
    doc["bars"].push_back(std::move(j));
  }
  if (with_births) {
    doc["births"] = ojson::array();
    for (std::size_t i = 0; i < u.size(); ++i) {
      ojson j;
      j["gamma"] = names_json(u.gamma_names(u[i]));
      j["delta"] = names_json(u.delta_names(u[i]));
      j["birth"] = to_string(births[i]);
      doc["births"].push_back(std::move(j));
    }
  }
  return doc;
}

inline std::string death_string(const std::optional<Rational>& d) { return d ? to_string(*d) : "inf"; }

inline ojson persistence_json(const std::vector<PersistenceBar>& bars, ojson metadata = ojson::object()) {
  ojson doc;
  doc["metadata"] = std::move(metadata);
  doc["bars"] = ojson::array();
  for (const auto& b : bars) {
    ojson j;
    j["dim"] = b.dim;
    j["birth"] = to_string(b.birth);
    j["death"] = death_string(b.death);
    j["multiplicity"] = b.multiplicity;
    doc["bars"].push_back(std::move(j));
  }
  return doc;
}

inline ojson complex_metadata(const FilteredChainComplex& c) {
  ojson m;
  m["complex"] = to_string(c.kind);
  m["cells"] = c.size();
  ojson census = ojson::array();
  for (auto n : c.census()) census.push_back(n);
  m["cells_per_dim"] = std::move(census);
  m["coefficients"] = "Z/2";
  if (c.kind == ComplexKind::suspension)
    m["suspension_basepoints"] = "successively smaller chain elements";
  return m;
}

/// Debug dump: every cell with its name, birth and boundary (as cell labels).
inline ojson complex_json(const FilteredChainComplex& c) {
  ojson doc;
  doc["metadata"] = complex_metadata(c);
  doc["cells"] = ojson::array();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& e = c[i];
    ojson j;
    if (c.kind == ComplexKind::suspension) {
      const auto cell = key_cell(e.key);
      j["base"] = c.names[cell.base];
      j["decorations"] = ojson::array();
      for (const auto& [u, d] : cell.decorations) j["decorations"].push_back({c.names[u], to_string(d)});
    } else {
      j["vertices"] = ojson::array();
      for (auto v : e.key) j["vertices"].push_back(c.names[v]);
    }
    j["dim"] = e.dim;
    j["birth"] = to_string(e.birth);
    j["boundary"] = ojson::array();
    for (auto f : e.boundary) j["boundary"].push_back(c.label(f));
    doc["cells"].push_back(std::move(j));
  }
  return doc;
}

inline ojson stability_json(const StabilityReport& r, const SequentUniverse& u) {
  ojson doc;
  doc["satisfied"] = r.satisfied;
  doc["eps"] = to_string(r.eps);
  doc["delta"] = to_string(r.delta);
  doc["data_distance"] = to_string(r.data_distance);
  doc["barcode_distance"] = to_string(r.barcode_distance);
  doc["lemma_constant"] = to_string(r.lemma_constant);
  doc["theorem_constant"] = to_string(r.theorem_constant);
  doc["summed_bound"] = to_string(r.theorem_constant * r.data_distance);
  doc["empirical_ratio"] = to_string(r.empirical_ratio());
  doc["universe_size"] = r.universe_size;
  doc["subfiltration_size"] = r.subfiltration_size;
  doc["per_sequent_ok"] = r.per_sequent_ok;
  doc["summed_ok"] = r.summed_ok;
  doc["lemma_constant_bounds_sum"] = r.lemma_constant_bounds_sum;
  doc["per_sequent"] = ojson::array();
  for (const auto& d : r.per_sequent) {
    ojson j;
    j["gamma"] = names_json(u.gamma_names(d.sequent));
    j["delta"] = names_json(u.delta_names(d.sequent));
    j["deviation"] = to_string(d.deviation);
    j["bound"] = to_string(d.bound);
    doc["per_sequent"].push_back(std::move(j));
  }
  return doc;
}

inline ojson persistence_bar_json(const PersistenceBar& b) {
  ojson j;
  j["dim"] = b.dim;
  j["birth"] = to_string(b.birth);
  j["death"] = death_string(b.death);
  j["multiplicity"] = b.multiplicity;
  return j;
}

inline ojson embedding_json(const EmbeddingReport& r, const FilteredPoset& fp) {
  ojson doc;
  doc["overall"] = r.overall;
  doc["complex"] = to_string(r.kind);
  doc["maximum"] = fp.poset.name(r.maximum);
  doc["cells"] = r.cells;
  doc["interval_mapping"] = "poset [t, t') matches persistence (t, t'); closed at 1 matches (t, inf)";
  doc["entries"] = ojson::array();
  for (const auto& e : r.entries) {
    ojson j;
    j["element"] = e.name;
    j["birth"] = to_string(e.birth);
    j["death"] = to_string(e.death);
    j["closed_at_end"] = e.closed_at_end;
    j["matched"] = e.matched;
    j["match"] = e.match ? persistence_bar_json(*e.match) : ojson(nullptr);
    doc["entries"].push_back(std::move(j));
  }
  doc["persistence"] = persistence_json(r.persistence)["bars"];
  return doc;
}

// ---------------------------------------------------------------------------------------
// SVG

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  return out;
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct SvgRow {
  std::string label;
  double birth, death;
  bool open_right;  // draw an arrow for ∞
  std::string color;
};

inline std::string svg_bars(const std::string& title, const std::vector<SvgRow>& rows, double axis_max) {
  const double left = 260, plot = 420, row_h = 16, top = 40;
  const double height = top + row_h * static_cast<double>(rows.size()) + 40;
  const double width = left + plot + 30;
  auto x = [&](double t) { return left + plot * (t / axis_max); };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << fmt(left) << "\" y=\"20\" font-size=\"13\">" << xml_escape(title) << "</text>\n";
  const double axis_y = top + row_h * static_cast<double>(rows.size()) + 8;
  s << "<line x1=\"" << fmt(x(0)) << "\" y1=\"" << fmt(axis_y) << "\" x2=\"" << fmt(x(axis_max)) << "\" y2=\""
    << fmt(axis_y) << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double t = axis_max * k / 5.0;
    s << "<line x1=\"" << fmt(x(t)) << "\" y1=\"" << fmt(top - 4) << "\" x2=\"" << fmt(x(t)) << "\" y2=\""
      << fmt(axis_y + 4) << "\" stroke=\"#ddd\"/>\n";
    s << "<text x=\"" << fmt(x(t)) << "\" y=\"" << fmt(axis_y + 18) << "\" text-anchor=\"middle\">" << fmt(t)
      << "</text>\n";
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const double y = top + row_h * static_cast<double>(i);
    s << "<text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(y + 11) << "\" text-anchor=\"end\">" << xml_escape(r.label)
      << "</text>\n";
    const double w = std::max(x(r.death) - x(r.birth), 2.0);
    s << "<rect x=\"" << fmt(x(r.birth)) << "\" y=\"" << fmt(y + 3) << "\" width=\"" << fmt(w)
      << "\" height=\"10\" fill=\"" << r.color << "\"/>\n";
    if (r.open_right)
      s << "<path d=\"M" << fmt(x(r.death)) << ' ' << fmt(y + 1) << " l8 7 l-8 7 z\" fill=\"" << r.color << "\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace detail

/// Horizontal bars on [0,1], longest first, labeled "Γ ⊢ Δ".
inline std::string barcode_svg(const SequentUniverse& u, std::vector<PosetBar> bars, const std::string& title) {
  rank_bars(u, bars);
  std::vector<detail::SvgRow> rows;
  for (const auto& b : bars)
    rows.push_back({u.label(b.sequent), to_double(b.birth), to_double(b.death), false, "#3b6ea5"});
  return detail::svg_bars(title, rows, 1.0);
}

/// One block per dimension; infinite bars run to the right edge with an arrow.
inline std::string persistence_svg(const std::vector<PersistenceBar>& bars, const std::string& title) {
  static const char* colors[] = {"#3b6ea5", "#c0504d", "#4f9a4f", "#8064a2", "#d98c1f"};
  double end = 1.0;
  for (const auto& b : bars) {
    end = std::max(end, to_double(b.birth));
    if (b.death) end = std::max(end, to_double(*b.death));
  }
  std::vector<detail::SvgRow> rows;
  for (const auto& b : bars)
    for (std::size_t k = 0; k < b.multiplicity; ++k)
      rows.push_back({"H" + std::to_string(b.dim) + " [" + to_string(b.birth) + ", " + death_string(b.death) + ")",
                      to_double(b.birth), b.death ? to_double(*b.death) : end, !b.death, colors[b.dim % 5]});
  return detail::svg_bars(title, rows, end);
}

}  // namespace seqbar
