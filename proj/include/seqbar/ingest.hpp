#pragma once

// Loading data maps: the dataset JSON format, DepMap-style CSV matrices, and a synthetic
// generator in the DepMap layout with a planted implication.

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seqbar/errors.hpp"
#include "seqbar/measure.hpp"
#include "seqbar/poset.hpp"
#include "seqbar/topology.hpp"
#include "seqbar/rational.hpp"

namespace seqbar {

using ojson = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path + "'");
  return ss.str();
}

struct LoadedDataset {
  DataMap map;
  std::vector<std::string> warnings;
};

namespace detail {

inline const ojson& field(const ojson& doc, const char* name, const std::string& ctx) {
  auto it = doc.find(name);
  if (it == doc.end()) throw ValidationError(ctx + ": missing field '" + name + "'");
  return *it;
}

inline std::vector<std::string> string_array(const ojson& v, const std::string& where) {
  if (!v.is_array()) throw ValidationError(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) throw ValidationError(where + "[" + std::to_string(i) + "]: expected a string");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

inline std::pair<std::vector<std::string>, std::vector<MSet>> variable_block(const ojson& doc, const char* name,
                                                                              const MeasureSpace& space,
                                                                              const std::string& ctx,
                                                                              std::vector<std::string>& warnings) {
  const auto& block = field(doc, name, ctx);
  if (!block.is_object()) throw ValidationError(ctx + ": field '" + name + "' must be an object");
  if (block.empty()) warnings.push_back(std::string(name) + " is empty");
  std::vector<std::string> names;
  std::vector<MSet> sets;
  for (const auto& [var, members] : block.items()) {
    const std::string where = ctx + ": field '" + name + "." + var + "'";
    auto elems = string_array(members, where);
    std::vector<std::size_t> idx;
    for (const auto& e : elems) {
      auto i = space.index_of(e);
      if (!i) throw ValidationError(where + ": unknown ground element '" + e + "'");
      idx.push_back(*i);
    }
    names.push_back(var);
    sets.push_back(space.subset_of_indices(idx));
  }
  return {std::move(names), std::move(sets)};
}

}  // namespace detail

/// Parses a dataset document; `ctx` prefixes error messages (usually the file name).
inline LoadedDataset parse_dataset(const std::string& text, const std::string& ctx = "dataset") {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw ValidationError(ctx + ": " + e.what());
  }
  if (!doc.is_object()) throw ValidationError(ctx + ": top level must be an object");
  for (const auto& [key, value] : doc.items())
    if (key != "ground" && key != "weights" && key != "antecedent_vars" && key != "consequent_vars")
      throw ValidationError(ctx + ": unknown field '" + key + "'");

  auto ground = detail::string_array(detail::field(doc, "ground", ctx), ctx + ": field 'ground'");
  std::optional<MeasureSpace> space;
  try {
    if (doc.contains("weights")) {
      auto raw = detail::string_array(doc["weights"], ctx + ": field 'weights'");
      if (raw.size() != ground.size())
        throw ValidationError(ctx + ": field 'weights' has " + std::to_string(raw.size()) + " entries for " +
                              std::to_string(ground.size()) + " ground elements");
      std::vector<Rational> w;
      for (std::size_t i = 0; i < raw.size(); ++i) {
        try {
          w.push_back(parse_rational(raw[i]));
        } catch (const UsageError& e) {
          throw ValidationError(ctx + ": field 'weights[" + std::to_string(i) + "]': " + e.what());
        }
      }
      space = MeasureSpace::weighted(std::move(ground), std::move(w));
    } else {
      space = MeasureSpace::counting(std::move(ground));
    }
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind(ctx + ":", 0) == 0) throw;
    throw ValidationError(ctx + ": " + what);
  } catch (const UsageError& e) {
    throw ValidationError(ctx + ": " + e.what());
  }

  std::vector<std::string> warnings;
  auto [an, as] = detail::variable_block(doc, "antecedent_vars", *space, ctx, warnings);
  auto [cn, cs] = detail::variable_block(doc, "consequent_vars", *space, ctx, warnings);
  try {
    VariableUniverse vars(std::move(an), std::move(cn));
    return {DataMap(*space, std::move(vars), std::move(as), std::move(cs)), std::move(warnings)};
  } catch (const ValidationError& e) {
    throw ValidationError(ctx + ": " + e.what());
  }
}

inline LoadedDataset load_dataset(const std::string& path) { return parse_dataset(read_file(path), path); }

inline ojson dataset_json(const DataMap& map) {
  const auto& space = map.space();
  ojson doc;
  doc["ground"] = space.ground();
  if (!space.is_counting()) {
    ojson w = ojson::array();
    for (const auto& x : space.weights()) w.push_back(to_string(x));
    doc["weights"] = std::move(w);
  }
  auto block = [&](const std::vector<std::string>& names, const std::vector<MSet>& sets) {
    ojson b = ojson::object();
    for (std::size_t i = 0; i < names.size(); ++i) {
      ojson members = ojson::array();
      for (const auto& e : sets[i].members()) members.push_back(e);
      b[names[i]] = std::move(members);
    }
    return b;
  };
  doc["antecedent_vars"] = block(map.universe().antecedents(), map.antecedent_sets());
  doc["consequent_vars"] = block(map.universe().consequents(), map.consequent_sets());
  return doc;
}

// ---------------------------------------------------------------------------------------
// Poset and complex files

namespace detail {

inline Rational rational_field(const ojson& v, const std::string& where) {
  if (!v.is_string()) throw ValidationError(where + ": expected a rational string such as \"3/10\"");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const UsageError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

inline ojson parse_json(const std::string& text, const std::string& ctx) {
  try {
    return ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw ValidationError(ctx + ": " + e.what());
  }
}

}  // namespace detail

/// {"elements": [{"name", "birth"?}], "relations": [[lower, upper], ...]}; a missing birth is 0.
inline FilteredPoset parse_poset(const std::string& text, const std::string& ctx = "poset") {
  const auto doc = detail::parse_json(text, ctx);
  if (!doc.is_object()) throw ValidationError(ctx + ": top level must be an object");
  const auto& elems = detail::field(doc, "elements", ctx);
  if (!elems.is_array()) throw ValidationError(ctx + ": field 'elements' must be an array");
  std::vector<std::string> names;
  std::vector<Rational> births;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const std::string where = ctx + ": field 'elements[" + std::to_string(i) + "]'";
    const auto& e = elems[i];
    if (!e.is_object() || !e.contains("name") || !e["name"].is_string())
      throw ValidationError(where + ": expected an object with a string 'name'");
    names.push_back(e["name"].get<std::string>());
    births.push_back(e.contains("birth") ? detail::rational_field(e["birth"], where + ".birth") : Rational(0));
  }
  std::vector<std::pair<std::string, std::string>> rel;
  if (doc.contains("relations")) {
    const auto& rs = doc["relations"];
    if (!rs.is_array()) throw ValidationError(ctx + ": field 'relations' must be an array");
    for (std::size_t i = 0; i < rs.size(); ++i) {
      auto pair = detail::string_array(rs[i], ctx + ": field 'relations[" + std::to_string(i) + "]'");
      if (pair.size() != 2)
        throw ValidationError(ctx + ": field 'relations[" + std::to_string(i) + "]': expected [lower, upper]");
      rel.emplace_back(pair[0], pair[1]);
    }
  }
  try {
    return FilteredPoset(FinitePoset(std::move(names), rel), std::move(births));
  } catch (const ValidationError& e) {
    throw ValidationError(ctx + ": " + e.what());
  }
}

inline FilteredPoset load_poset(const std::string& path) { return parse_poset(read_file(path), path); }

/// {"vertex_births"?: {name: "p/q"}, "simplices": [{"vertices": [...], "birth"?: "p/q"}]}.
inline FilteredChainComplex parse_complex(const std::string& text, const std::string& ctx = "complex") {
  const auto doc = detail::parse_json(text, ctx);
  if (!doc.is_object()) throw ValidationError(ctx + ": top level must be an object");
  std::map<std::string, Rational> heights;
  if (doc.contains("vertex_births")) {
    const auto& vb = doc["vertex_births"];
    if (!vb.is_object()) throw ValidationError(ctx + ": field 'vertex_births' must be an object");
    for (const auto& [v, b] : vb.items()) heights[v] = detail::rational_field(b, ctx + ": field 'vertex_births." + v + "'");
  }
  const auto& ss = detail::field(doc, "simplices", ctx);
  if (!ss.is_array()) throw ValidationError(ctx + ": field 'simplices' must be an array");
  std::vector<SimplexSpec> specs;
  for (std::size_t i = 0; i < ss.size(); ++i) {
    const std::string where = ctx + ": field 'simplices[" + std::to_string(i) + "]'";
    if (!ss[i].is_object()) throw ValidationError(where + ": expected an object");
    SimplexSpec spec;
    spec.vertices = detail::string_array(detail::field(ss[i], "vertices", where), where + ".vertices");
    if (ss[i].contains("birth")) spec.birth = detail::rational_field(ss[i]["birth"], where + ".birth");
    specs.push_back(std::move(spec));
  }
  try {
    return simplicial_complex(specs, heights);
  } catch (const ValidationError& e) {
    throw ValidationError(ctx + ": " + e.what());
  }
}

inline FilteredChainComplex load_complex(const std::string& path) { return parse_complex(read_file(path), path); }

// ---------------------------------------------------------------------------------------
// CSV matrices

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// RFC 4180-style reader: quoted fields, doubled quotes, CRLF or LF line ends.
inline CsvTable parse_csv(const std::string& text, const std::string& ctx = "csv") {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string cur;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      rec.push_back(std::move(cur));
      cur.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !cur.empty()) {
        rec.push_back(std::move(cur));
        records.push_back(std::move(rec));
      }
      rec.clear();
      cur.clear();
      any = false;
    } else {
      cur += c;
      any = true;
    }
  }
  if (quoted) throw ValidationError(ctx + ": unterminated quoted field");
  if (any || !cur.empty()) {
    rec.push_back(std::move(cur));
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw ValidationError(ctx + ": no header row");
  CsvTable t;
  t.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != t.header.size())
      throw ValidationError(ctx + ": row " + std::to_string(r + 1) + " has " + std::to_string(records[r].size()) +
                            " fields, header has " + std::to_string(t.header.size()));
    t.rows.push_back(std::move(records[r]));
  }
  return t;
}

struct BinarizationSpec {
  Rational dependency_threshold{1, 2};
  /// Gene symbols ("KRAS") or full headers ("KRAS (3845)").
  std::vector<std::string> genes{"HRAS", "KRAS", "BRAF", "NRAS"};
  /// Category name -> variable suffix, applied in this order.
  std::vector<std::pair<std::string, std::string>> suffixes{
      {"hotspot", "_Hot"}, {"damaging", "_Dam"}, {"nonconserving", "_NonCon"}};
};

struct MutationInput {
  std::string category;  ///< key into BinarizationSpec::suffixes
  std::string csv_text;
  std::string name;  ///< for messages
};

struct IngestResult {
  DataMap map;
  std::size_t dropped_lines = 0;  ///< IDs present in some input but not in all
  std::size_t missing_dependency_values = 0;
  std::vector<std::string> skipped_variables;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && ws(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && ws(s[i])) ++i;
  return s.substr(i);
}

/// Column whose header equals `gene` or whose symbol part (before " (") does.
inline std::optional<std::size_t> gene_column(const CsvTable& t, const std::string& gene) {
  for (std::size_t c = 1; c < t.header.size(); ++c)
    if (trim(t.header[c]) == gene) return c;
  for (std::size_t c = 1; c < t.header.size(); ++c) {
    const auto h = trim(t.header[c]);
    const auto paren = h.find(" (");
    if (paren != std::string::npos && h.substr(0, paren) == gene) return c;
  }
  return std::nullopt;
}

inline std::unordered_map<std::string, std::size_t> row_index(const CsvTable& t, const std::string& ctx) {
  std::unordered_map<std::string, std::size_t> idx;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto id = trim(t.rows[r][0]);
    if (id.empty()) throw ValidationError(ctx + ": row " + std::to_string(r + 2) + " has an empty cell-line ID");
    if (!idx.emplace(id, r).second) throw ValidationError(ctx + ": duplicate cell-line ID '" + id + "'");
  }
  return idx;
}

inline bool parse_flag(const std::string& raw, const std::string& where) {
  std::string v = trim(raw);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "1.0") return true;
  if (v == "false" || v == "0" || v == "0.0") return false;
  throw ValidationError(where + ": '" + raw + "' is not a boolean");
}

inline bool is_missing(const std::string& raw) {
  const auto v = trim(raw);
  return v.empty() || v == "NA" || v == "NaN" || v == "nan";
}

}  // namespace detail

/// Builds the counting-measure data map over the cell lines common to all inputs:
/// [[gene]] = lines with dependency probability ≥ threshold (missing values count as
/// below), [[gene+suffix]] = lines whose mutation flag is true. A gene missing from a
/// mutation file skips that variable; a gene missing from the dependency file is an error.
inline IngestResult build_from_csv(const std::string& dependency_csv, const std::vector<MutationInput>& mutations,
                                   const BinarizationSpec& spec = {}, const std::string& dependency_name = "dependency") {
  if (spec.dependency_threshold < 0 || spec.dependency_threshold > 1)
    throw UsageError("dependency threshold " + to_string(spec.dependency_threshold) + " outside [0,1]");
  {
    std::set<std::string> seen;
    for (const auto& [cat, suffix] : spec.suffixes)
      if (!seen.insert(suffix).second) throw UsageError("mutation suffix '" + suffix + "' used twice");
  }

  const auto dep = parse_csv(dependency_csv, dependency_name);
  const auto dep_rows = detail::row_index(dep, dependency_name);
  std::vector<CsvTable> mut;
  std::vector<std::unordered_map<std::string, std::size_t>> mut_rows;
  for (const auto& m : mutations) {
    mut.push_back(parse_csv(m.csv_text, m.name));
    mut_rows.push_back(detail::row_index(mut.back(), m.name));
  }

  // Ground set: IDs present everywhere, sorted so row order does not matter.
  std::set<std::string> all_ids;
  for (const auto& [id, r] : dep_rows) all_ids.insert(id);
  for (const auto& rows : mut_rows)
    for (const auto& [id, r] : rows) all_ids.insert(id);
  std::vector<std::string> ground;
  for (const auto& id : all_ids) {
    bool everywhere = dep_rows.count(id) != 0;
    for (const auto& rows : mut_rows) everywhere = everywhere && rows.count(id) != 0;
    if (everywhere) ground.push_back(id);
  }
  if (ground.empty()) throw ValidationError("no cell line is present in every input file");
  const std::size_t dropped = all_ids.size() - ground.size();
  auto space = MeasureSpace::counting(ground);

  IngestResult res{DataMap(space, {}, {}, {}), dropped, 0, {}, {}};
  std::vector<std::string> consequents, antecedents;
  std::vector<MSet> consequent_sets, antecedent_sets;
  std::vector<std::string> headers;  // full header per gene, from the dependency file

  for (const auto& gene : spec.genes) {
    auto col = detail::gene_column(dep, gene);
    if (!col) throw ValidationError(dependency_name + ": no column for gene '" + gene + "'");
    const auto header = detail::trim(dep.header[*col]);
    headers.push_back(header);
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < ground.size(); ++i) {
      const auto& raw = dep.rows[dep_rows.at(ground[i])][*col];
      if (detail::is_missing(raw)) {
        ++res.missing_dependency_values;
        continue;
      }
      Rational p;
      try {
        p = parse_rational(detail::trim(raw));
      } catch (const UsageError&) {
        throw ValidationError(dependency_name + ": column '" + header + "', line '" + ground[i] + "': '" + raw +
                              "' is not a number");
      }
      if (p < 0 || p > 1)
        throw ValidationError(dependency_name + ": column '" + header + "', line '" + ground[i] +
                              "': probability outside [0,1]");
      if (p >= spec.dependency_threshold) members.push_back(i);
    }
    consequents.push_back(header);
    consequent_sets.push_back(space.subset_of_indices(members));
  }

  for (const auto& [category, suffix] : spec.suffixes) {
    const MutationInput* input = nullptr;
    std::size_t which = 0;
    for (std::size_t k = 0; k < mutations.size(); ++k)
      if (mutations[k].category == category) {
        input = &mutations[k];
        which = k;
      }
    if (!input) {
      res.warnings.push_back("no " + category + " mutation file; its variables are skipped");
      continue;
    }
    for (std::size_t g = 0; g < spec.genes.size(); ++g) {
      const std::string var = headers[g] + suffix;
      auto col = detail::gene_column(mut[which], spec.genes[g]);
      if (!col) {
        res.skipped_variables.push_back(var);
        continue;
      }
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < ground.size(); ++i) {
        const auto& raw = mut[which].rows[mut_rows[which].at(ground[i])][*col];
        if (detail::parse_flag(raw, input->name + ": column '" + mut[which].header[*col] + "', line '" + ground[i] + "'"))
          members.push_back(i);
      }
      antecedents.push_back(var);
      antecedent_sets.push_back(space.subset_of_indices(members));
    }
  }
  if (res.missing_dependency_values)
    res.warnings.push_back(std::to_string(res.missing_dependency_values) +
                           " missing dependency values treated as below threshold");
  res.map = DataMap(space, VariableUniverse(std::move(antecedents), std::move(consequents)), std::move(antecedent_sets),
                    std::move(consequent_sets));
  return res;
}

// ---------------------------------------------------------------------------------------
// Synthetic fixture in the DepMap layout

struct SyntheticDepMap {
  std::string dependency;
  std::string hotspot;
  std::string damaging;
  std::string nonconserving;
};

/// Four genes; KRAS hotspot mutations are frequent and imply KRAS dependency on all but a
/// few lines. The damaging file has no HRAS column. A couple of lines are missing from one
/// mutation file, and one dependency value is NA.
inline SyntheticDepMap synthetic_depmap(std::uint64_t seed, std::size_t lines = 120) {
  struct Gene {
    const char* header;
    double hot, dam, noncon;  // mutation rates
    double base_dep;          // chance of dependency without a hotspot mutation
  };
  const Gene genes[] = {{"HRAS (3265)", 0.04, 0.0, 0.05, 0.08},
                        {"KRAS (3845)", 0.40, 0.05, 0.10, 0.15},
                        {"BRAF (673)", 0.12, 0.04, 0.06, 0.10},
                        {"NRAS (4893)", 0.15, 0.03, 0.06, 0.10}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto coin = [&](double p) { return unit(rng) < p; };
  auto prob = [&](bool high) {
    const double v = high ? 0.5 + 0.49 * unit(rng) : 0.49 * unit(rng);
    std::ostringstream ss;
    ss.precision(3);
    ss << std::fixed << v;
    return ss.str();
  };

  std::ostringstream dep, hot, dam, non;
  dep << "DepMap_ID";
  hot << "DepMap_ID";
  dam << "DepMap_ID";
  non << "DepMap_ID";
  for (const auto& g : genes) {
    dep << ',' << g.header;
    hot << ',' << g.header;
    if (g.dam > 0) dam << ',' << g.header;
    non << ',' << g.header;
  }
  dep << '\n';
  hot << '\n';
  dam << '\n';
  non << '\n';

  for (std::size_t l = 0; l < lines; ++l) {
    char id[32];
    std::snprintf(id, sizeof id, "ACH-%06zu", l + 1);
    dep << id;
    hot << id;
    non << id;
    const bool in_dam = l % 50 != 7;  // a few lines lack damaging calls
    if (in_dam) dam << id;
    for (const auto& g : genes) {
      const bool h = coin(g.hot), d = coin(g.dam), n = coin(g.noncon);
      const bool dependent = h ? coin(0.97) : coin(g.base_dep);
      if (l == 3 && g.header[0] == 'N')
        dep << ",NA";
      else
        dep << ',' << prob(dependent);
      hot << ',' << (h ? "True" : "False");
      if (g.dam > 0 && in_dam) dam << ',' << (d ? "True" : "False");
      non << ',' << (n ? "True" : "False");
    }
    dep << '\n';
    hot << '\n';
    if (in_dam) dam << '\n';
    non << '\n';
  }
  return {dep.str(), hot.str(), dam.str(), non.str()};
}

}  // namespace seqbar
