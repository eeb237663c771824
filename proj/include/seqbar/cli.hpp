#pragma once

// The seqbar command-line driver. Exit codes: 0 ok, 1 I/O, 2 validation or hypothesis,
// 3 bound violated or embedding mismatch, 4 expected mismatch in order-complex mode.

#include "CLI11.hpp"

#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "seqbar/errors.hpp"
#include "seqbar/export.hpp"
#include "seqbar/ingest.hpp"
#include "seqbar/persistence.hpp"
#include "seqbar/poset.hpp"
#include "seqbar/sequents.hpp"
#include "seqbar/stability.hpp"
#include "seqbar/topology.hpp"

namespace seqbar {

enum ExitCode : int { kOk = 0, kIo = 1, kInvalid = 2, kViolated = 3, kDemoMismatch = 4 };

struct RunConfig {
  std::string subcommand;
  std::vector<std::string> inputs;
  std::string dataset, poset, complex;
  std::string filtration = "two";
  std::string kind = "suspension";
  std::string delta = "1/2", epsilon = "1/10";
  std::optional<std::size_t> max_gamma, max_delta, max_chain_len;
  bool include_empty_gamma = true, include_empty_delta = true;
  std::string format = "json";
  std::string out;
  std::string dump_complex;
  std::uint64_t seed = 0;
  std::size_t random_count = 0, max_elements = 8;
  bool restrict_to_hypothesis = false;
  // ingest
  std::string dependency, hotspot, damaging, nonconserving;
  std::string threshold = "1/2";
  std::vector<std::string> genes;
};

namespace detail {

inline FiltrationKind parse_filtration(const std::string& s) {
  if (s == "one" || s == "I" || s == "1") return FiltrationKind::I;
  if (s == "two" || s == "II" || s == "2") return FiltrationKind::II;
  throw UsageError("unknown filtration '" + s + "' (expected one or two)");
}

inline ComplexKind parse_kind(const std::string& s) {
  if (s == "order") return ComplexKind::order;
  if (s == "suspension") return ComplexKind::suspension;
  throw UsageError("unknown complex kind '" + s + "' (expected order or suspension)");
}

inline SequentCaps caps_of(const RunConfig& c) {
  SequentCaps caps;
  caps.max_gamma = c.max_gamma;
  caps.max_delta = c.max_delta;
  caps.include_empty_gamma = c.include_empty_gamma;
  caps.include_empty_delta = c.include_empty_delta;
  return caps;
}

inline ComplexLimits limits_of(const RunConfig& c) {
  ComplexLimits lim;
  lim.max_chain_len = c.max_chain_len;
  return lim;
}

inline void emit(const RunConfig& c, const std::string& content, std::ostream& out) {
  if (c.out.empty() || c.out == "-")
    out << content;
  else
    write_atomic(c.out, content);
}

inline void warn_all(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

inline FilteredPoset sequent_poset(const RunConfig& c, std::ostream& err) {
  auto ds = load_dataset(c.dataset);
  warn_all(ds.warnings, err);
  auto u = enumerate_sequents(ds.map.universe(), caps_of(c));
  return to_filtered_poset(u, compute_births(u, ds.map, parse_filtration(c.filtration)));
}

/// Keeps the unique maximal element and everything born strictly after it.
inline FilteredPoset restrict_for_embedding(const FilteredPoset& fp) {
  const auto tops = fp.poset.maximal_elements();
  if (tops.size() != 1)
    throw HypothesisError("unique-earliest-maximum", "the poset has " + std::to_string(tops.size()) + " maximal elements");
  const std::size_t p0 = tops.front();
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < fp.size(); ++i)
    if (i == p0 || fp.births[i] > fp.births[p0]) keep.push_back(i);
  std::vector<std::string> names;
  std::vector<Rational> births;
  for (auto i : keep) {
    names.push_back(fp.poset.name(i));
    births.push_back(fp.births[i]);
  }
  auto sub = FinitePoset::from_relation(std::move(names), [&](std::size_t a, std::size_t b) {
    return fp.poset.less(keep[a], keep[b]);
  });
  return FilteredPoset(std::move(sub), std::move(births));
}

}  // namespace detail

inline int cmd_barcode(const RunConfig& c, std::ostream& out, std::ostream& err) {
  auto ds = load_dataset(c.dataset);
  detail::warn_all(ds.warnings, err);
  const auto kind = detail::parse_filtration(c.filtration);
  auto u = enumerate_sequents(ds.map.universe(), detail::caps_of(c));
  auto births = compute_births(u, ds.map, kind);
  auto bars = sequent_barcode(u, births);
  if (c.format == "svg")
    detail::emit(c, barcode_svg(u, bars, "Sequent barcode, filtration " + std::string(to_string(kind))), out);
  else
    detail::emit(c, dump(barcode_json(u, births, bars)), out);
  return kOk;
}

inline int cmd_stability(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.inputs.size() != 2) throw UsageError("stability takes exactly two dataset files");
  auto a = load_dataset(c.inputs[0]);
  auto b = load_dataset(c.inputs[1]);
  detail::warn_all(a.warnings, err);
  detail::warn_all(b.warnings, err);
  if (!(a.map.universe() == b.map.universe())) throw ValidationError("the datasets declare different variables");
  if (!a.map.space().same_as(b.map.space())) throw ValidationError("the datasets use different measure spaces");
  // Re-seat the second map on the first space so sets are comparable.
  std::vector<MSet> as, cs;
  for (const auto& s : b.map.antecedent_sets()) as.push_back(a.map.space().from_bits(s.bits()));
  for (const auto& s : b.map.consequent_sets()) cs.push_back(a.map.space().from_bits(s.bits()));
  DataMap second(a.map.space(), b.map.universe(), std::move(as), std::move(cs));
  auto u = enumerate_sequents(a.map.universe(), detail::caps_of(c));
  const auto r = stability_certificate(a.map.space(), a.map, second, parse_rational(c.epsilon), parse_rational(c.delta), u);
  detail::emit(c, dump(stability_json(r, u)), out);
  err << (r.satisfied ? "satisfied" : "VIOLATED") << ": barcode distance " << to_string(r.barcode_distance)
      << " <= " << to_string(r.theorem_constant * r.data_distance) << " (data distance "
      << to_string(r.data_distance) << ", per-sequent " << (r.per_sequent_ok ? "ok" : "violated") << ")\n";
  return r.satisfied ? kOk : kViolated;
}

inline int cmd_homology(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const int sources = !c.dataset.empty() + !c.poset.empty() + !c.complex.empty();
  if (sources != 1) throw UsageError("homology takes exactly one of --dataset, --poset, --complex");
  FilteredChainComplex complex;
  if (!c.complex.empty()) {
    complex = load_complex(c.complex);
  } else {
    const auto fp = c.poset.empty() ? detail::sequent_poset(c, err) : load_poset(c.poset);
    complex = filtered_complex(fp, detail::parse_kind(c.kind), detail::limits_of(c));
  }
  if (!c.dump_complex.empty()) write_atomic(c.dump_complex, dump(complex_json(complex)));
  const auto bars = persistence_barcode(complex);
  if (c.format == "svg")
    detail::emit(c, persistence_svg(bars, std::string("Persistence of the ") + to_string(complex.kind) + " complex"),
                 out);
  else
    detail::emit(c, dump(persistence_json(bars, complex_metadata(complex))), out);
  return kOk;
}

inline int cmd_verify_embedding(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto kind = detail::parse_kind(c.kind);
  const auto lim = detail::limits_of(c);
  auto prepare = [&](FilteredPoset fp) { return c.restrict_to_hypothesis ? detail::restrict_for_embedding(fp) : fp; };

  if (c.random_count > 0) {
    std::mt19937_64 rng(c.seed);
    ojson doc;
    doc["seed"] = c.seed;
    doc["instances"] = c.random_count;
    std::size_t failures = 0;
    doc["failures"] = ojson::array();
    for (std::size_t i = 0; i < c.random_count; ++i) {
      auto fp = random_embedding_instance(rng, c.max_elements);
      auto r = verify_embedding(fp, lim, kind);
      if (!r.overall) {
        ++failures;
        doc["failures"].push_back(embedding_json(r, fp));
      }
    }
    doc["overall"] = failures == 0;
    doc["complex"] = to_string(kind);
    detail::emit(c, dump(doc), out);
    err << c.random_count - failures << "/" << c.random_count << " instances fully matched\n";
    if (failures == 0) return kOk;
    return kind == ComplexKind::order ? kDemoMismatch : kViolated;
  }

  const int sources = !c.dataset.empty() + !c.poset.empty();
  if (sources != 1) throw UsageError("verify-embedding takes one of --dataset, --poset, or --random N");
  const auto fp = prepare(c.poset.empty() ? detail::sequent_poset(c, err) : load_poset(c.poset));
  const auto r = verify_embedding(fp, lim, kind);
  detail::emit(c, dump(embedding_json(r, fp)), out);
  std::size_t matched = 0;
  for (const auto& e : r.entries) matched += e.matched;
  err << matched << "/" << r.entries.size() << " poset bars matched in the " << to_string(kind) << " complex\n";
  if (r.overall) return kOk;
  return kind == ComplexKind::order ? kDemoMismatch : kViolated;
}

inline int cmd_ingest(const RunConfig& c, std::ostream& out, std::ostream& err) {
  BinarizationSpec spec;
  spec.dependency_threshold = parse_rational(c.threshold);
  if (!c.genes.empty()) spec.genes = c.genes;
  std::vector<MutationInput> muts;
  if (!c.hotspot.empty()) muts.push_back({"hotspot", read_file(c.hotspot), c.hotspot});
  if (!c.damaging.empty()) muts.push_back({"damaging", read_file(c.damaging), c.damaging});
  if (!c.nonconserving.empty()) muts.push_back({"nonconserving", read_file(c.nonconserving), c.nonconserving});
  auto res = build_from_csv(read_file(c.dependency), muts, spec, c.dependency);
  detail::warn_all(res.warnings, err);
  detail::emit(c, dump(dataset_json(res.map)), out);

  const auto& space = res.map.space();
  err << "cell lines: " << space.size() << " (" << res.dropped_lines << " not present in every file)\n";
  err << "consequents: " << res.map.universe().consequents().size()
      << ", antecedents: " << res.map.universe().antecedents().size() << "\n";
  for (const auto& v : res.skipped_variables) err << "  skipped " << v << " (no column)\n";
  auto line = [&](const std::string& name, const MSet& s) {
    err << "  " << name << ": " << s.count() << " lines, measure " << to_string(measure(space, s)) << "\n";
  };
  for (std::size_t j = 0; j < res.map.consequent_sets().size(); ++j)
    line(res.map.universe().consequents()[j], res.map.consequent(j));
  for (std::size_t i = 0; i < res.map.antecedent_sets().size(); ++i)
    line(res.map.universe().antecedents()[i], res.map.antecedent(i));
  Rational smallest = 1;
  for (const auto* side : {&res.map.antecedent_sets(), &res.map.consequent_sets()})
    for (const auto& s : *side) smallest = std::min(smallest, measure(space, s));
  err << "granularity: every variable has measure >= " << to_string(smallest)
      << (smallest == 0 ? " (some variable is empty; not eps-granular for any eps)" : "") << "\n";
  return kOk;
}

/// Parses argv and runs one subcommand; never throws.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Sequent barcodes of labeled set data, their stability, and their persistent homology"};
  app.require_subcommand(1);
  RunConfig c;

  auto caps = [&](CLI::App* sub) {
    sub->add_option("--max-gamma", c.max_gamma, "Largest antecedent set size");
    sub->add_option("--max-delta", c.max_delta, "Largest consequent set size");
    sub->add_flag("--include-empty-gamma,!--no-include-empty-gamma", c.include_empty_gamma,
                  "Include sequents with empty antecedent side");
    sub->add_flag("--include-empty-delta,!--no-include-empty-delta", c.include_empty_delta,
                  "Include sequents with empty consequent side");
  };
  auto filtration = [&](CLI::App* sub) {
    sub->add_option("--filtration", c.filtration, "Filtration: one or two")->check(CLI::IsMember({"one", "two"}));
  };
  auto output = [&](CLI::App* sub, bool svg) {
    sub->add_option("--out", c.out, "Output path (default: standard output)");
    if (svg) sub->add_option("--format", c.format, "json or svg")->check(CLI::IsMember({"json", "svg"}));
  };
  auto complex_opts = [&](CLI::App* sub) {
    sub->add_option("--kind", c.kind, "Complex: suspension or order")->check(CLI::IsMember({"suspension", "order"}));
    sub->add_option("--max-chain-len", c.max_chain_len, "Longest chain used to build the complex");
  };

  auto* barcode = app.add_subcommand("barcode", "Sequent barcode of a dataset");
  barcode->add_option("--dataset", c.dataset, "Dataset JSON")->required();
  filtration(barcode);
  caps(barcode);
  output(barcode, true);

  auto* stability = app.add_subcommand("stability", "Check the stability bound on two datasets");
  stability->add_option("datasets", c.inputs, "Two dataset JSON files")->expected(2)->required();
  stability->add_option("--epsilon", c.epsilon, "Granularity epsilon (p/q)");
  stability->add_option("--delta", c.delta, "Subfiltration delta (p/q)");
  caps(stability);
  output(stability, false);

  auto* homology = app.add_subcommand("homology", "Persistent homology of a filtered complex");
  homology->add_option("--dataset", c.dataset, "Dataset JSON (sequent poset)");
  homology->add_option("--poset", c.poset, "Poset JSON");
  homology->add_option("--complex", c.complex, "Simplicial complex JSON");
  homology->add_option("--dump-complex", c.dump_complex, "Also write the cell list as JSON");
  filtration(homology);
  caps(homology);
  complex_opts(homology);
  output(homology, true);

  auto* verify = app.add_subcommand("verify-embedding", "Match poset bars to persistence bars");
  verify->add_option("--dataset", c.dataset, "Dataset JSON (sequent poset)");
  verify->add_option("--poset", c.poset, "Poset JSON");
  verify->add_option("--random", c.random_count, "Check N random filtered posets instead");
  verify->add_option("--seed", c.seed, "Seed for --random");
  verify->add_option("--max-elements", c.max_elements, "Largest random poset");
  verify->add_flag("--restrict", c.restrict_to_hypothesis,
                   "Drop elements born no later than the maximum so the hypothesis holds");
  filtration(verify);
  caps(verify);
  complex_opts(verify);
  output(verify, false);

  auto* ingest = app.add_subcommand("ingest", "Build a dataset from DepMap-style CSV files");
  ingest->add_option("--dependency", c.dependency, "Gene dependency probability CSV")->required();
  ingest->add_option("--hotspot", c.hotspot, "Hotspot mutation CSV");
  ingest->add_option("--damaging", c.damaging, "Damaging mutation CSV");
  ingest->add_option("--nonconserving", c.nonconserving, "Nonconserving mutation CSV");
  ingest->add_option("--threshold", c.threshold, "Dependency threshold (p/q or decimal)");
  ingest->add_option("--genes", c.genes, "Genes to keep (symbol or full header)");
  output(ingest, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }

  try {
    if (barcode->parsed()) return cmd_barcode(c, out, err);
    if (stability->parsed()) return cmd_stability(c, out, err);
    if (homology->parsed()) return cmd_homology(c, out, err);
    if (verify->parsed()) return cmd_verify_embedding(c, out, err);
    return cmd_ingest(c, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const HypothesisError& e) {
    err << "hypothesis violated: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::runtime_error& e) {
    // ValidationError, LimitError
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
}

}  // namespace seqbar
