#pragma once

// Distances between sequent barcodes and data maps, the δ-subfiltration, and an
// executable certificate for the stability bound under Filtration I.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "seqbar/errors.hpp"
#include "seqbar/measure.hpp"
#include "seqbar/rational.hpp"
#include "seqbar/sequents.hpp"

namespace seqbar {

/// Every variable's set has measure strictly greater than eps.
inline bool is_eps_granular(const MeasureSpace& space, const DataMap& map, const Rational& eps) {
  if (eps <= 0 || eps > 1) throw UsageError("epsilon " + to_string(eps) + " outside (0,1]");
  for (const auto* side : {&map.antecedent_sets(), &map.consequent_sets()})
    for (const auto& s : *side)
      if (measure(space, s) <= eps) return false;
  return true;
}

struct DeltaSubfiltration {
  std::vector<Sequent> sequents;  ///< retained sequents, universe order
  std::vector<std::string> degenerate_variables;  ///< antecedents with m([[a]]) = 0
};

/// Sequents whose antecedent meet keeps more than a delta fraction of every antecedent:
/// m(∩Γ)/m([[a]]) > delta for each a ∈ Γ. Empty Γ passes; a null antecedent rejects.
inline DeltaSubfiltration delta_subfiltration(const MeasureSpace& space, const DataMap& map, const Rational& delta,
                                              const SequentUniverse& universe) {
  if (delta < 0 || delta > 1) throw UsageError("delta " + to_string(delta) + " outside [0,1]");
  const auto& names = map.universe().antecedents();
  std::vector<Rational> mass(names.size());
  DeltaSubfiltration out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    mass[i] = measure(space, map.antecedent(i));
    if (mass[i] == 0) out.degenerate_variables.push_back(names[i]);
  }
  for (const auto& s : universe.sequents()) {
    const Rational meet = measure(space, space.from_bits(detail::antecedent_meet(map, s.gamma)));
    bool keep = true;
    for (std::size_t i = 0; i < names.size() && keep; ++i)
      if (s.gamma >> i & 1U) keep = mass[i] > 0 && meet > delta * mass[i];
    if (keep) out.sequents.push_back(s);
  }
  return out;
}

namespace detail {

inline Rational interval_sym_diff(const Rational& b1, const Rational& d1, const Rational& b2, const Rational& d2) {
  auto len = [](const Rational& b, const Rational& d) { return d > b ? Rational(d - b) : Rational(0); };
  const Rational lo = std::max(b1, b2), hi = std::min(d1, d2);
  return len(b1, d1) + len(b2, d2) - 2 * len(lo, hi);
}

inline bool same_poset(const std::vector<Sequent>& a, const std::vector<Sequent>& b) {
  auto key = [](const Sequent& s) { return std::pair(s.gamma, s.delta); };
  std::set<std::pair<std::uint64_t, std::uint64_t>> sa, sb;
  for (const auto& s : a) sa.insert(key(s));
  for (const auto& s : b) sb.insert(key(s));
  return sa == sb;
}

}  // namespace detail

/// Σ_p |I_p(F) Δ I_p(F′)| (Lebesgue length); a sequent without a bar contributes ∅.
inline Rational barcode_dist(const SequentBarcode& b1, const SequentBarcode& b2) {
  if (!detail::same_poset(b1.poset, b2.poset)) throw UsageError("barcodes are over different sequent sets");
  Rational total = 0;
  for (const auto& bar : b1.bars) {
    auto it = std::find_if(b2.bars.begin(), b2.bars.end(), [&](const PosetBar& o) { return o.sequent == bar.sequent; });
    if (it == b2.bars.end())
      total += bar.length();
    else
      total += detail::interval_sym_diff(bar.birth, bar.death, it->birth, it->death);
  }
  for (const auto& bar : b2.bars) {
    auto it = std::find_if(b1.bars.begin(), b1.bars.end(), [&](const PosetBar& o) { return o.sequent == bar.sequent; });
    if (it == b1.bars.end()) total += bar.length();
  }
  return total;
}

struct SequentDeviation {
  Sequent sequent;
  Rational deviation;  ///< |t(s,[[·]]) − t(s,[[·]]′)|
  Rational bound;      ///< lemma_constant × data_distance
};

/// Outcome of checking the stability bound on one pair of data maps.
///
/// lemma_constant is C = 2·card(V)/(δ·ε), the per-sequent Lipschitz constant obtained from
/// |Δp|, |Δq| ≤ card(V)·data-dist and q ≥ δ·ε. Each bar endpoint then moves by at most
/// C·data-dist, so a bar's symmetric difference is at most 2·C·data-dist and the summed
/// distance over the |S| sequents of the universe is bounded by theorem_constant = 2·|S|·C.
struct StabilityReport {
  Rational eps;
  Rational delta;
  Rational data_distance;
  Rational barcode_distance;
  Rational lemma_constant;
  Rational theorem_constant;
  std::size_t universe_size = 0;
  std::size_t subfiltration_size = 0;
  std::vector<SequentDeviation> per_sequent;
  bool per_sequent_ok = true;
  bool summed_ok = true;
  /// Informational: whether barcode_distance ≤ lemma_constant × data_distance also holds.
  bool lemma_constant_bounds_sum = true;
  bool satisfied = true;

  /// barcode_distance / data_distance, or 0 when the maps coincide.
  Rational empirical_ratio() const { return data_distance == 0 ? Rational(0) : Rational(barcode_distance / data_distance); }
};

/// Checks the stability bound for two maps over the δ-subfiltration of Filtration I.
/// Throws HypothesisError if either map is not ε-granular or the δ-sets differ.
inline StabilityReport stability_certificate(const MeasureSpace& space, const DataMap& map1, const DataMap& map2,
                                             const Rational& eps, const Rational& delta,
                                             const SequentUniverse& universe) {
  if (eps <= 0 || eps > 1) throw UsageError("epsilon " + to_string(eps) + " outside (0,1]");
  if (delta <= 0 || delta > 1) throw UsageError("delta " + to_string(delta) + " outside (0,1]");
  if (!is_eps_granular(space, map1, eps))
    throw HypothesisError("eps-granular", "first data map has a variable of measure <= " + to_string(eps));
  if (!is_eps_granular(space, map2, eps))
    throw HypothesisError("eps-granular", "second data map has a variable of measure <= " + to_string(eps));
  const auto sub1 = delta_subfiltration(space, map1, delta, universe);
  const auto sub2 = delta_subfiltration(space, map2, delta, universe);
  if (sub1.sequents != sub2.sequents)
    throw HypothesisError("equal-delta-sets", "the delta-subfiltrations contain different sequents (" +
                                                  std::to_string(sub1.sequents.size()) + " vs " +
                                                  std::to_string(sub2.sequents.size()) + ")");

  const auto sub = restrict_universe(universe, [&](const Sequent& s) {
    return std::find(sub1.sequents.begin(), sub1.sequents.end(), s) != sub1.sequents.end();
  });
  const auto births1 = compute_births(sub, map1, FiltrationKind::I);
  const auto births2 = compute_births(sub, map2, FiltrationKind::I);

  StabilityReport r;
  r.eps = eps;
  r.delta = delta;
  r.universe_size = universe.size();
  r.subfiltration_size = sub.size();
  r.data_distance = data_dist(space, map1, map2);
  r.lemma_constant = Rational(2 * static_cast<long long>(universe.variables().card())) / (delta * eps);
  r.theorem_constant = 2 * static_cast<long long>(universe.size()) * r.lemma_constant;

  const Rational bound = r.lemma_constant * r.data_distance;
  for (std::size_t i = 0; i < sub.size(); ++i) {
    Rational dev = births1[i] - births2[i];
    if (dev < 0) dev = -dev;
    if (dev > bound) r.per_sequent_ok = false;
    r.per_sequent.push_back({sub[i], std::move(dev), bound});
  }

  r.barcode_distance = barcode_dist(barcode_of(sub, births1), barcode_of(sub, births2));
  r.summed_ok = r.barcode_distance <= r.theorem_constant * r.data_distance;
  r.lemma_constant_bounds_sum = r.barcode_distance <= bound;
  r.satisfied = r.per_sequent_ok && r.summed_ok;
  return r;
}

}  // namespace seqbar
