#pragma once

// Persistent homology over Z/2 by left-to-right column reduction, multiplicity queries,
// and the check that every poset bar reappears in the persistence of Δ̃.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seqbar/errors.hpp"
#include "seqbar/poset.hpp"
#include "seqbar/rational.hpp"
#include "seqbar/topology.hpp"

namespace seqbar {

struct ReductionPairing {
  enum class Status { positive, negative, essential };

  std::vector<Status> status;
  /// For a positive cell its killer, for a negative cell the cell it kills.
  std::vector<std::optional<std::size_t>> partner;

  std::size_t size() const noexcept { return status.size(); }
};

namespace detail {

inline void add_column(std::vector<std::size_t>& target, const std::vector<std::size_t>& source) {
  std::vector<std::size_t> out;
  out.reserve(target.size() + source.size());
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(), std::back_inserter(out));
  target.swap(out);
}

}  // namespace detail

inline ReductionPairing reduce(const FilteredChainComplex& complex) {
  const std::size_t n = complex.size();
  std::vector<std::vector<std::size_t>> columns(n);
  std::unordered_map<std::size_t, std::size_t> owner;  // low -> column
  ReductionPairing r;
  r.status.assign(n, ReductionPairing::Status::essential);
  r.partner.assign(n, std::nullopt);
  for (std::size_t j = 0; j < n; ++j) {
    auto& col = columns[j];
    col = complex[j].boundary;
    for (auto i : col)
      if (i >= j || complex[i].birth > complex[j].birth || complex[i].dim + 1 != complex[j].dim)
        throw std::logic_error("cell order is not compatible with the filtration");
    while (!col.empty()) {
      auto it = owner.find(col.back());
      if (it == owner.end()) break;
      detail::add_column(col, columns[it->second]);
    }
    if (!col.empty()) {
      const std::size_t low = col.back();
      owner.emplace(low, j);
      r.status[low] = ReductionPairing::Status::positive;
      r.partner[low] = j;
      r.status[j] = ReductionPairing::Status::negative;
      r.partner[j] = low;
    }
  }
  return r;
}

/// Interval [birth, death) in dimension dim; death == nullopt means ∞.
struct PersistenceBar {
  std::size_t dim = 0;
  Rational birth;
  std::optional<Rational> death;
  std::size_t multiplicity = 1;

  bool infinite() const noexcept { return !death.has_value(); }
  friend bool operator==(const PersistenceBar&, const PersistenceBar&) = default;
};

namespace detail {

inline bool bar_less(const PersistenceBar& a, const PersistenceBar& b) {
  if (a.dim != b.dim) return a.dim < b.dim;
  if (a.birth != b.birth) return a.birth < b.birth;
  if (a.death.has_value() != b.death.has_value()) return a.death.has_value();
  return a.death && *a.death < *b.death;
}

}  // namespace detail

/// Bars sorted by (dim, birth, death), equal signatures merged; zero-length pairs dropped.
inline std::vector<PersistenceBar> persistence_barcode(const ReductionPairing& pairing,
                                                       const FilteredChainComplex& complex) {
  std::vector<PersistenceBar> raw;
  for (std::size_t i = 0; i < complex.size(); ++i) {
    const auto& c = complex[i];
    switch (pairing.status[i]) {
      case ReductionPairing::Status::essential: raw.push_back({c.dim, c.birth, std::nullopt, 1}); break;
      case ReductionPairing::Status::positive: {
        const Rational& death = complex[*pairing.partner[i]].birth;
        if (c.birth < death) raw.push_back({c.dim, c.birth, death, 1});
        break;
      }
      default: break;
    }
  }
  std::sort(raw.begin(), raw.end(), detail::bar_less);
  std::vector<PersistenceBar> out;
  for (auto& b : raw) {
    if (!out.empty() && out.back().dim == b.dim && out.back().birth == b.birth && out.back().death == b.death)
      out.back().multiplicity += b.multiplicity;
    else
      out.push_back(std::move(b));
  }
  return out;
}

inline std::vector<PersistenceBar> persistence_barcode(const FilteredChainComplex& complex) {
  return persistence_barcode(reduce(complex), complex);
}

/// μ^{s,t}_p: summed multiplicity of bars with exactly this signature; t = nullopt is ∞.
inline std::size_t multiplicity(const std::vector<PersistenceBar>& bars, std::size_t p, const Rational& s,
                                const std::optional<Rational>& t) {
  std::size_t total = 0;
  for (const auto& b : bars)
    if (b.dim == p && b.birth == s && b.death == t) total += b.multiplicity;
  return total;
}

/// Essential bar count per dimension, i.e. the Betti numbers of the full complex.
inline std::vector<std::size_t> betti_numbers(const std::vector<PersistenceBar>& bars, std::size_t max_dim) {
  std::vector<std::size_t> out(max_dim + 1, 0);
  for (const auto& b : bars)
    if (b.infinite() && b.dim <= max_dim) out[b.dim] += b.multiplicity;
  return out;
}

struct EmbeddingEntry {
  std::size_t element = 0;
  std::string name;
  Rational birth;
  Rational death;
  bool closed_at_end = false;
  bool matched = false;
  std::optional<PersistenceBar> match;
};

struct EmbeddingReport {
  ComplexKind kind = ComplexKind::suspension;
  std::size_t maximum = 0;  ///< p_0
  std::vector<EmbeddingEntry> entries;  ///< one per poset bar except p_0's
  std::vector<PersistenceBar> persistence;
  std::size_t cells = 0;
  bool overall = true;
};

/// p_0 if it is the unique maximal element and the only element born at the earliest time.
inline std::size_t embedding_maximum(const FilteredPoset& fp) {
  if (fp.size() == 0) throw HypothesisError("unique-earliest-maximum", "the poset is empty");
  const auto tops = fp.poset.maximal_elements();
  if (tops.size() != 1)
    throw HypothesisError("unique-earliest-maximum",
                          "the poset has " + std::to_string(tops.size()) + " maximal elements");
  const std::size_t p0 = tops.front();
  for (std::size_t i = 0; i < fp.size(); ++i)
    if (i != p0 && fp.births[i] <= fp.births[p0])
      throw HypothesisError("unique-earliest-maximum", "'" + fp.poset.name(i) + "' is born no later than the maximum '" +
                                                           fp.poset.name(p0) + "'");
  return p0;
}

/// For every poset bar [t,t′) of p ≠ p_0, looks for μ^{t,t′}_i > 0 in some dimension i of
/// the chosen complex; a bar closed at 1 is looked up with death ∞.
inline EmbeddingReport verify_embedding(const FilteredPoset& fp, const ComplexLimits& lim = {},
                                        ComplexKind kind = ComplexKind::suspension) {
  EmbeddingReport rep;
  rep.kind = kind;
  rep.maximum = embedding_maximum(fp);
  const auto complex = filtered_complex(fp, kind, lim);
  rep.cells = complex.size();
  rep.persistence = persistence_barcode(complex);
  for (const auto& bar : poset_barcode(fp)) {
    if (bar.element == rep.maximum) continue;
    EmbeddingEntry e{bar.element, fp.poset.name(bar.element), bar.birth, bar.death, bar.closed_at_end, false, {}};
    const std::optional<Rational> death = bar.closed_at_end ? std::nullopt : std::optional<Rational>(bar.death);
    for (const auto& pb : rep.persistence)
      if (pb.birth == bar.birth && pb.death == death) {
        e.matched = true;
        e.match = pb;
        break;
      }
    rep.overall = rep.overall && e.matched;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace seqbar
