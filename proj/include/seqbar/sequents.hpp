#pragma once

// The sequent poset S(V_A, V_S), its two data-driven filtrations, and sequent barcodes.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "seqbar/errors.hpp"
#include "seqbar/measure.hpp"
#include "seqbar/rational.hpp"

namespace seqbar {

/// Variables per side are addressed by a 64-bit mask.
inline constexpr std::size_t kMaxVariablesPerSide = 64;

/// Γ ⊢ Δ as a pair of bitmasks over the antecedent and consequent variable lists.
struct Sequent {
  std::uint64_t gamma = 0;
  std::uint64_t delta = 0;

  int gamma_size() const noexcept { return std::popcount(gamma); }
  int delta_size() const noexcept { return std::popcount(delta); }

  friend bool operator==(const Sequent&, const Sequent&) = default;
};

struct SequentHash {
  std::size_t operator()(const Sequent& s) const noexcept {
    return std::hash<std::uint64_t>{}(s.gamma * 0x9E3779B97F4A7C15ULL ^ (s.delta + 0x632BE59BD9B4E019ULL));
  }
};

/// s ⪯ s′ iff Γ ⊆ Γ′ and Δ ⊆ Δ′.
constexpr bool seq_leq(const Sequent& s, const Sequent& s2) noexcept {
  return (s.gamma & ~s2.gamma) == 0 && (s.delta & ~s2.delta) == 0;
}

struct SequentCaps {
  std::optional<std::size_t> max_gamma;
  std::optional<std::size_t> max_delta;
  bool include_empty_gamma = true;
  bool include_empty_delta = true;
  /// Refuse enumerations larger than this.
  std::size_t limit = 2'000'000;

  bool admits(const Sequent& s) const noexcept {
    auto g = static_cast<std::size_t>(s.gamma_size());
    auto d = static_cast<std::size_t>(s.delta_size());
    if (g == 0 && !include_empty_gamma) return false;
    if (d == 0 && !include_empty_delta) return false;
    if (max_gamma && g > *max_gamma) return false;
    if (max_delta && d > *max_delta) return false;
    return true;
  }
};

namespace detail {

/// All masks over n bits with popcount k, in lexicographic order of their index lists.
inline void masks_of_size(std::size_t n, std::size_t k, std::vector<std::uint64_t>& out) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    std::uint64_t m = 0;
    for (auto i : idx) m |= std::uint64_t{1} << i;
    out.push_back(m);
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == n - k + (pos - 1)) --pos;
    if (pos == 0) return;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
}

inline std::vector<std::uint64_t> side_masks(std::size_t n, std::optional<std::size_t> cap, bool include_empty) {
  std::vector<std::uint64_t> out;
  const std::size_t top = cap ? std::min(*cap, n) : n;
  for (std::size_t k = include_empty ? 0 : 1; k <= top; ++k) masks_of_size(n, k, out);
  return out;
}

inline Integer side_count(std::size_t n, std::optional<std::size_t> cap, bool include_empty) {
  Integer total = 0, binom = 1;  // binom = C(n, k)
  const std::size_t top = cap ? std::min(*cap, n) : n;
  for (std::size_t k = 0; k <= top; ++k) {
    if (k > 0) binom = binom * (n - k + 1) / k;
    if (k == 0 && !include_empty) continue;
    total += binom;
  }
  return total;
}

}  // namespace detail

/// The enumerated sequent poset. Canonical order: Γ by (size, index-lexicographic), then Δ
/// the same way. This order is a linear extension of ⪯.
class SequentUniverse {
 public:
  SequentUniverse(VariableUniverse vars, SequentCaps caps, std::vector<Sequent> sequents)
      : vars_(std::move(vars)), caps_(caps), sequents_(std::move(sequents)) {
    index_.reserve(sequents_.size());
    for (std::size_t i = 0; i < sequents_.size(); ++i) index_.emplace(sequents_[i], i);
  }

  const VariableUniverse& variables() const noexcept { return vars_; }
  const SequentCaps& caps() const noexcept { return caps_; }
  const std::vector<Sequent>& sequents() const noexcept { return sequents_; }
  std::size_t size() const noexcept { return sequents_.size(); }
  const Sequent& operator[](std::size_t i) const { return sequents_.at(i); }

  std::optional<std::size_t> index_of(const Sequent& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const Sequent& s) const { return index_.count(s) > 0; }

  std::vector<std::string> gamma_names(const Sequent& s) const { return names(s.gamma, vars_.antecedents()); }
  std::vector<std::string> delta_names(const Sequent& s) const { return names(s.delta, vars_.consequents()); }

  /// Human-readable "a, b ⊢ x" form; an empty side prints as ∅.
  std::string label(const Sequent& s) const {
    auto side = [](const std::vector<std::string>& v) {
      if (v.empty()) return std::string("∅");
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
      return out;
    };
    return side(gamma_names(s)) + " ⊢ " + side(delta_names(s));
  }

  /// Sequent from variable names; throws UsageError on unknown names.
  Sequent make(const std::vector<std::string>& gamma, const std::vector<std::string>& delta) const {
    Sequent s;
    for (const auto& g : gamma) {
      auto i = vars_.antecedent_index(g);
      if (!i) throw UsageError("unknown antecedent variable '" + g + "'");
      s.gamma |= std::uint64_t{1} << *i;
    }
    for (const auto& d : delta) {
      auto j = vars_.consequent_index(d);
      if (!j) throw UsageError("unknown consequent variable '" + d + "'");
      s.delta |= std::uint64_t{1} << *j;
    }
    return s;
  }

 private:
  static std::vector<std::string> names(std::uint64_t mask, const std::vector<std::string>& vars) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (mask >> i & 1U) out.push_back(vars[i]);
    return out;
  }

  VariableUniverse vars_;
  SequentCaps caps_;
  std::vector<Sequent> sequents_;
  std::unordered_map<Sequent, std::size_t, SequentHash> index_;
};

/// Materializes every (Γ, Δ) admitted by the caps. Throws LimitError above caps.limit.
inline SequentUniverse enumerate_sequents(const VariableUniverse& vars, const SequentCaps& caps = {}) {
  const std::size_t na = vars.antecedents().size();
  const std::size_t ns = vars.consequents().size();
  if (na > kMaxVariablesPerSide || ns > kMaxVariablesPerSide)
    throw UsageError("at most " + std::to_string(kMaxVariablesPerSide) + " variables per side are supported");

  const Integer count = detail::side_count(na, caps.max_gamma, caps.include_empty_gamma) *
                        detail::side_count(ns, caps.max_delta, caps.include_empty_delta);
  if (count > caps.limit)
    throw LimitError("sequent enumeration would produce " + count.str() + " sequents, limit is " +
                     std::to_string(caps.limit) + " (lower --max-gamma/--max-delta)");

  const auto gammas = detail::side_masks(na, caps.max_gamma, caps.include_empty_gamma);
  const auto deltas = detail::side_masks(ns, caps.max_delta, caps.include_empty_delta);
  std::vector<Sequent> out;
  out.reserve(gammas.size() * deltas.size());
  for (auto g : gammas)
    for (auto d : deltas) out.push_back({g, d});
  return SequentUniverse(vars, caps, std::move(out));
}

/// Every s′ ≺ s, s′ ≠ s, that the universe admits. Canonical order.
inline std::vector<Sequent> strict_predecessors(const SequentUniverse& universe, const Sequent& s) {
  if (!universe.contains(s)) throw UsageError("sequent is not in the universe");
  std::vector<Sequent> out;
  // Walk submasks of Γ and Δ, each in descending order, then sort canonically.
  for (std::uint64_t g = s.gamma;; g = (g - 1) & s.gamma) {
    for (std::uint64_t d = s.delta;; d = (d - 1) & s.delta) {
      Sequent q{g, d};
      if (!(q == s) && universe.contains(q)) out.push_back(q);
      if (d == 0) break;
    }
    if (g == 0) break;
  }
  std::sort(out.begin(), out.end(), [&](const Sequent& a, const Sequent& b) {
    return *universe.index_of(a) < *universe.index_of(b);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Filtrations

enum class FiltrationKind { I, II };

inline std::string to_string(FiltrationKind k) { return k == FiltrationKind::I ? "one" : "two"; }

namespace detail {

inline Bits antecedent_meet(const DataMap& map, std::uint64_t gamma) {
  Bits acc(map.space().size());
  acc.set();
  for (std::size_t i = 0; gamma; ++i, gamma >>= 1)
    if (gamma & 1U) acc &= map.antecedent(i).bits();
  return acc;
}

inline Bits consequent_join(const DataMap& map, std::uint64_t delta) {
  Bits acc(map.space().size());
  for (std::size_t j = 0; delta; ++j, delta >>= 1)
    if (delta & 1U) acc |= map.consequent(j).bits();
  return acc;
}

}  // namespace detail

/// Filtration I: smallest t with ∩Γ ⊂_{1-t} ∪Δ, i.e. 1 − m(∩Γ ∩ ∪Δ)/m(∩Γ).
/// A null antecedent meet is vacuously contained and gives 0.
inline Rational birth_time_I(const MeasureSpace& space, const DataMap& map, const Sequent& s) {
  const Bits meet = detail::antecedent_meet(map, s.gamma);
  const Rational q = measure(space, space.from_bits(meet));
  if (q == 0) return 0;
  const Rational p = measure(space, space.from_bits(meet & detail::consequent_join(map, s.delta)));
  return 1 - p / q;
}

/// Filtration II: 1 − m(∪_{a∈Γ}[[a]]^c ∪ ∪_{x∈Δ}[[x]]). Membership at t iff the truth
/// set has measure ≥ 1 − t.
inline Rational birth_time_II(const MeasureSpace& space, const DataMap& map, const Sequent& s) {
  const Bits truth = ~detail::antecedent_meet(map, s.gamma) | detail::consequent_join(map, s.delta);
  return 1 - measure(space, space.from_bits(truth));
}

/// Birth time of every sequent of a universe under one filtration, indexed like the universe.
struct BirthTable {
  FiltrationKind kind = FiltrationKind::II;
  std::string digest;
  std::vector<Rational> births;

  const Rational& operator[](std::size_t i) const { return births.at(i); }
  std::size_t size() const noexcept { return births.size(); }
};

/// FNV-1a over the canonical text of a data map; identifies which data produced a table.
inline std::string data_map_digest(const DataMap& map) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;
    h *= 0x100000001b3ULL;
  };
  const auto& space = map.space();
  for (std::size_t i = 0; i < space.size(); ++i) {
    feed(space.ground()[i]);
    feed(to_string(space.weight(i)));
  }
  auto feed_side = [&](const std::vector<std::string>& names, const std::vector<MSet>& sets) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      feed(names[i]);
      std::string bits;
      boost::to_string(sets[i].bits(), bits);
      feed(bits);
    }
  };
  feed_side(map.universe().antecedents(), map.antecedent_sets());
  feed_side(map.universe().consequents(), map.consequent_sets());
  static constexpr char hex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = hex[h & 0xF];
  return out;
}

inline Rational birth_time(FiltrationKind kind, const MeasureSpace& space, const DataMap& map, const Sequent& s) {
  return kind == FiltrationKind::I ? birth_time_I(space, map, s) : birth_time_II(space, map, s);
}

inline BirthTable compute_births(const SequentUniverse& universe, const DataMap& map, FiltrationKind kind) {
  if (!(universe.variables() == map.universe()))
    throw UsageError("data map and sequent universe use different variables");
  BirthTable table{kind, data_map_digest(map), {}};
  table.births.reserve(universe.size());
  for (const auto& s : universe.sequents()) table.births.push_back(birth_time(kind, map.space(), map, s));
  return table;
}

// ---------------------------------------------------------------------------
// Minimal elements and barcodes

/// Min(S_t): sequents born by t with no strict predecessor born by t.
inline std::vector<Sequent> min_elements(const SequentUniverse& universe, const BirthTable& births,
                                         const Rational& t) {
  if (t < 0 || t > 1) throw UsageError("filtration time " + to_string(t) + " outside [0,1]");
  if (births.size() != universe.size()) throw UsageError("birth table does not match the universe");
  std::vector<Sequent> out;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (births[i] > t) continue;
    const auto& s = universe[i];
    bool minimal = true;
    for (const auto& q : strict_predecessors(universe, s))
      if (births[*universe.index_of(q)] <= t) {
        minimal = false;
        break;
      }
    if (minimal) out.push_back(s);
  }
  return out;
}

/// Interval during which a sequent is minimal: [birth, death), or [birth, 1] when
/// closed_at_end. A closed bar may be the single point {1}.
struct PosetBar {
  Sequent sequent;
  Rational birth;
  Rational death;
  bool closed_at_end = false;

  Rational length() const { return death - birth; }

  friend bool operator==(const PosetBar&, const PosetBar&) = default;
};

/// Closed-form barcode: death(p) is the earliest birth among strict predecessors of p.
/// Bars are emitted in universe order and only when the interval is non-empty.
inline std::vector<PosetBar> sequent_barcode(const SequentUniverse& universe, const BirthTable& births) {
  if (births.size() != universe.size()) throw UsageError("birth table does not match the universe");
  const std::size_t n = universe.size();
  // below[i] = min birth over strict predecessors, computed along one-element removals.
  // Every predecessor is reachable by single removals that stay inside the universe.
  std::vector<std::optional<Rational>> below(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Sequent& s = universe[i];
    std::optional<Rational> best;
    auto consider = [&](const Sequent& q) {
      auto j = universe.index_of(q);
      if (!j) {
        if (universe.caps().admits(q)) throw UsageError("sequent universe is not downward closed");
        return;
      }
      const Rational& cand = births[*j];
      if (!best || cand < *best) best = cand;
      if (below[*j] && *below[*j] < *best) best = below[*j];
    };
    for (std::uint64_t g = s.gamma; g; g &= g - 1) consider({s.gamma & ~(g & -g), s.delta});
    for (std::uint64_t d = s.delta; d; d &= d - 1) consider({s.gamma, s.delta & ~(d & -d)});
    below[i] = std::move(best);
  }

  std::vector<PosetBar> bars;
  for (std::size_t i = 0; i < n; ++i) {
    const Rational& b = births[i];
    if (!below[i]) {
      bars.push_back({universe[i], b, Rational(1), true});
    } else if (b < *below[i]) {
      bars.push_back({universe[i], b, *below[i], false});
    }
  }
  return bars;
}

/// A barcode together with the poset it was computed over.
struct SequentBarcode {
  std::vector<Sequent> poset;
  std::vector<PosetBar> bars;
};

inline SequentBarcode barcode_of(const SequentUniverse& universe, const BirthTable& births) {
  return {universe.sequents(), sequent_barcode(universe, births)};
}

/// Sub-universe keeping the sequents accepted by `keep`, in the same order. The result
/// must be downward closed for the closed-form barcode to apply.
template <typename Pred>
SequentUniverse restrict_universe(const SequentUniverse& universe, Pred keep) {
  std::vector<Sequent> kept;
  for (const auto& s : universe.sequents())
    if (keep(s)) kept.push_back(s);
  return SequentUniverse(universe.variables(), universe.caps(), std::move(kept));
}

/// Sort for hypothesis mining: longest first, then smaller |Γ|, then canonical order.
inline void rank_bars(const SequentUniverse& universe, std::vector<PosetBar>& bars) {
  std::stable_sort(bars.begin(), bars.end(), [&](const PosetBar& a, const PosetBar& b) {
    const Rational la = a.length(), lb = b.length();
    if (la != lb) return la > lb;
    if (a.sequent.gamma_size() != b.sequent.gamma_size()) return a.sequent.gamma_size() < b.sequent.gamma_size();
    return *universe.index_of(a.sequent) < *universe.index_of(b.sequent);
  });
}

}  // namespace seqbar
