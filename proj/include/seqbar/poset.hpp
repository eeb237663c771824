#pragma once

// Finite posets with per-element birth times, their minimal-element barcodes, and the
// bridge from a sequent universe to a generic poset.

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seqbar/errors.hpp"
#include "seqbar/rational.hpp"
#include "seqbar/sequents.hpp"

namespace seqbar {

/// Finite poset stored as its strict order relation (transitively closed).
class FinitePoset {
 public:
  FinitePoset() = default;

  /// Builds the order generated by `relations`, each pair (lo, hi) meaning lo ≺ hi.
  /// Throws ValidationError on unknown names, duplicates, or cycles.
  FinitePoset(std::vector<std::string> names, const std::vector<std::pair<std::string, std::string>>& relations)
      : names_(std::move(names)), less_(names_.size(), std::vector<char>(names_.size(), 0)) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (!index.emplace(names_[i], i).second) throw ValidationError("duplicate poset element '" + names_[i] + "'");
    for (const auto& [lo, hi] : relations) {
      auto a = index.find(lo), b = index.find(hi);
      if (a == index.end()) throw ValidationError("relation names unknown element '" + lo + "'");
      if (b == index.end()) throw ValidationError("relation names unknown element '" + hi + "'");
      less_[a->second][b->second] = 1;
    }
    close();
  }

  /// From an explicit strict-order predicate; the predicate must already be a strict order.
  template <typename Less>
  static FinitePoset from_relation(std::vector<std::string> names, Less less) {
    FinitePoset p;
    p.names_ = std::move(names);
    const std::size_t n = p.names_.size();
    p.less_.assign(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && less(i, j)) p.less_[i][j] = 1;
    p.close();
    return p;
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }

  /// i ≺ j, strictly.
  bool less(std::size_t i, std::size_t j) const { return less_[i][j] != 0; }
  bool leq(std::size_t i, std::size_t j) const { return i == j || less(i, j); }
  bool comparable(std::size_t i, std::size_t j) const { return leq(i, j) || leq(j, i); }

  std::vector<std::size_t> maximal_elements() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i) {
      bool top = true;
      for (std::size_t j = 0; j < size() && top; ++j) top = !less(i, j);
      if (top) out.push_back(i);
    }
    return out;
  }

 private:
  void close() {
    const std::size_t n = names_.size();
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (less_[i][k])
          for (std::size_t j = 0; j < n; ++j)
            if (less_[k][j]) less_[i][j] = 1;
    for (std::size_t i = 0; i < n; ++i)
      if (less_[i][i]) throw ValidationError("order relation has a cycle through '" + names_[i] + "'");
  }

  std::vector<std::string> names_;
  std::vector<std::vector<char>> less_;
};

/// Poset filtration P_t = {p : birth(p) ≤ t}.
struct FilteredPoset {
  FinitePoset poset;
  std::vector<Rational> births;

  FilteredPoset() = default;
  FilteredPoset(FinitePoset p, std::vector<Rational> b) : poset(std::move(p)), births(std::move(b)) {
    if (births.size() != poset.size()) throw ValidationError("one birth time per poset element is required");
    for (const auto& t : births)
      if (t < 0 || t > 1) throw ValidationError("birth time " + to_string(t) + " outside [0,1]");
  }

  std::size_t size() const noexcept { return poset.size(); }
};

/// Bar of a poset element; same conventions as PosetBar.
struct ElementBar {
  std::size_t element = 0;
  Rational birth;
  Rational death;
  bool closed_at_end = false;

  Rational length() const { return death - birth; }
};

inline std::vector<std::size_t> min_elements(const FilteredPoset& fp, const Rational& t) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fp.size(); ++i) {
    if (fp.births[i] > t) continue;
    bool minimal = true;
    for (std::size_t j = 0; j < fp.size() && minimal; ++j)
      if (fp.poset.less(j, i) && fp.births[j] <= t) minimal = false;
    if (minimal) out.push_back(i);
  }
  return out;
}

inline std::vector<ElementBar> poset_barcode(const FilteredPoset& fp) {
  std::vector<ElementBar> bars;
  for (std::size_t i = 0; i < fp.size(); ++i) {
    std::optional<Rational> below;
    for (std::size_t j = 0; j < fp.size(); ++j)
      if (fp.poset.less(j, i) && (!below || fp.births[j] < *below)) below = fp.births[j];
    if (!below)
      bars.push_back({i, fp.births[i], Rational(1), true});
    else if (fp.births[i] < *below)
      bars.push_back({i, fp.births[i], *below, false});
  }
  return bars;
}

/// Random poset on n elements e0..e{n-1}: e_j ≺ e_i with probability edge_prob for i < j,
/// then transitively closed.
template <typename Rng>
FinitePoset random_poset(Rng& rng, std::size_t n, double edge_prob) {
  std::bernoulli_distribution coin(edge_prob);
  std::vector<std::vector<char>> rel(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) rel[j][i] = coin(rng);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("e" + std::to_string(i));
  return FinitePoset::from_relation(std::move(names), [&](std::size_t a, std::size_t b) { return rel[a][b] != 0; });
}

/// Random filtered poset with 1..max_elements elements, e0 the unique maximum born at 0
/// and all other births distinct multiples of 1/(2n) in (0,1].
template <typename Rng>
FilteredPoset random_embedding_instance(Rng& rng, std::size_t max_elements, double edge_prob = 0.4) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(max_elements, 1))(rng);
  std::bernoulli_distribution coin(edge_prob);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("e" + std::to_string(i));
  std::vector<std::vector<char>> rel(n, std::vector<char>(n, 0));
  for (std::size_t j = 1; j < n; ++j) {
    rel[j][0] = 1;
    for (std::size_t i = 1; i < j; ++i) rel[j][i] = coin(rng);
  }
  auto poset = FinitePoset::from_relation(std::move(names), [&](std::size_t a, std::size_t b) { return rel[a][b] != 0; });
  std::vector<long long> slots(2 * n);
  for (std::size_t k = 0; k < slots.size(); ++k) slots[k] = static_cast<long long>(k) + 1;
  std::shuffle(slots.begin(), slots.end(), rng);
  std::vector<Rational> births(n, Rational(0));
  for (std::size_t i = 1; i < n; ++i) births[i] = Rational(slots[i - 1], static_cast<long long>(2 * n));
  return FilteredPoset(std::move(poset), std::move(births));
}

/// The sequent poset with its birth table, as a generic filtered poset (labels as names).
inline FilteredPoset to_filtered_poset(const SequentUniverse& universe, const BirthTable& births) {
  std::vector<std::string> names;
  names.reserve(universe.size());
  for (const auto& s : universe.sequents()) names.push_back(universe.label(s));
  auto poset = FinitePoset::from_relation(std::move(names), [&](std::size_t i, std::size_t j) {
    return seq_leq(universe[i], universe[j]);
  });
  return FilteredPoset(std::move(poset), births.births);
}

}  // namespace seqbar
