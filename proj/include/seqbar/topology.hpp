#pragma once

// Filtered chain complexes over Z/2: the order complex Δ(P) and the suspension
// complex Δ̃(P) of a filtered poset, plus explicit simplicial complexes.
//
// Δ̃ is built by suspending with successively smaller chain elements as basepoints, so
// a cell is a base element v with decorations v ≻ u_1 ≻ … ≻ u_k, each tagged up or down.
// With that orientation the subchain cycles sit at the equator of the last suspension and
// cone off once the smaller element arrives.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seqbar/errors.hpp"
#include "seqbar/poset.hpp"
#include "seqbar/rational.hpp"

namespace seqbar {

enum class Direction : std::uint8_t { up = 0, down = 1 };

inline const char* to_string(Direction d) { return d == Direction::up ? "up" : "down"; }

/// Cell of Δ̃: base v and decorations [(u_1,d_1),…,(u_k,d_k)] with v ≻ u_1 ≻ … ≻ u_k.
struct Cell {
  std::size_t base = 0;
  std::vector<std::pair<std::size_t, Direction>> decorations;

  std::size_t dim() const noexcept { return decorations.size(); }
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Simplex of Δ(P): a chain listed from smallest to largest.
struct Simplex {
  std::vector<std::size_t> vertices;

  std::size_t dim() const noexcept { return vertices.empty() ? 0 : vertices.size() - 1; }
  friend bool operator==(const Simplex&, const Simplex&) = default;
};

/// ∂ over Z/2: dropping each decoration, plus the face obtained by promoting u_1 to base.
inline std::vector<Cell> boundary(const Cell& c) {
  std::vector<Cell> out;
  if (c.decorations.empty()) return out;
  for (std::size_t i = 0; i < c.decorations.size(); ++i) {
    Cell f{c.base, c.decorations};
    f.decorations.erase(f.decorations.begin() + static_cast<std::ptrdiff_t>(i));
    out.push_back(std::move(f));
  }
  out.push_back(Cell{c.decorations.front().first, {c.decorations.begin() + 1, c.decorations.end()}});
  return out;
}

inline std::vector<Simplex> boundary(const Simplex& s) {
  std::vector<Simplex> out;
  if (s.vertices.size() < 2) return out;
  for (std::size_t i = 0; i < s.vertices.size(); ++i) {
    Simplex f = s;
    f.vertices.erase(f.vertices.begin() + static_cast<std::ptrdiff_t>(i));
    out.push_back(std::move(f));
  }
  return out;
}

enum class ComplexKind { order, suspension, simplicial };

inline const char* to_string(ComplexKind k) {
  switch (k) {
    case ComplexKind::order: return "order";
    case ComplexKind::suspension: return "suspension";
    default: return "simplicial";
  }
}

using CellKey = std::vector<std::uint32_t>;

/// Filtered complex with cells in filtration order; boundary columns hold sorted indices
/// of strictly earlier cells.
struct FilteredChainComplex {
  struct Entry {
    std::size_t dim = 0;
    Rational birth;
    CellKey key;  ///< suspension: base, u_1, d_1, …; simplicial: vertex ids
    std::vector<std::size_t> boundary;
  };

  ComplexKind kind = ComplexKind::simplicial;
  std::vector<std::string> names;  ///< vertex / poset element names
  std::vector<Entry> cells;

  std::size_t size() const noexcept { return cells.size(); }
  const Entry& operator[](std::size_t i) const { return cells[i]; }

  std::size_t max_dim() const {
    std::size_t d = 0;
    for (const auto& c : cells) d = std::max(d, c.dim);
    return d;
  }

  std::vector<std::size_t> census() const {
    std::vector<std::size_t> out(cells.empty() ? 0 : max_dim() + 1, 0);
    for (const auto& c : cells) ++out[c.dim];
    return out;
  }

  std::string label(std::size_t i) const {
    const auto& k = cells[i].key;
    if (kind == ComplexKind::suspension) {
      std::string s = names[k[0]];
      if (k.size() > 1) {
        s += " [";
        for (std::size_t j = 1; j < k.size(); j += 2) {
          if (j > 1) s += ", ";
          s += names[k[j]] + (k[j + 1] ? " down" : " up");
        }
        s += "]";
      }
      return s;
    }
    std::string s = "{";
    for (std::size_t j = 0; j < k.size(); ++j) s += (j ? ", " : "") + names[k[j]];
    return s + "}";
  }
};

inline CellKey cell_key(const Cell& c) {
  CellKey k{static_cast<std::uint32_t>(c.base)};
  for (const auto& [u, d] : c.decorations) {
    k.push_back(static_cast<std::uint32_t>(u));
    k.push_back(static_cast<std::uint32_t>(d));
  }
  return k;
}

inline Cell key_cell(const CellKey& k) {
  Cell c{k.at(0), {}};
  for (std::size_t j = 1; j + 1 < k.size(); j += 2) c.decorations.emplace_back(k[j], static_cast<Direction>(k[j + 1]));
  return c;
}

inline CellKey simplex_key(const Simplex& s) { return {s.vertices.begin(), s.vertices.end()}; }

struct ComplexLimits {
  std::optional<std::size_t> max_chain_len;
  std::size_t max_cells = 2'000'000;
  /// Posets larger than this must give max_chain_len explicitly.
  std::size_t uncapped_poset_limit = 20;
};

namespace detail {

struct RawCell {
  std::size_t dim;
  Rational birth;
  CellKey key;
  std::vector<CellKey> faces;
};

/// Sorts by (birth, dim, key), resolves faces to indices and checks filtration compatibility.
inline FilteredChainComplex assemble(ComplexKind kind, std::vector<std::string> names, std::vector<RawCell> raw) {
  std::sort(raw.begin(), raw.end(), [](const RawCell& a, const RawCell& b) {
    if (a.birth != b.birth) return a.birth < b.birth;
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.key < b.key;
  });
  std::map<CellKey, std::size_t> index;
  for (std::size_t i = 0; i < raw.size(); ++i) index.emplace(raw[i].key, i);
  FilteredChainComplex fc;
  fc.kind = kind;
  fc.names = std::move(names);
  fc.cells.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    FilteredChainComplex::Entry e{raw[i].dim, std::move(raw[i].birth), std::move(raw[i].key), {}};
    for (const auto& f : raw[i].faces) {
      auto it = index.find(f);
      if (it == index.end()) throw std::logic_error("boundary face missing from complex");
      if (it->second >= i) throw std::logic_error("boundary face is not born before its coface");
      // Z/2: a face appearing twice cancels.
      auto pos = std::lower_bound(e.boundary.begin(), e.boundary.end(), it->second);
      if (pos != e.boundary.end() && *pos == it->second)
        e.boundary.erase(pos);
      else
        e.boundary.insert(pos, it->second);
    }
    fc.cells.push_back(std::move(e));
  }
  return fc;
}

/// Strictly decreasing chains v ≻ u_1 ≻ … of at most `cap` elements, by number of elements.
inline std::vector<std::vector<double>> chain_counts(const FinitePoset& p, std::size_t cap) {
  const std::size_t n = p.size();
  std::vector<std::vector<double>> cnt(cap + 1, std::vector<double>(n, 0.0));
  for (std::size_t v = 0; v < n; ++v) cnt[1][v] = 1;
  for (std::size_t len = 2; len <= cap; ++len)
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t u = 0; u < n; ++u)
        if (p.less(u, v)) cnt[len][v] += cnt[len - 1][u];
  return cnt;
}

inline std::size_t effective_cap(const FinitePoset& p, const ComplexLimits& lim) {
  if (lim.max_chain_len) {
    if (*lim.max_chain_len == 0) throw UsageError("max chain length must be positive");
    return std::min(*lim.max_chain_len, p.size());
  }
  if (p.size() > lim.uncapped_poset_limit)
    throw UsageError("poset has " + std::to_string(p.size()) + " elements; a max chain length is required above " +
                     std::to_string(lim.uncapped_poset_limit));
  return std::max<std::size_t>(p.size(), 1);
}

inline void guard(double cells, const ComplexLimits& lim) {
  if (cells > static_cast<double>(lim.max_cells))
    throw LimitError("complex would have about " + std::to_string(static_cast<long long>(cells)) +
                     " cells, over the limit of " + std::to_string(lim.max_cells) + "; lower the chain length cap");
}

template <typename Visit>
void for_each_decreasing_chain(const FinitePoset& p, std::size_t cap, Visit visit) {
  std::vector<std::size_t> chain;
  auto rec = [&](auto&& self) -> void {
    visit(chain);
    if (chain.size() == cap) return;
    for (std::size_t u = 0; u < p.size(); ++u)
      if (p.less(u, chain.back())) {
        chain.push_back(u);
        self(self);
        chain.pop_back();
      }
  };
  for (std::size_t v = 0; v < p.size(); ++v) {
    chain.assign(1, v);
    rec(rec);
  }
}

}  // namespace detail

/// All cells of Δ̃(P) over chains of at most `max_chain_len` elements, grouped by base.
inline std::vector<Cell> suspension_cells(const FinitePoset& p, const ComplexLimits& lim = {}) {
  const std::size_t cap = detail::effective_cap(p, lim);
  const auto cnt = detail::chain_counts(p, cap);
  double total = 0;
  for (std::size_t len = 1; len <= cap; ++len)
    for (double c : cnt[len]) total += c * static_cast<double>(1ULL << std::min<std::size_t>(len - 1, 62));
  detail::guard(total, lim);

  std::vector<Cell> out;
  out.reserve(static_cast<std::size_t>(total));
  detail::for_each_decreasing_chain(p, cap, [&](const std::vector<std::size_t>& chain) {
    const std::size_t k = chain.size() - 1;
    for (std::uint64_t word = 0; word < (1ULL << k); ++word) {
      Cell c{chain[0], {}};
      for (std::size_t i = 0; i < k; ++i)
        c.decorations.emplace_back(chain[i + 1], (word >> (k - 1 - i) & 1U) ? Direction::down : Direction::up);
      out.push_back(std::move(c));
    }
  });
  return out;
}

/// Chains of at most `max_chain_len` elements, as simplices.
inline std::vector<Simplex> order_simplices(const FinitePoset& p, const ComplexLimits& lim = {}) {
  const std::size_t cap = detail::effective_cap(p, lim);
  const auto cnt = detail::chain_counts(p, cap);
  double total = 0;
  for (std::size_t len = 1; len <= cap; ++len)
    for (double c : cnt[len]) total += c;
  detail::guard(total, lim);

  std::vector<Simplex> out;
  detail::for_each_decreasing_chain(p, cap, [&](const std::vector<std::size_t>& chain) {
    out.push_back(Simplex{{chain.rbegin(), chain.rend()}});
  });
  return out;
}

inline Rational cell_birth(const FilteredPoset& fp, const Cell& c) {
  Rational b = fp.births.at(c.base);
  for (const auto& [u, d] : c.decorations) b = std::max(b, fp.births.at(u));
  return b;
}

inline Rational simplex_birth(const FilteredPoset& fp, const Simplex& s) {
  Rational b = 0;
  for (auto v : s.vertices) b = std::max(b, fp.births.at(v));
  return b;
}

/// The suspension complex Δ̃(P_t) of a filtered poset.
inline FilteredChainComplex suspension_complex(const FilteredPoset& fp, const ComplexLimits& lim = {}) {
  std::vector<detail::RawCell> raw;
  for (auto& c : suspension_cells(fp.poset, lim)) {
    detail::RawCell r{c.dim(), cell_birth(fp, c), cell_key(c), {}};
    for (const auto& f : boundary(c)) r.faces.push_back(cell_key(f));
    raw.push_back(std::move(r));
  }
  return detail::assemble(ComplexKind::suspension, fp.poset.names(), std::move(raw));
}

/// The order complex Δ(P_t) of a filtered poset.
inline FilteredChainComplex order_complex(const FilteredPoset& fp, const ComplexLimits& lim = {}) {
  std::vector<detail::RawCell> raw;
  for (auto& s : order_simplices(fp.poset, lim)) {
    detail::RawCell r{s.dim(), simplex_birth(fp, s), simplex_key(s), {}};
    for (const auto& f : boundary(s)) r.faces.push_back(simplex_key(f));
    raw.push_back(std::move(r));
  }
  return detail::assemble(ComplexKind::order, fp.poset.names(), std::move(raw));
}

inline FilteredChainComplex filtered_complex(const FilteredPoset& fp, ComplexKind kind, const ComplexLimits& lim = {}) {
  switch (kind) {
    case ComplexKind::order: return order_complex(fp, lim);
    case ComplexKind::suspension: return suspension_complex(fp, lim);
    default: throw UsageError("a poset yields an order or suspension complex");
  }
}

/// A listed simplex with an optional explicit birth.
struct SimplexSpec {
  std::vector<std::string> vertices;
  std::optional<Rational> birth;
};

/// Closes the listed simplices under faces. A simplex without an explicit birth takes the
/// max of its vertex births (lower-star) if vertex births are given, else the smallest
/// birth of any listed simplex containing it. Throws ValidationError on a face born after
/// a coface or on missing births.
inline FilteredChainComplex simplicial_complex(const std::vector<SimplexSpec>& simplices,
                                               const std::map<std::string, Rational>& vertex_births = {}) {
  std::vector<std::string> names;
  std::unordered_map<std::string, std::uint32_t> id;
  auto intern = [&](const std::string& v) {
    auto [it, fresh] = id.emplace(v, static_cast<std::uint32_t>(names.size()));
    if (fresh) names.push_back(v);
    return it->second;
  };
  for (const auto& [v, b] : vertex_births) intern(v);

  std::map<CellKey, std::optional<Rational>> explicit_birth;
  for (const auto& s : simplices) {
    if (s.vertices.empty()) throw ValidationError("empty simplex");
    CellKey k;
    for (const auto& v : s.vertices) k.push_back(intern(v));
    std::sort(k.begin(), k.end());
    if (std::adjacent_find(k.begin(), k.end()) != k.end()) throw ValidationError("simplex repeats a vertex");
    if (s.birth && (*s.birth < 0 || *s.birth > 1)) throw ValidationError("simplex birth outside [0,1]");
    auto& slot = explicit_birth[k];
    if (s.birth) slot = s.birth;
  }
  std::vector<Rational> vb(names.size());
  for (const auto& [v, b] : vertex_births) {
    if (b < 0 || b > 1) throw ValidationError("vertex birth outside [0,1]");
    vb[id.at(v)] = b;
  }

  // Face closure; every face inherits the minimum birth of the listed simplices above it.
  std::map<CellKey, std::optional<Rational>> inherited;
  for (const auto& [k, b] : explicit_birth) {
    const std::size_t n = k.size();
    for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
      CellKey f;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1U) f.push_back(k[i]);
      auto& slot = inherited[f];
      if (b && (!slot || *b < *slot)) slot = b;
    }
  }

  std::vector<detail::RawCell> raw;
  std::map<CellKey, Rational> births;
  for (const auto& [k, inh] : inherited) {
    Rational b;
    auto ex = explicit_birth.find(k);
    if (ex != explicit_birth.end() && ex->second) {
      b = *ex->second;
    } else if (!vertex_births.empty()) {
      b = 0;
      for (auto v : k) {
        if (!vertex_births.count(names[v])) throw ValidationError("vertex '" + names[v] + "' has no birth");
        b = std::max(b, vb[v]);
      }
    } else if (inh) {
      b = *inh;
    } else {
      throw ValidationError("simplex has no birth and no vertex births are given");
    }
    births[k] = b;
  }
  for (const auto& [k, b] : births) {
    detail::RawCell r{k.size() - 1, b, k, {}};
    if (k.size() > 1)
      for (std::size_t i = 0; i < k.size(); ++i) {
        CellKey f = k;
        f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
        if (births.at(f) > b) throw ValidationError("a face is born after its coface");
        r.faces.push_back(std::move(f));
      }
    raw.push_back(std::move(r));
  }
  return detail::assemble(ComplexKind::simplicial, std::move(names), std::move(raw));
}

}  // namespace seqbar
