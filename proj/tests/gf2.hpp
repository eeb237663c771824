#pragma once

// Dense linear algebra over Z/2 used as an independent homology oracle.

#include <boost/dynamic_bitset.hpp>

#include <optional>
#include <vector>

#include "seqbar/topology.hpp"

namespace seqbar::testing {

using Vec2 = boost::dynamic_bitset<>;

/// Row-echelon basis; insert() reports whether the vector was independent.
class Span2 {
 public:
  explicit Span2(std::size_t width) : width_(width) {}

  bool insert(Vec2 v) {
    for (const auto& [pivot, row] : rows_)
      if (v[pivot]) v ^= row;
    const auto pivot = v.find_first();
    if (pivot == Vec2::npos) return false;
    for (auto& [p, row] : rows_)
      if (row[pivot]) row ^= v;
    rows_.emplace_back(pivot, std::move(v));
    return true;
  }

  bool contains(Vec2 v) const {
    for (const auto& [pivot, row] : rows_)
      if (v[pivot]) v ^= row;
    return v.none();
  }

  std::size_t rank() const noexcept { return rows_.size(); }
  std::size_t width() const noexcept { return width_; }

 private:
  std::size_t width_;
  std::vector<std::pair<std::size_t, Vec2>> rows_;
};

inline std::size_t gf2_rank(const std::vector<Vec2>& vectors, std::size_t width) {
  Span2 s(width);
  for (const auto& v : vectors) s.insert(v);
  return s.rank();
}

/// Kernel basis of the linear map whose images of the standard basis are `columns`.
inline std::vector<Vec2> gf2_kernel(const std::vector<Vec2>& columns) {
  const std::size_t n = columns.size();
  // Reduce [column | identity] pairs; a column reducing to zero exposes a kernel vector.
  struct Pivot {
    std::size_t lead;
    Vec2 img, pre;
  };
  std::vector<Pivot> pivots;
  std::vector<Vec2> kernel;
  for (std::size_t j = 0; j < n; ++j) {
    Vec2 img = columns[j];
    Vec2 pre(n);
    pre.set(j);
    for (const auto& pv : pivots)
      if (img[pv.lead]) {
        img ^= pv.img;
        pre ^= pv.pre;
      }
    if (img.none()) {
      kernel.push_back(std::move(pre));
      continue;
    }
    const auto lead = img.find_first();
    for (auto& pv : pivots)
      if (pv.img[lead]) {
        pv.img ^= img;
        pv.pre ^= pre;
      }
    pivots.push_back({lead, std::move(img), std::move(pre)});
  }
  return kernel;
}

/// Cells of one dimension in a filtered complex, optionally only those born by `upto`.
struct DimSlice {
  std::vector<std::size_t> cells;               // complex indices
  std::vector<std::optional<std::size_t>> pos;  // complex index -> position in slice
};

inline DimSlice slice(const FilteredChainComplex& c, std::size_t dim) {
  DimSlice s;
  s.pos.assign(c.size(), std::nullopt);
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i].dim == dim) {
      s.pos[i] = s.cells.size();
      s.cells.push_back(i);
    }
  return s;
}

/// Boundary vectors (in dim-1 coordinates) of the dim-cells born by `upto`.
inline std::vector<Vec2> boundary_columns(const FilteredChainComplex& c, std::size_t dim,
                                          const std::optional<Rational>& upto = std::nullopt) {
  std::vector<Vec2> out;
  if (dim == 0) return out;
  const auto lower = slice(c, dim - 1);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].dim != dim || (upto && c[i].birth > *upto)) continue;
    Vec2 v(lower.cells.size());
    for (auto f : c[i].boundary) v.flip(*lower.pos[f]);
    out.push_back(std::move(v));
  }
  return out;
}

/// Cycle space Z_dim of the subcomplex born by `upto`, in full dim-slice coordinates.
inline std::vector<Vec2> cycles(const FilteredChainComplex& c, std::size_t dim,
                                const std::optional<Rational>& upto = std::nullopt) {
  const auto here = slice(c, dim);
  std::vector<std::size_t> alive;
  for (auto i : here.cells)
    if (!upto || c[i].birth <= *upto) alive.push_back(i);
  std::vector<Vec2> cols;
  const auto lower = dim ? slice(c, dim - 1) : DimSlice{};
  for (auto i : alive) {
    Vec2 v(lower.cells.size());
    for (auto f : c[i].boundary) v.flip(*lower.pos[f]);
    cols.push_back(std::move(v));
  }
  std::vector<Vec2> out;
  for (const auto& k : gf2_kernel(cols)) {
    Vec2 full(here.cells.size());
    for (std::size_t a = 0; a < alive.size(); ++a)
      if (k[a]) full.set(*here.pos[alive[a]]);
    out.push_back(std::move(full));
  }
  return out;
}

/// Betti numbers of the subcomplex born by `upto`, by dense rank computation.
inline std::vector<std::size_t> oracle_betti(const FilteredChainComplex& c,
                                             const std::optional<Rational>& upto = std::nullopt) {
  const std::size_t top = c.size() ? c.max_dim() : 0;
  std::vector<std::size_t> out(top + 1, 0);
  for (std::size_t d = 0; d <= top; ++d) {
    std::size_t n = 0;
    for (const auto& e : c.cells)
      if (e.dim == d && (!upto || e.birth <= *upto)) ++n;
    const std::size_t rank_d = d ? gf2_rank(boundary_columns(c, d, upto), slice(c, d - 1).cells.size()) : 0;
    const std::size_t rank_up = d < top ? gf2_rank(boundary_columns(c, d + 1, upto), slice(c, d).cells.size()) : 0;
    out[d] = n - rank_d - rank_up;
  }
  return out;
}

/// rank of H_p(K_s) -> H_p(K_t) = dim Z_p(K_s) - dim(Z_p(K_s) ∩ B_p(K_t)) = dim(Z_p(K_s) + B_p(K_t)) - dim B_p(K_t).
inline std::size_t oracle_persistent_rank(const FilteredChainComplex& c, std::size_t p, const Rational& s,
                                          const std::optional<Rational>& t) {
  const auto z = cycles(c, p, s);
  const auto b = boundary_columns(c, p + 1, t);
  const std::size_t width = slice(c, p).cells.size();
  Span2 both(width);
  for (const auto& v : z) both.insert(v);
  const std::size_t rank_b = gf2_rank(b, width);
  for (const auto& v : b) both.insert(v);
  return both.rank() - rank_b;
}

}  // namespace seqbar::testing
