#pragma once

// Finite normalized measure spaces, measurable sets as bitmasks, and data maps that
// assign a measurable set to each propositional variable.

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "seqbar/errors.hpp"
#include "seqbar/rational.hpp"

namespace seqbar {

/// Largest ground set accepted. Sets are stored as bit blocks, so this bounds memory only.
inline constexpr std::size_t kMaxGroundSize = 1'000'000;

using Bits = boost::dynamic_bitset<std::uint64_t>;

class MSet;

/// Finite ground set with strictly positive rational weights summing to exactly 1.
/// Copies share the underlying storage; a space is immutable once built.
class MeasureSpace {
 public:
  /// Counting measure normalized by |X|.
  static MeasureSpace counting(std::vector<std::string> ground) {
    auto data = std::make_shared<Data>();
    data->ground = std::move(ground);
    data->counting = true;
    validate_ground(*data);
    const Rational w(1, static_cast<long long>(data->ground.size()));
    data->weights.assign(data->ground.size(), w);
    return MeasureSpace(std::move(data));
  }

  static MeasureSpace weighted(std::vector<std::string> ground, std::vector<Rational> weights) {
    auto data = std::make_shared<Data>();
    data->ground = std::move(ground);
    validate_ground(*data);
    if (weights.size() != data->ground.size())
      throw ValidationError("weights has " + std::to_string(weights.size()) + " entries but ground has " +
                            std::to_string(data->ground.size()));
    Rational total = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0)
        throw ValidationError("weight of '" + data->ground[i] + "' is not positive: " + to_string(weights[i]));
      total += weights[i];
    }
    if (total != 1) throw ValidationError("weights sum to " + to_string(total) + ", expected 1");
    data->counting = std::all_of(weights.begin(), weights.end(), [&](const Rational& w) { return w == weights[0]; });
    data->weights = std::move(weights);
    return MeasureSpace(std::move(data));
  }

  std::size_t size() const noexcept { return data_->ground.size(); }
  const std::vector<std::string>& ground() const noexcept { return data_->ground; }
  const std::vector<Rational>& weights() const noexcept { return data_->weights; }
  const Rational& weight(std::size_t i) const { return data_->weights.at(i); }
  bool is_counting() const noexcept { return data_->counting; }

  std::optional<std::size_t> index_of(std::string_view element) const {
    auto it = data_->index.find(std::string(element));
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
  }

  /// Same ground sequence and weights. Sets built over either space interoperate.
  bool same_as(const MeasureSpace& other) const noexcept {
    return data_ == other.data_ || (data_->ground == other.data_->ground && data_->weights == other.data_->weights);
  }

  MSet empty_set() const;
  MSet full_set() const;
  /// Throws ValidationError naming the first element not in the ground set.
  MSet subset(const std::vector<std::string>& members) const;
  MSet subset_of_indices(const std::vector<std::size_t>& indices) const;
  MSet from_bits(Bits bits) const;

 private:
  struct Data {
    std::vector<std::string> ground;
    std::vector<Rational> weights;
    std::unordered_map<std::string, std::size_t> index;
    bool counting = false;
  };

  explicit MeasureSpace(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  static void validate_ground(Data& data) {
    if (data.ground.empty()) throw ValidationError("ground set is empty");
    if (data.ground.size() > kMaxGroundSize)
      throw ValidationError("ground set has " + std::to_string(data.ground.size()) + " elements, limit is " +
                            std::to_string(kMaxGroundSize));
    for (std::size_t i = 0; i < data.ground.size(); ++i)
      if (!data.index.emplace(data.ground[i], i).second)
        throw ValidationError("duplicate ground element '" + data.ground[i] + "'");
  }

  std::shared_ptr<const Data> data_;

  friend class MSet;
};

/// Measurable subset of a MeasureSpace, one bit per ground element.
class MSet {
 public:
  const MeasureSpace& space() const noexcept { return space_; }
  const Bits& bits() const noexcept { return bits_; }
  std::size_t count() const noexcept { return bits_.count(); }
  bool empty() const noexcept { return bits_.none(); }
  bool contains(std::size_t i) const { return bits_.test(i); }

  std::vector<std::string> members() const {
    std::vector<std::string> out;
    for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) out.push_back(space_.ground()[i]);
    return out;
  }

  bool belongs_to(const MeasureSpace& space) const noexcept { return space_.same_as(space); }

  friend bool operator==(const MSet& a, const MSet& b) { return a.space_.same_as(b.space_) && a.bits_ == b.bits_; }

 private:
  MSet(MeasureSpace space, Bits bits) : space_(std::move(space)), bits_(std::move(bits)) {}

  MeasureSpace space_;
  Bits bits_;

  friend class MeasureSpace;
};

inline MSet MeasureSpace::empty_set() const { return MSet(*this, Bits(size())); }

inline MSet MeasureSpace::full_set() const {
  Bits b(size());
  b.set();
  return MSet(*this, std::move(b));
}

inline MSet MeasureSpace::subset(const std::vector<std::string>& members) const {
  Bits b(size());
  for (const auto& m : members) {
    auto i = index_of(m);
    if (!i) throw ValidationError("element '" + m + "' is not in the ground set");
    b.set(*i);
  }
  return MSet(*this, std::move(b));
}

inline MSet MeasureSpace::subset_of_indices(const std::vector<std::size_t>& indices) const {
  Bits b(size());
  for (auto i : indices) {
    if (i >= size()) throw UsageError("ground index " + std::to_string(i) + " out of range");
    b.set(i);
  }
  return MSet(*this, std::move(b));
}

inline MSet MeasureSpace::from_bits(Bits bits) const {
  if (bits.size() != size()) throw UsageError("bitmask width does not match ground set");
  return MSet(*this, std::move(bits));
}

namespace detail {

inline void require_member(const MeasureSpace& space, const MSet& s) {
  if (!s.belongs_to(space)) throw UsageError("measurable set belongs to a different measure space");
}

}  // namespace detail

/// m(s): sum of the weights of the members of s.
inline Rational measure(const MeasureSpace& space, const MSet& s) {
  detail::require_member(space, s);
  if (space.is_counting()) return Rational(static_cast<long long>(s.count()), static_cast<long long>(space.size()));
  Rational total = 0;
  const Bits& b = s.bits();
  for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) total += space.weight(i);
  return total;
}

// ---------------------------------------------------------------------------
// Set expressions

/// Expression tree of union, intersection and complement over measurable sets.
/// Complement is relative to the ground set.
class SetExpr {
 public:
  struct Union;
  struct Intersection;
  struct Complement;

  SetExpr(MSet leaf) : node_(std::make_shared<Node>(Node{std::move(leaf)})) {}  // NOLINT: implicit leaf

  static SetExpr make_union(SetExpr a, SetExpr b) { return SetExpr(Node{Union{{std::move(a), std::move(b)}}}); }
  static SetExpr make_intersection(SetExpr a, SetExpr b) {
    return SetExpr(Node{Intersection{{std::move(a), std::move(b)}}});
  }
  static SetExpr make_complement(SetExpr a) { return SetExpr(Node{Complement{{std::move(a)}}}); }

  struct Union {
    std::vector<SetExpr> operands;
  };
  struct Intersection {
    std::vector<SetExpr> operands;
  };
  struct Complement {
    std::vector<SetExpr> operand;
  };

  Bits evaluate(const MeasureSpace& space) const {
    return std::visit(
        [&](const auto& n) -> Bits {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, MSet>) {
            detail::require_member(space, n);
            return n.bits();
          } else if constexpr (std::is_same_v<T, Union>) {
            Bits acc(space.size());
            for (const auto& op : n.operands) acc |= op.evaluate(space);
            return acc;
          } else if constexpr (std::is_same_v<T, Intersection>) {
            Bits acc(space.size());
            acc.set();
            for (const auto& op : n.operands) acc &= op.evaluate(space);
            return acc;
          } else {
            return ~n.operand.front().evaluate(space);
          }
        },
        node_->value);
  }

 private:
  struct Node {
    std::variant<MSet, Union, Intersection, Complement> value;
  };

  explicit SetExpr(Node node) : node_(std::make_shared<Node>(std::move(node))) {}

  std::shared_ptr<const Node> node_;
};

inline SetExpr unite(SetExpr a, SetExpr b) { return SetExpr::make_union(std::move(a), std::move(b)); }
inline SetExpr intersect(SetExpr a, SetExpr b) { return SetExpr::make_intersection(std::move(a), std::move(b)); }
inline SetExpr complement(SetExpr a) { return SetExpr::make_complement(std::move(a)); }

/// Exact bitmask evaluation of a set expression.
inline MSet set_expr(const MeasureSpace& space, const SetExpr& expr) { return space.from_bits(expr.evaluate(space)); }

/// S ⊂_t T, i.e. m(S ∩ T) / m(S) >= t. A null S is contained in everything.
inline bool fuzzy_subset(const MeasureSpace& space, const MSet& s, const MSet& t_set, const Rational& t) {
  if (t < 0 || t > 1) throw UsageError("inclusion threshold " + to_string(t) + " outside [0,1]");
  detail::require_member(space, s);
  detail::require_member(space, t_set);
  const Rational ms = measure(space, s);
  if (ms == 0) return true;
  return measure(space, space.from_bits(s.bits() & t_set.bits())) >= t * ms;
}

inline Rational sym_diff_measure(const MeasureSpace& space, const MSet& a, const MSet& b) {
  detail::require_member(space, a);
  detail::require_member(space, b);
  return measure(space, space.from_bits(a.bits() ^ b.bits()));
}

// ---------------------------------------------------------------------------
// Variables and data maps

/// Antecedent variables (V_A) and consequent variables (V_S), disjoint and duplicate-free.
class VariableUniverse {
 public:
  VariableUniverse() = default;
  VariableUniverse(std::vector<std::string> antecedents, std::vector<std::string> consequents)
      : antecedents_(std::move(antecedents)), consequents_(std::move(consequents)) {
    std::unordered_set<std::string> seen;
    for (const auto* side : {&antecedents_, &consequents_})
      for (const auto& name : *side)
        if (!seen.insert(name).second) throw ValidationError("variable '" + name + "' declared twice");
  }

  const std::vector<std::string>& antecedents() const noexcept { return antecedents_; }
  const std::vector<std::string>& consequents() const noexcept { return consequents_; }
  std::size_t card() const noexcept { return antecedents_.size() + consequents_.size(); }

  std::optional<std::size_t> antecedent_index(std::string_view name) const { return find(antecedents_, name); }
  std::optional<std::size_t> consequent_index(std::string_view name) const { return find(consequents_, name); }

  friend bool operator==(const VariableUniverse&, const VariableUniverse&) = default;

 private:
  static std::optional<std::size_t> find(const std::vector<std::string>& v, std::string_view name) {
    auto it = std::find(v.begin(), v.end(), name);
    if (it == v.end()) return std::nullopt;
    return static_cast<std::size_t>(it - v.begin());
  }

  std::vector<std::string> antecedents_;
  std::vector<std::string> consequents_;
};

/// Total assignment [[·]] of a measurable set to every variable of a universe.
class DataMap {
 public:
  DataMap(MeasureSpace space, VariableUniverse universe, std::vector<MSet> antecedent_sets,
          std::vector<MSet> consequent_sets)
      : space_(std::move(space)),
        universe_(std::move(universe)),
        antecedent_sets_(std::move(antecedent_sets)),
        consequent_sets_(std::move(consequent_sets)) {
    if (antecedent_sets_.size() != universe_.antecedents().size() ||
        consequent_sets_.size() != universe_.consequents().size())
      throw ValidationError("data map does not assign exactly one set per variable");
    for (const auto* side : {&antecedent_sets_, &consequent_sets_})
      for (const auto& s : *side)
        if (!s.belongs_to(space_)) throw ValidationError("data map mixes measure spaces");
  }

  const MeasureSpace& space() const noexcept { return space_; }
  const VariableUniverse& universe() const noexcept { return universe_; }
  const MSet& antecedent(std::size_t i) const { return antecedent_sets_.at(i); }
  const MSet& consequent(std::size_t j) const { return consequent_sets_.at(j); }
  const std::vector<MSet>& antecedent_sets() const noexcept { return antecedent_sets_; }
  const std::vector<MSet>& consequent_sets() const noexcept { return consequent_sets_; }

  const MSet& operator[](std::string_view name) const {
    if (auto i = universe_.antecedent_index(name)) return antecedent_sets_[*i];
    if (auto j = universe_.consequent_index(name)) return consequent_sets_[*j];
    throw UsageError("unknown variable '" + std::string(name) + "'");
  }

  /// Copy with one variable reassigned.
  DataMap with(std::string_view name, MSet value) const {
    DataMap copy = *this;
    if (auto i = universe_.antecedent_index(name))
      copy.antecedent_sets_[*i] = std::move(value);
    else if (auto j = universe_.consequent_index(name))
      copy.consequent_sets_[*j] = std::move(value);
    else
      throw UsageError("unknown variable '" + std::string(name) + "'");
    if (!copy[name].belongs_to(space_)) throw UsageError("replacement set belongs to a different measure space");
    return copy;
  }

 private:
  MeasureSpace space_;
  VariableUniverse universe_;
  std::vector<MSet> antecedent_sets_;
  std::vector<MSet> consequent_sets_;
};

/// Σ over all variables v of m([[v]] Δ [[v]]′).
inline Rational data_dist(const MeasureSpace& space, const DataMap& m1, const DataMap& m2) {
  if (!(m1.universe() == m2.universe())) throw UsageError("data maps are over different variable universes");
  if (!m1.space().same_as(space) || !m2.space().same_as(space))
    throw UsageError("data maps are over a different measure space");
  Rational total = 0;
  for (std::size_t i = 0; i < m1.antecedent_sets().size(); ++i)
    total += sym_diff_measure(space, m1.antecedent(i), m2.antecedent(i));
  for (std::size_t j = 0; j < m1.consequent_sets().size(); ++j)
    total += sym_diff_measure(space, m1.consequent(j), m2.consequent(j));
  return total;
}

}  // namespace seqbar
