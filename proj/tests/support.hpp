#pragma once

// Shared fixtures and random generators for the test suites.

#include <random>
#include <string>
#include <vector>

#include "seqbar/measure.hpp"

namespace seqbar::testing {

/// Five-element worked example: a={1,2,3,4}, b={2,3,4,5}, x={1,2,3}, y={3,4,5}.
inline DataMap worked_example() {
  auto space = MeasureSpace::counting({"1", "2", "3", "4", "5"});
  VariableUniverse vars({"a", "b"}, {"x", "y"});
  return DataMap(space, vars, {space.subset({"1", "2", "3", "4"}), space.subset({"2", "3", "4", "5"})},
                 {space.subset({"1", "2", "3"}), space.subset({"3", "4", "5"})});
}

inline MeasureSpace counting_space(std::size_t n) {
  std::vector<std::string> ground;
  for (std::size_t i = 1; i <= n; ++i) ground.push_back(std::to_string(i));
  return MeasureSpace::counting(std::move(ground));
}

/// Random positive weights with denominator up to 12 per element, normalized exactly.
inline MeasureSpace random_weighted_space(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::string> ground;
  std::vector<Rational> raw;
  Rational total = 0;
  std::uniform_int_distribution<int> num(1, 9), den(1, 12);
  for (std::size_t i = 0; i < n; ++i) {
    ground.push_back("e" + std::to_string(i));
    raw.emplace_back(num(rng), den(rng));
    total += raw.back();
  }
  for (auto& w : raw) w /= total;
  return MeasureSpace::weighted(std::move(ground), std::move(raw));
}

inline MSet random_set(const MeasureSpace& space, std::mt19937_64& rng, double p = 0.5) {
  std::bernoulli_distribution coin(p);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < space.size(); ++i)
    if (coin(rng)) idx.push_back(i);
  return space.subset_of_indices(idx);
}

inline VariableUniverse make_vars(std::size_t na, std::size_t ns) {
  std::vector<std::string> a, s;
  for (std::size_t i = 0; i < na; ++i) a.push_back("a" + std::to_string(i));
  for (std::size_t j = 0; j < ns; ++j) s.push_back("x" + std::to_string(j));
  return VariableUniverse(std::move(a), std::move(s));
}

inline DataMap random_map(const MeasureSpace& space, const VariableUniverse& vars, std::mt19937_64& rng,
                          double p = 0.5) {
  std::vector<MSet> a, s;
  for (std::size_t i = 0; i < vars.antecedents().size(); ++i) a.push_back(random_set(space, rng, p));
  for (std::size_t j = 0; j < vars.consequents().size(); ++j) s.push_back(random_set(space, rng, p));
  return DataMap(space, vars, std::move(a), std::move(s));
}

}  // namespace seqbar::testing
