#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "seqbar/sequents.hpp"
#include "support.hpp"

using namespace seqbar;
using namespace seqbar::testing;

namespace {

const VariableUniverse kAB_XY({"a", "b"}, {"x", "y"});

const PosetBar* find_bar(const std::vector<PosetBar>& bars, const Sequent& s) {
  for (const auto& b : bars)
    if (b.sequent == s) return &b;
  return nullptr;
}

}  // namespace

TEST_CASE("sequent order") {
  auto u = enumerate_sequents(kAB_XY);
  CHECK(seq_leq(u.make({"a"}, {"x"}), u.make({"a", "b"}, {"x", "y"})));
  auto s = u.make({"b"}, {"y"});
  CHECK(seq_leq(s, s));
  CHECK_FALSE(seq_leq(u.make({"a"}, {"y"}), u.make({"b"}, {"x", "y"})));
}

TEST_CASE("enumeration counts") {
  CHECK(enumerate_sequents(kAB_XY).size() == 16);
  SequentCaps no_empty;
  no_empty.include_empty_gamma = no_empty.include_empty_delta = false;
  CHECK(enumerate_sequents(kAB_XY, no_empty).size() == 9);

  SequentCaps depmap = no_empty;
  depmap.max_gamma = 1;
  CHECK(enumerate_sequents(make_vars(11, 4), depmap).size() == 165);

  SequentCaps tiny;
  tiny.limit = 100;
  CHECK_THROWS_AS(enumerate_sequents(make_vars(6, 2), tiny), LimitError);
  CHECK_THROWS_AS(enumerate_sequents(make_vars(65, 1)), UsageError);
}

TEST_CASE("enumeration is duplicate-free and a linear extension of the order") {
  SequentCaps caps;
  caps.max_gamma = 2;
  auto u = enumerate_sequents(make_vars(4, 3), caps);
  for (std::size_t i = 0; i < u.size(); ++i) {
    CHECK(*u.index_of(u[i]) == i);
    CHECK(u[i].gamma_size() <= 2);
    for (std::size_t j = 0; j < i; ++j) CHECK_FALSE(seq_leq(u[i], u[j]));
  }
}

TEST_CASE("strict predecessors") {
  auto u = enumerate_sequents(kAB_XY);
  auto preds = strict_predecessors(u, u.make({"a"}, {"x"}));
  CHECK(preds == std::vector<Sequent>{u.make({}, {}), u.make({}, {"x"}), u.make({"a"}, {})});
  CHECK(strict_predecessors(u, u.make({}, {})).empty());

  SequentCaps no_empty;
  no_empty.include_empty_gamma = no_empty.include_empty_delta = false;
  auto v = enumerate_sequents(kAB_XY, no_empty);
  // ({a,b} ⊢ x) keeps only sub-sequents with both sides non-empty.
  CHECK(strict_predecessors(v, v.make({"a", "b"}, {"x"})) == std::vector<Sequent>{v.make({"a"}, {"x"}), v.make({"b"}, {"x"})});
  CHECK_THROWS_AS(strict_predecessors(v, v.make({"a"}, {})), UsageError);
}

TEST_CASE("Filtration I births on the worked example") {
  auto m = worked_example();
  auto u = enumerate_sequents(kAB_XY);
  CHECK(birth_time_I(m.space(), m, u.make({"a"}, {"x"})) == Rational(1, 4));
  CHECK(birth_time_I(m.space(), m, u.make({"a", "b"}, {"x"})) == Rational(1, 3));
  CHECK(birth_time_I(m.space(), m, u.make({}, {})) == 1);
  for (const auto& s : u.sequents()) CHECK(birth_time_I(m.space(), m, s) == oracle_birth_I(m, s));
}

TEST_CASE("Filtration I null antecedent meet is born at 0") {
  auto space = counting_space(4);
  DataMap m(space, kAB_XY, {space.subset({"1", "2"}), space.subset({"3", "4"})},
            {space.subset({"1"}), space.subset({"4"})});
  auto u = enumerate_sequents(kAB_XY);
  CHECK(birth_time_I(space, m, u.make({"a", "b"}, {})) == 0);
}

TEST_CASE("Filtration II births on the worked example") {
  auto m = worked_example();
  auto u = enumerate_sequents(kAB_XY);
  CHECK(birth_time_II(m.space(), m, u.make({"a"}, {"x"})) == Rational(1, 5));
  CHECK(birth_time_II(m.space(), m, u.make({"a", "b"}, {"x", "y"})) == 0);
  CHECK(birth_time_II(m.space(), m, u.make({}, {})) == 1);
  auto table = compute_births(u, m, FiltrationKind::II);
  CHECK(table.kind == FiltrationKind::II);
  CHECK(table.digest.size() == 16);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(table[i] == oracle_birth_II(m, u[i]));
}

TEST_CASE("minimal elements on the worked example") {
  auto m = worked_example();
  auto u = enumerate_sequents(kAB_XY);
  auto births = compute_births(u, m, FiltrationKind::II);
  CHECK(min_elements(u, births, 0) == std::vector<Sequent>{u.make({}, {"x", "y"})});
  CHECK(min_elements(u, births, 1) == std::vector<Sequent>{u.make({}, {})});

  // Before the earliest birth the poset is empty.
  auto lifted = births;
  for (auto& b : lifted.births) b = (b + 1) / 2;
  CHECK(min_elements(u, lifted, Rational(1, 4)).empty());
  CHECK_THROWS_AS(min_elements(u, births, Rational(3, 2)), UsageError);
}

TEST_CASE("barcode of the worked example") {
  auto m = worked_example();
  auto u = enumerate_sequents(kAB_XY);
  auto births = compute_births(u, m, FiltrationKind::II);
  auto bars = sequent_barcode(u, births);
  const auto* top = find_bar(bars, u.make({}, {"x", "y"}));
  REQUIRE(top);
  CHECK(top->birth == 0);
  CHECK(top->death == Rational(2, 5));
  CHECK_FALSE(top->closed_at_end);

  // The global minimum is born at 1 and stays minimal: the degenerate closed bar {1}.
  const auto* bottom = find_bar(bars, u.make({}, {}));
  REQUIRE(bottom);
  CHECK(bottom->birth == 1);
  CHECK(bottom->closed_at_end);

  for (const auto& b : bars) {
    CHECK((b.birth < b.death || (b.closed_at_end && b.birth == 1)));
    CHECK((!b.closed_at_end || b.death == 1));
  }
}

TEST_CASE("ties with a predecessor give no bar; a lone sequent gets a closed bar") {
  auto space = counting_space(2);
  VariableUniverse vars({"a"}, {"x"});
  DataMap m(space, vars, {space.full_set()}, {space.full_set()});
  auto u = enumerate_sequents(vars);
  // Births: (∅⊢∅)=1, (∅⊢x)=0, (a⊢∅)=1, (a⊢x)=0. (a⊢x) ties with (∅⊢x).
  auto bars = sequent_barcode(u, compute_births(u, m, FiltrationKind::II));
  CHECK(find_bar(bars, u.make({"a"}, {"x"})) == nullptr);

  SequentCaps only;
  only.include_empty_gamma = only.include_empty_delta = false;
  auto single = enumerate_sequents(vars, only);
  REQUIRE(single.size() == 1);
  auto lone = sequent_barcode(single, compute_births(single, m, FiltrationKind::II));
  REQUIRE(lone.size() == 1);
  CHECK(lone[0].birth == 0);
  CHECK(lone[0].death == 1);
  CHECK(lone[0].closed_at_end);
}

TEST_CASE("filtration properties on random data") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 150; ++trial) {
    auto space = random_weighted_space(1 + trial % 7, rng);
    auto vars = make_vars(1 + trial % 3, 1 + (trial / 3) % 3);
    auto map = random_map(space, vars, rng);
    auto u = enumerate_sequents(vars);
    for (auto kind : {FiltrationKind::I, FiltrationKind::II}) {
      auto births = compute_births(u, map, kind);
      for (std::size_t i = 0; i < u.size(); ++i) {
        CHECK(births[i] >= 0);
        CHECK(births[i] <= 1);
        CHECK(births[i] == (kind == FiltrationKind::I ? oracle_birth_I(map, u[i]) : oracle_birth_II(map, u[i])));
      }
      if (kind == FiltrationKind::II)
        for (std::size_t i = 0; i < u.size(); ++i)
          for (std::size_t j = 0; j < u.size(); ++j)
            if (seq_leq(u[j], u[i])) CHECK(births[i] <= births[j]);
    }
  }
}

TEST_CASE("closed-form barcode equals the Min scan") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    auto space = counting_space(1 + trial % 8);
    auto vars = make_vars(1 + trial % 3, 1 + (trial / 2) % 3);
    SequentCaps caps;
    caps.include_empty_gamma = trial % 4 != 1;
    caps.include_empty_delta = trial % 4 != 2;
    auto u = enumerate_sequents(vars, caps);
    auto map = random_map(space, vars, rng);
    for (auto kind : {FiltrationKind::I, FiltrationKind::II}) {
      auto births = compute_births(u, map, kind);
      auto bars = sequent_barcode(u, births);
      auto scanned = scan_barcode(u, births.births);
      REQUIRE(bars.size() == scanned.size());
      for (const auto& b : bars) {
        auto it = scanned.find(*u.index_of(b.sequent));
        REQUIRE(it != scanned.end());
        CHECK(it->second.contiguous);
        CHECK(it->second.birth == b.birth);
        CHECK(it->second.death == b.death);
        CHECK(it->second.closed_at_end == b.closed_at_end);
      }
    }
  }
}

TEST_CASE("bar ranking") {
  auto u = enumerate_sequents(kAB_XY);
  std::vector<PosetBar> bars{{u.make({"a", "b"}, {"x"}), 0, Rational(1, 2), false},
                             {u.make({"a"}, {"x"}), Rational(1, 5), Rational(7, 10), false},
                             {u.make({"b"}, {"x"}), 0, 1, true}};
  rank_bars(u, bars);
  CHECK(bars[0].sequent == u.make({"b"}, {"x"}));
  CHECK(bars[1].sequent == u.make({"a"}, {"x"}));  // same length as {a,b} but smaller Γ
  CHECK(bars[2].sequent == u.make({"a", "b"}, {"x"}));
}
