#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "seqbar/stability.hpp"
#include "support.hpp"

using namespace seqbar;
using namespace seqbar::testing;

namespace {

const VariableUniverse kAB_XY({"a", "b"}, {"x", "y"});

SequentBarcode one_bar(const Sequent& s, Rational b, Rational d) { return {{s}, {{s, std::move(b), std::move(d), false}}}; }

}  // namespace

TEST_CASE("granularity") {
  auto m = worked_example();
  CHECK(is_eps_granular(m.space(), m, Rational(1, 2)));
  CHECK_FALSE(is_eps_granular(m.space(), m, Rational(3, 5)));
  auto hollow = m.with("y", m.space().empty_set());
  CHECK_FALSE(is_eps_granular(m.space(), hollow, Rational(1, 100)));
  CHECK_THROWS_AS(is_eps_granular(m.space(), m, 0), UsageError);
}

TEST_CASE("delta subfiltration") {
  auto m = worked_example();
  auto u = enumerate_sequents(kAB_XY);
  auto contains = [](const DeltaSubfiltration& f, const Sequent& s) {
    return std::find(f.sequents.begin(), f.sequents.end(), s) != f.sequents.end();
  };
  auto half = delta_subfiltration(m.space(), m, Rational(1, 2), u);
  CHECK(contains(half, u.make({"a", "b"}, {"x"})));
  CHECK(half.sequents.size() == 16);

  // Ratios never exceed 1, so the strict inequality at delta=1 keeps only empty Γ.
  auto one = delta_subfiltration(m.space(), m, 1, u);
  CHECK(one.sequents.size() == 4);
  for (const auto& s : one.sequents) CHECK(s.gamma == 0);

  auto space = counting_space(4);
  DataMap disjoint(space, kAB_XY, {space.subset({"1", "2"}), space.subset({"3", "4"})},
                   {space.subset({"1"}), space.subset({"4"})});
  auto zero = delta_subfiltration(space, disjoint, 0, u);
  CHECK(zero.sequents.size() == 12);  // Γ = {a,b} has an empty meet
  CHECK_FALSE(contains(zero, u.make({"a", "b"}, {})));

  auto degenerate = disjoint.with("a", space.empty_set());
  auto d = delta_subfiltration(space, degenerate, 0, u);
  CHECK(d.degenerate_variables == std::vector<std::string>{"a"});
  CHECK_FALSE(contains(d, u.make({"a"}, {"x"})));
}

TEST_CASE("barcode distance") {
  auto u = enumerate_sequents(kAB_XY);
  auto s = u.make({"a"}, {"x"});
  auto b = one_bar(s, 0, Rational(1, 2));
  CHECK(barcode_dist(b, b) == 0);
  CHECK(barcode_dist(b, one_bar(s, Rational(1, 4), Rational(1, 2))) == Rational(1, 4));
  SequentBarcode absent{{s}, {}};
  CHECK(barcode_dist(one_bar(s, Rational(1, 5), Rational(2, 5)), absent) == Rational(1, 5));
  CHECK(barcode_dist(absent, one_bar(s, Rational(1, 5), Rational(2, 5))) == Rational(1, 5));
  // Disjoint intervals add.
  CHECK(barcode_dist(one_bar(s, 0, Rational(1, 5)), one_bar(s, Rational(1, 2), 1)) == Rational(7, 10));
  CHECK_THROWS_AS(barcode_dist(b, SequentBarcode{{u.make({}, {})}, {}}), UsageError);
}

TEST_CASE("certificate on identical maps") {
  auto m = worked_example();
  auto u = enumerate_sequents(kAB_XY);
  auto r = stability_certificate(m.space(), m, m, Rational(1, 2), Rational(1, 2), u);
  CHECK(r.satisfied);
  CHECK(r.data_distance == 0);
  CHECK(r.barcode_distance == 0);
  for (const auto& d : r.per_sequent) CHECK(d.deviation == 0);
  CHECK(r.lemma_constant == Rational(2 * 4) / Rational(1, 4));
}

TEST_CASE("certificate on a one-element perturbation") {
  auto m = worked_example();
  auto moved = m.with("x", m.space().subset({"1", "2"}));
  auto u = enumerate_sequents(kAB_XY);
  const Rational eps(1, 5), delta(1, 2);
  auto r = stability_certificate(m.space(), m, moved, eps, delta, u);
  CHECK(r.data_distance == Rational(1, 5));
  CHECK(r.satisfied);
  // Recompute every deviation independently from the two maps.
  for (const auto& d : r.per_sequent) {
    Rational expected = birth_time_I(m.space(), m, d.sequent) - birth_time_I(m.space(), moved, d.sequent);
    if (expected < 0) expected = -expected;
    CHECK(d.deviation == expected);
    CHECK(d.deviation <= r.lemma_constant / 5);
  }
}

TEST_CASE("certificate hypothesis violations") {
  auto m = worked_example();
  auto u = enumerate_sequents(kAB_XY);
  auto hollow = m.with("y", m.space().empty_set());
  CHECK_THROWS_AS(stability_certificate(m.space(), m, hollow, Rational(1, 10), Rational(1, 2), u), HypothesisError);

  // Shrinking b to {4,5} drops {a,b} from the 1/2-subfiltration.
  auto thin = m.with("b", m.space().subset({"4", "5"}));
  try {
    stability_certificate(m.space(), m, thin, Rational(1, 10), Rational(1, 2), u);
    FAIL("expected a hypothesis error");
  } catch (const HypothesisError& e) {
    CHECK(e.hypothesis() == "equal-delta-sets");
  }
}

TEST_CASE("stability bound holds on random pairs") {
  std::mt19937_64 rng(31337);
  const Rational eps(1, 10), delta(1, 4);
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 150; ++trial) {
    auto space = counting_space(6 + trial % 6);
    auto vars = make_vars(1 + trial % 3, 1 + trial % 2);
    auto m1 = random_map(space, vars, rng, 0.6);
    auto m2 = m1;
    std::uniform_int_distribution<std::size_t> pick(0, space.size() - 1);
    const auto& names = vars.antecedents();
    Bits flipped = m1.antecedent(0).bits();
    flipped.flip(pick(rng));
    m2 = m2.with(names[0], space.from_bits(flipped));
    if (!is_eps_granular(space, m1, eps) || !is_eps_granular(space, m2, eps)) continue;
    auto u = enumerate_sequents(vars);
    if (delta_subfiltration(space, m1, delta, u).sequents != delta_subfiltration(space, m2, delta, u).sequents)
      continue;
    auto r = stability_certificate(space, m1, m2, eps, delta, u);
    CHECK(r.per_sequent_ok);
    CHECK(r.summed_ok);
    ++checked;
  }
  CHECK(checked >= 100);
}

TEST_CASE("barcode distance vanishes along a shrinking perturbation") {
  // Geometric weights 1/2, 1/4, ..., with the remainder on the last element; flipping
  // element k moves a set by mass 2^-(k+1).
  const std::size_t n = 14;
  std::vector<std::string> ground;
  std::vector<Rational> w;
  Rational rest = 1;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    ground.push_back("g" + std::to_string(i));
    w.emplace_back(1, 1LL << (i + 1));
    rest -= w.back();
  }
  ground.push_back("tail");
  w.push_back(rest);
  auto space = MeasureSpace::weighted(ground, w);
  VariableUniverse vars({"a"}, {"x"});
  DataMap base(space, vars, {space.subset_of_indices({0, 2, 4, 6, 8, 10, 12})},
               {space.subset_of_indices({0, 1, 4, 5, 8, 9, 12, 13})});
  auto u = enumerate_sequents(vars);
  const Rational eps(1, 10), delta(1, 10);

  Rational previous_bound = 1'000'000;
  Rational last_distance = 1;
  for (std::size_t k = 6; k < n - 1; ++k) {
    Bits b = base.consequent(0).bits();
    b.flip(k);
    auto perturbed = base.with("x", space.from_bits(b));
    auto r = stability_certificate(space, base, perturbed, eps, delta, u);
    CHECK(r.data_distance == Rational(1, 1LL << (k + 1)));
    const Rational bound = r.theorem_constant * r.data_distance;
    CHECK(r.barcode_distance <= bound);
    CHECK(bound < previous_bound);
    previous_bound = bound;
    last_distance = r.barcode_distance;
  }
  CHECK(last_distance < Rational(1, 1000));
}
