#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "structura/axioms.hpp"
#include "structura/constructors.hpp"
#include "structura/coupling.hpp"

using namespace structura;
using axioms::Mode;

namespace {

/// Random datum generator spanning admissible and broken shapes alike.
/// Universes of 2..5 points, weights from a small nonnegative grid, a random
/// reflexive-symmetric relation, a random retained set with a sink map, and
/// eta in {0, 1/3, 1/2}.
Datum random_datum(std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> size_dist(2, 5);
  std::size_t n = size_dist(rng);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  auto u = Universe::make(labels);

  const Rational grid[] = {Rational(0), Rational(1, 2), Rational(1), Rational(2)};
  std::vector<Rational> w;
  for (std::size_t i = 0; i < n; ++i) w.push_back(grid[rng() % 4]);

  std::vector<bool> r_mask(n, false);
  r_mask[rng() % n] = true;  // at least one retained point
  for (std::size_t i = 0; i < n; ++i)
    if (rng() % 2 == 0) r_mask[i] = true;
  Subset r(u, r_mask);
  auto retained = r.members();

  std::vector<std::size_t> pi(n);
  for (std::size_t i = 0; i < n; ++i)
    pi[i] = r.contains(i) ? i : retained[rng() % retained.size()];

  Relation g = Relation::diagonal(u);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (rng() % 3 == 0) {
        g.set(a, b, true);
        g.set(b, a, true);
      }

  const Rational etas[] = {Rational(0), Rational(1, 3), Rational(1, 2)};
  Charge mu(u, w);
  Rational total = mu.total();
  Rational e0 = total.is_positive() ? total : Rational(1);
  return Datum(u, mu, r, r.complement(), Retraction(u, r, pi), g, e0, etas[rng() % 3]);
}

}  // namespace

TEST_CASE("each separating model fails exactly its designated law") {
  auto ms = models::all_separating_models();
  REQUIRE(ms.size() == 6);
  CHECK(ms[0].name == "not_I");
  CHECK(ms[1].name == "not_II");
  CHECK(ms[2].name == "not_III");
  CHECK(ms[3].name == "not_a");
  CHECK(ms[4].name == "not_b");
  CHECK(ms[5].name == "not_c");

  for (const auto& m : ms) {
    INFO("model: " << m.name);
    auto rep = axioms::check_admissible(m.datum, Mode::exhaustive);
    CHECK(rep.pattern() == m.expected);
    CHECK_FALSE(rep.admissible);
  }
}

TEST_CASE("separating witnesses name the exact violation") {
  auto not_I = models::separating_model(models::SeparatingKind::not_I);
  Verdict v1 = axioms::check_axiom_I(not_I.datum);
  CHECK_FALSE(v1.holds);
  CHECK(v1.witness.describe(*not_I.datum.universe()) == "a");

  auto not_II = models::separating_model(models::SeparatingKind::not_II);
  Verdict v2 = axioms::check_axiom_II(not_II.datum);
  CHECK_FALSE(v2.holds);
  CHECK(v2.witness.describe(*not_II.datum.universe()) == "(a, c)");

  auto not_III = models::separating_model(models::SeparatingKind::not_III);
  Verdict v3 = axioms::check_axiom_III_b(not_III.datum);
  CHECK_FALSE(v3.holds);
  CHECK(v3.witness.describe(*not_III.datum.universe()) == "{r}");
  CHECK(v3.lhs == Rational(2));  // preimage {r, i} carries both units
  CHECK(v3.rhs == Rational(1));

  auto not_a = models::separating_model(models::SeparatingKind::not_a);
  Verdict v4 = axioms::check_axiom_III_a(not_a.datum);
  CHECK_FALSE(v4.holds);
  CHECK(v4.lhs == Rational(0));
  CHECK(v4.rhs == Rational(1));

  auto not_c = models::separating_model(models::SeparatingKind::not_c);
  Verdict v5 = axioms::check_axiom_III_c(not_c.datum);
  CHECK_FALSE(v5.holds);
  CHECK(v5.witness.describe(*not_c.datum.universe()) == "{a}");
  CHECK(v5.lhs == Rational(1));
  CHECK(v5.rhs == Rational(3, 2));
}

TEST_CASE("constructor families are admissible") {
  const Rational etas[] = {Rational(0), Rational(1, 3), Rational(1, 2), Rational(2, 3),
                           Rational(9, 10)};
  std::vector<Datum> suite;
  suite.push_back(models::diagonal_finite_model(2, 1, {1, 1}));
  suite.push_back(models::diagonal_finite_model(3, 2, {1, 0, 1}));
  for (const Rational& eta : etas) {
    suite.push_back(models::eta_model(eta));
    suite.push_back(models::total_relation_model(eta));
    Rational w = Rational(1) / (Rational(1) - eta);
    suite.push_back(models::block_family_model({2}, {w / 2, w / 2}, eta));
  }
  suite.push_back(models::class_model({2, 3}, {1, 1}));
  suite.push_back(models::class_model({1}, {1}));
  suite.push_back(models::countable_truncation(models::diagonal_finite_model(2, 1, {1, 1}), 5));

  for (const Datum& d : suite) {
    auto rep = axioms::check_admissible(d);
    INFO("datum of size " << d.size() << " at eta " << d.eta().str());
    CHECK(rep.admissible);
  }
}

TEST_CASE("conservation verdict reports both sides even on a pass") {
  Datum d = models::eta_model(Rational(1, 2));
  Verdict v = axioms::check_axiom_III_a(d);
  CHECK(v.holds);
  CHECK(v.lhs == Rational(4));
  CHECK(v.rhs == Rational(4));
}

TEST_CASE("coupling law verdict on the three-point family") {
  Datum d = models::eta_model(Rational(1, 2));
  Verdict v = axioms::check_axiom_III_c(d, Mode::exhaustive);
  CHECK(v.holds);

  // Breaking one weight breaks the law with exact values: raising the inert
  // point's mass to 1 adds cross terms nowhere balanced by the right side.
  auto u = d.universe();
  Charge mu(u, {Rational(2), Rational(2), Rational(1)});
  Datum broken(u, mu, d.R(), d.I(), d.pi(), d.G(), Rational(5), d.eta());
  Verdict bv = axioms::check_axiom_III_c(broken);
  CHECK_FALSE(bv.holds);
}

TEST_CASE("singleton and exhaustive modes agree everywhere") {
  std::vector<Datum> data;
  for (const auto& m : models::all_separating_models()) data.push_back(m.datum);
  data.push_back(models::eta_model(Rational(1, 2)));
  data.push_back(models::total_relation_model(Rational(0)));
  data.push_back(models::class_model({2, 2}, {1, 0}));
  std::mt19937 rng(20260819);
  for (int trial = 0; trial < 120; ++trial) data.push_back(random_datum(rng));

  for (const Datum& d : data) {
    Verdict b1 = axioms::check_axiom_III_b(d, Mode::singletons);
    Verdict b2 = axioms::check_axiom_III_b(d, Mode::exhaustive);
    CHECK(b1.holds == b2.holds);
    Verdict c1 = axioms::check_axiom_III_c(d, Mode::singletons);
    Verdict c2 = axioms::check_axiom_III_c(d, Mode::exhaustive);
    CHECK(c1.holds == c2.holds);
    auto r1 = axioms::check_admissible(d, Mode::singletons);
    auto r2 = axioms::check_admissible(d, Mode::exhaustive);
    CHECK(r1.admissible == r2.admissible);
    CHECK(r1.pattern() == r2.pattern());
  }
}

TEST_CASE("failed verdicts re-evaluate to their reported values") {
  // A failing witness is not just a label: recomputing the two sides on the
  // reported subset must reproduce lhs and rhs exactly.
  std::mt19937 rng(424242);
  for (int trial = 0; trial < 150; ++trial) {
    Datum d = random_datum(rng);
    Verdict v = axioms::check_axiom_III_c(d);
    if (v.holds) continue;
    REQUIRE(v.witness.kind == Witness::Kind::subset);
    Subset b(d.universe(), [&] {
      std::vector<bool> mask(d.size(), false);
      for (std::size_t i : v.witness.members) mask[i] = true;
      return mask;
    }());
    Rational lhs = coupling::curvature_load(d, b);
    Subset pre = d.pi().preimage(b.intersect(d.R()));
    Rational rhs = d.mu().eval(b) + d.eta() * coupling::curvature_load(d, pre);
    CHECK(v.lhs == lhs);
    CHECK(v.rhs == rhs);
  }
}

TEST_CASE("exhaustive mode is budget-guarded") {
  // 17 retained points exceed the subset-sweep cap.
  std::size_t n = 17;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  auto u = Universe::make(labels);
  std::vector<Rational> w(n, Rational(1));
  Subset all = Subset::all(u);
  Datum d(u, Charge(u, w), all, Subset::none(u), Retraction::identity(u, all),
          Relation::diagonal(u), Rational(static_cast<long long>(n)), Rational(0));
  CHECK_THROWS_AS(axioms::check_axiom_III_b(d, Mode::exhaustive), BudgetError);
  CHECK_THROWS_AS(axioms::check_axiom_III_c(d, Mode::exhaustive), BudgetError);
  CHECK(axioms::check_axiom_III_b(d, Mode::singletons).holds);
}

TEST_CASE("derived consequences hold on admissible data") {
  for (Datum d : {models::eta_model(Rational(1, 2)), models::class_model({2, 3}, {1, 1}),
                  models::total_relation_model(Rational(1, 3))}) {
    auto checks = axioms::derived_consequence_checks(d);
    REQUIRE(checks.size() == 5);
    for (const Verdict& v : checks) {
      INFO(v.note);
      CHECK(v.holds);
    }
  }
}

TEST_CASE("derived consequences require admissibility") {
  auto broken = models::separating_model(models::SeparatingKind::not_III);
  CHECK_THROWS_AS(axioms::derived_consequence_checks(broken.datum), PreconditionError);
}

TEST_CASE("inert mass vanishes whenever R and I tile the universe") {
  // Sweep of admissible data whose R and I cover everything: law III(b)
  // forces the complement of R to carry zero mass.
  std::vector<Datum> data = {models::eta_model(Rational(2, 3)),
                             models::class_model({3, 2, 1}, {1, 0, 1}),
                             models::diagonal_finite_model(2, 3, {1, 1})};
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Datum d = random_datum(rng);
    if (axioms::check_admissible(d).admissible) data.push_back(d);
  }
  for (const Datum& d : data) {
    REQUIRE(d.R().unite(d.I()) == Subset::all(d.universe()));
    if (!axioms::check_admissible(d).admissible) continue;
    CHECK(d.mu().eval(d.I()).is_zero());
    CHECK(d.mu().eval(d.R()) == d.total_mass());
  }
}
