#include <catch2/catch_amalgamated.hpp>

#include "structura/classify.hpp"
#include "structura/constructors.hpp"
#include "structura/coupling.hpp"
#include "structura/quotient.hpp"
#include "structura/search.hpp"

using namespace structura;

namespace {

/// Two-point datum {r, a}: a carried onto r, full-square relation, weights
/// (2, 0), eta = 1/2, E0 = 2. Admissible, with a genuinely non-identity map.
Datum fiber_pair() {
  auto u = Universe::make({"r", "a"});
  Subset r = Subset::of_labels(u, {"r"});
  Retraction pi(u, r, {0, 0});
  return Datum(u, Charge(u, {Rational(2), Rational(0)}), r, r.complement(), pi,
               Relation::total(u), Rational(2), Rational(1, 2));
}

}  // namespace

TEST_CASE("fibers partition the universe over R") {
  Datum d = models::eta_model(Rational(1, 2));
  auto fs = quotient::fibers(d);
  REQUIRE(fs.size() == 2);
  CHECK(fs[0].first == d.universe()->index_of("r0"));
  CHECK(fs[0].second == Subset::of_labels(d.universe(), {"r0", "i"}));
  CHECK(fs[1].second == Subset::of_labels(d.universe(), {"r1"}));

  Subset un = fs[0].second.unite(fs[1].second);
  CHECK(un == Subset::all(d.universe()));
  CHECK(fs[0].second.disjoint_from(fs[1].second));

  // A non-retraction map has no well-defined fiber structure here.
  auto not_I = models::separating_model(models::SeparatingKind::not_I);
  CHECK_THROWS_AS(quotient::fibers(not_I.datum), PreconditionError);
}

TEST_CASE("fiber slack carries no mass on admissible data") {
  for (Datum d : {models::eta_model(Rational(2, 3)), fiber_pair(),
                  models::class_model({3, 1}, {1, 1})}) {
    auto rep = quotient::check_fiber_annihilation(d);
    CHECK(rep.holds);
    CHECK(rep.off_core_mass.is_zero());
    for (const auto& e : rep.entries) CHECK(e.slack_mass.is_zero());
  }

  auto not_III = models::separating_model(models::SeparatingKind::not_III);
  auto rep = quotient::check_fiber_annihilation(not_III.datum);
  CHECK_FALSE(rep.holds);
  CHECK(rep.violating_mass == Rational(1));
  CHECK(rep.witness.describe(*not_III.datum.universe()) == "{i}");
  CHECK(rep.off_core_mass == Rational(1));
}

TEST_CASE("restriction produces the identity-retraction core") {
  Datum d = models::eta_model(Rational(1, 2));
  Datum core = quotient::restrict_to_core(d);
  CHECK(core.universe()->labels() == std::vector<std::string>{"r0", "r1"});
  CHECK(core.mu().weights() == std::vector<Rational>{2, 2});
  CHECK(core.R() == Subset::all(core.universe()));
  CHECK(core.I().empty());
  CHECK(core.pi().is_identity());
  CHECK(core.G() == Relation::diagonal(core.universe()));
  CHECK(core.E0() == Rational(4));
  CHECK(core.eta() == Rational(1, 2));
  CHECK(axioms::check_admissible(core).admissible);

  // Restricting a core is the identity.
  Datum again = quotient::restrict_to_core(core);
  CHECK(again == core);
}

TEST_CASE("restriction requires a massive core") {
  // All the mass sits outside R: no positive budget fits the core.
  auto u = Universe::make({"r", "x"});
  Subset r = Subset::of_labels(u, {"r"});
  Datum d(u, Charge(u, {Rational(0), Rational(1)}), r, r.complement(),
          Retraction(u, r, {0, 0}), Relation::diagonal(u), Rational(1), Rational(0));
  CHECK_THROWS_AS(quotient::restrict_to_core(d), DomainError);
}

TEST_CASE("factorization holds on admissible data with general retractions") {
  std::vector<Datum> data = {models::eta_model(Rational(0)),
                             models::eta_model(Rational(1, 2)),
                             fiber_pair(),
                             models::class_model({2, 3}, {1, 1}),
                             models::countable_truncation(
                                 models::diagonal_finite_model(2, 1, {1, 1}), 4)};
  for (const Datum& d : data) {
    auto rep = quotient::check_factorization(d, axioms::Mode::exhaustive);
    CHECK(rep.load_reduction.applicable);
    CHECK(rep.load_reduction.verdict.holds);
    CHECK(rep.law_equivalence.applicable);
    CHECK(rep.law_equivalence.verdict.holds);
    CHECK(rep.admissibility_equivalence.applicable);
    CHECK(rep.admissibility_equivalence.verdict.holds);
    CHECK(rep.note.empty());
  }
}

TEST_CASE("factorization names its missing hypotheses") {
  // Invariance failure: parts (i)-(iii) all need law III(b); the report
  // records that the core is admissible while the datum is not.
  auto not_III = models::separating_model(models::SeparatingKind::not_III);
  auto rep = quotient::check_factorization(not_III.datum);
  CHECK_FALSE(rep.load_reduction.applicable);
  CHECK(rep.load_reduction.missing == "law III(b)");
  CHECK_FALSE(rep.admissibility_equivalence.applicable);
  CHECK(rep.note ==
        "law III(b) is essential here: the core is admissible while the datum is not admissible");

  // The core of the invariance violator is genuinely admissible.
  Datum core = quotient::restrict_to_core(not_III.datum);
  CHECK(axioms::check_admissible(core).admissible);
  CHECK_FALSE(axioms::check_admissible(not_III.datum).admissible);

  // Untiled universe: parts (i)-(ii) fine, part (iii) names the tiling.
  auto u = Universe::make({"r", "x"});
  Subset r = Subset::of_labels(u, {"r"});
  Datum untiled(u, Charge(u, {Rational(1), Rational(0)}), r, Subset::none(u),
                Retraction(u, r, {0, 0}), Relation::diagonal(u), Rational(1), Rational(0));
  auto urep = quotient::check_factorization(untiled);
  CHECK(urep.load_reduction.applicable);
  CHECK(urep.load_reduction.verdict.holds);
  CHECK(urep.law_equivalence.applicable);
  CHECK_FALSE(urep.admissibility_equivalence.applicable);
  CHECK(urep.admissibility_equivalence.missing == "R and I must tile the universe");

  // eta = 1 is out of scope entirely.
  auto u1 = Universe::make({"a"});
  Datum at_one(u1, Charge(u1, {Rational(1)}), Subset::all(u1), Subset::none(u1),
               Retraction::identity(u1, Subset::all(u1)), Relation::diagonal(u1), Rational(1),
               Rational(1));
  CHECK_THROWS_AS(quotient::check_factorization(at_one), DomainError);
}

TEST_CASE("factorization across padded variants") {
  for (auto mode : {search::PadRelation::diagonal, search::PadRelation::pullback}) {
    for (const Rational& eta : {Rational(0), Rational(1, 2)}) {
      Datum core = models::total_relation_model(eta);
      Datum padded = search::pad_fibers(core, {2, 1}, mode);
      auto rep = quotient::check_factorization(padded, axioms::Mode::exhaustive);
      CHECK(rep.load_reduction.applicable);
      CHECK(rep.load_reduction.verdict.holds);
      CHECK(rep.law_equivalence.verdict.holds);
      CHECK(rep.admissibility_equivalence.verdict.holds);

      // The padded datum's core is the one we started from.
      CHECK(quotient::restrict_to_core(padded) == core);
    }
  }
}

TEST_CASE("closed-form load routes through the core's blocks") {
  Datum d = fiber_pair();
  Subset all = Subset::all(d.universe());
  CHECK(quotient::curvature_load_closed_form(d, all) == Rational(4));
  CHECK(quotient::curvature_load_closed_form(d, Subset::of_labels(d.universe(), {"r"})) ==
        Rational(4));
  CHECK(quotient::curvature_load_closed_form(d, Subset::of_labels(d.universe(), {"a"})) ==
        Rational(0));

  Datum em = models::eta_model(Rational(1, 2));
  for (std::uint64_t bits = 0; bits < 8; ++bits) {
    Subset b = Subset::of_bits(em.universe(), bits);
    CHECK(quotient::curvature_load_closed_form(em, b) == coupling::curvature_load(em, b));
  }

  auto not_c = models::separating_model(models::SeparatingKind::not_c);
  CHECK_THROWS_AS(quotient::curvature_load_closed_form(not_c.datum, Subset::all(
                      not_c.datum.universe())),
                  PreconditionError);
}
