#include <catch2/catch_amalgamated.hpp>

#include "structura/constructors.hpp"
#include "structura/coupling.hpp"
#include "structura/morphisms.hpp"
#include "structura/quotient.hpp"
#include "structura/search.hpp"

using namespace structura;
using morphisms::Morphism;
using morphisms::TransportMode;

namespace {

/// Identity-retraction datum from raw parts with E0 = total mass.
Datum identity_datum(const UniversePtr& u, std::vector<Rational> w, const Relation& g,
                     const Rational& eta, const Rational& e0) {
  Subset all = Subset::all(u);
  return Datum(u, Charge(u, std::move(w)), all, Subset::none(u),
               Retraction::identity(u, all), g, e0, eta);
}

/// The collapse chain A -> B -> C: two 2-point classes onto their
/// representatives, then both representatives onto one.
struct Chain {
  Datum a = models::class_model({2, 2}, {1, 0});
  Datum b = models::class_model({1, 1}, {1, 0});
  Datum c = models::class_model({1}, {1});
  Morphism ab{a, b, {0, 0, 1, 1}};
  Morphism bc{b, c, {0, 0}};
};

}  // namespace

TEST_CASE("morphism images, preimages, and pushforward") {
  Chain ch;
  CHECK(ch.ab.image_of(Subset::of_labels(ch.a.universe(), {"r0", "c0_1"})) ==
        Subset::of_labels(ch.b.universe(), {"r0"}));
  CHECK(ch.ab.preimage_of(Subset::of_labels(ch.b.universe(), {"r0"})) ==
        Subset::of_labels(ch.a.universe(), {"r0", "c0_1"}));
  CHECK(ch.ab.surjective());
  CHECK(ch.ab.pushforward_weights() == std::vector<Rational>{1, 0});

  CHECK_THROWS_AS(Morphism(ch.a, ch.b, {0, 0, 1}), InvariantError);      // size
  CHECK_THROWS_AS(Morphism(ch.a, ch.b, {0, 0, 1, 7}), InvariantError);   // range
}

TEST_CASE("collapse chain passes every clause") {
  Chain ch;
  for (const Morphism* phi : {&ch.ab, &ch.bc}) {
    auto rep = morphisms::check_morphism(*phi);
    CHECK(rep.m1.holds);
    CHECK(rep.m2.holds);
    CHECK(rep.m3.holds);
    CHECK(rep.m4.holds);
    CHECK(rep.holds);
    CHECK(rep.maps_R_into_R.holds);
    CHECK(rep.e0_bound.holds);
    CHECK(rep.e0_bound.note == "equality");
  }
  auto composite = morphisms::compose(ch.bc, ch.ab);
  CHECK(composite.map == std::vector<std::size_t>{0, 0, 0, 0});
  CHECK(morphisms::check_morphism(composite).holds);
}

TEST_CASE("category laws: identity and associativity") {
  Chain ch;
  auto id_a = morphisms::identity(ch.a);
  auto id_b = morphisms::identity(ch.b);
  auto id_c = morphisms::identity(ch.c);
  CHECK(morphisms::check_morphism(id_a).holds);

  CHECK(morphisms::compose(ch.ab, id_a).map == ch.ab.map);
  CHECK(morphisms::compose(id_b, ch.ab).map == ch.ab.map);

  auto left = morphisms::compose(id_c, morphisms::compose(ch.bc, ch.ab));
  auto right = morphisms::compose(morphisms::compose(id_c, ch.bc), ch.ab);
  CHECK(left.map == right.map);
  CHECK(left.source == right.source);
  CHECK(left.target == right.target);

  // Composing mismatched endpoints is rejected.
  CHECK_THROWS_AS(morphisms::compose(ch.ab, ch.ab), PreconditionError);
}

TEST_CASE("eta mismatch is rejected up front") {
  Datum d0 = models::total_relation_model(Rational(0));
  Datum d1 = models::total_relation_model(Rational(1, 2));
  Morphism phi(d0, d1, {0, 1});
  CHECK_THROWS_AS(morphisms::check_morphism(phi), PreconditionError);
  CHECK_THROWS_AS(morphisms::transport_coupling(phi, TransportMode::inclusion),
                  PreconditionError);
}

TEST_CASE("clause failures carry exact witnesses") {
  // Retraction mismatch: source sinks a onto r, target keeps a fixed.
  {
    auto us = Universe::make({"r", "a"});
    Subset r = Subset::of_labels(us, {"r"});
    Datum src(us, Charge(us, {Rational(1), Rational(0)}), r, r.complement(),
              Retraction(us, r, {0, 0}), Relation::diagonal(us), Rational(1), Rational(0));
    auto ut = Universe::make({"r", "a"});
    Datum dst = identity_datum(ut, {Rational(1), Rational(0)}, Relation::diagonal(ut),
                               Rational(0), Rational(1));
    Morphism phi(src, dst, {0, 1});
    auto rep = morphisms::check_morphism(phi);
    CHECK_FALSE(rep.m2.holds);
    CHECK(rep.m2.witness.describe(*src.universe()) == "a");
    CHECK(rep.m3.holds);
    CHECK(rep.m4.holds);
    CHECK_FALSE(rep.holds);
  }

  // Related pair mapped outside the target relation.
  {
    Datum src = models::total_relation_model(Rational(1, 2));
    auto ut = Universe::make({"r0", "r1"});
    Datum dst = identity_datum(ut, {Rational(1), Rational(1)}, Relation::diagonal(ut),
                               Rational(1, 2), Rational(2));
    Morphism phi(src, dst, {0, 1});
    auto rep = morphisms::check_morphism(phi);
    CHECK_FALSE(rep.m3.holds);
    CHECK(rep.m3.witness.describe(*src.universe()) == "(r0, r1)");
  }

  // Pushforward mismatch onto a zero-mass target.
  {
    Datum src = models::diagonal_finite_model(1, 0, {1});
    auto not_a = models::separating_model(models::SeparatingKind::not_a);
    Morphism phi(src, not_a.datum, {0});
    auto rep = morphisms::check_morphism(phi);
    CHECK_FALSE(rep.m4.holds);
    CHECK(rep.m4.witness.describe(*not_a.datum.universe()) == "r");
    CHECK(rep.m4.lhs == Rational(1));
    CHECK(rep.m4.rhs == Rational(0));
  }

  // Retained points leaving the target's retained set.
  {
    auto us = Universe::make({"r", "a"});
    Subset rs = Subset::of_labels(us, {"r"});
    Datum src(us, Charge(us, {Rational(1), Rational(0)}), rs, rs.complement(),
              Retraction(us, rs, {0, 0}), Relation::diagonal(us), Rational(1), Rational(0));
    auto ut = Universe::make({"q", "s"});
    Subset rt = Subset::of_labels(ut, {"s"});
    Datum dst(ut, Charge(ut, {Rational(1), Rational(0)}), rt, rt.complement(),
              Retraction(ut, rt, {1, 1}), Relation::diagonal(ut), Rational(1), Rational(0));
    Morphism phi(src, dst, {0, 0});
    auto rep = morphisms::check_morphism(phi);
    CHECK_FALSE(rep.maps_R_into_R.holds);
    CHECK(rep.maps_R_into_R.witness.describe(*ut) == "{q}");
  }

  // Target budget exceeding the source mass.
  {
    Datum src = models::diagonal_finite_model(1, 0, {1});
    auto ut = Universe::make({"r0"});
    Datum dst = identity_datum(ut, {Rational(1)}, Relation::diagonal(ut), Rational(0),
                               Rational(2));
    Morphism phi(src, dst, {0});
    auto rep = morphisms::check_morphism(phi);
    CHECK_FALSE(rep.e0_bound.holds);
    CHECK(rep.e0_bound.lhs == Rational(2));
    CHECK(rep.e0_bound.rhs == Rational(1));
  }
}

TEST_CASE("atomic pushforward clause matches the exhaustive sweep") {
  Chain ch;
  std::vector<Morphism> sample = {ch.ab, ch.bc, morphisms::compose(ch.bc, ch.ab),
                                  morphisms::identity(ch.a)};
  // A deliberately broken one.
  Datum src = models::diagonal_finite_model(1, 0, {1});
  auto not_a = models::separating_model(models::SeparatingKind::not_a);
  sample.emplace_back(src, not_a.datum, std::vector<std::size_t>{0});

  for (const Morphism& phi : sample) {
    CHECK(morphisms::check_morphism(phi).m4.holds ==
          morphisms::check_m4_exhaustive(phi).holds);
  }

  // The sweep is budget-guarded at 17 target points.
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < 17; ++i) labels.push_back("x" + std::to_string(i));
  auto u = Universe::make(labels);
  Datum big = identity_datum(u, std::vector<Rational>(17, Rational(1)),
                             Relation::diagonal(u), Rational(0), Rational(17));
  CHECK_THROWS_AS(morphisms::check_m4_exhaustive(morphisms::identity(big)), BudgetError);
}

TEST_CASE("inclusion transport bounds the target load") {
  // Equality case: splitting one 2-block across a 3-point target.
  Datum src = models::total_relation_model(Rational(1, 2));
  auto ut = Universe::make({"a0", "a1", "b"});
  Relation g(ut);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) g.set(a, b, true);
  g.set(2, 2, true);
  Datum dst = identity_datum(ut, {Rational(1), Rational(1), Rational(0)}, g, Rational(1, 2),
                             Rational(2));
  Morphism phi(src, dst, {0, 1});
  CHECK(morphisms::check_morphism(phi).holds);

  auto rep = morphisms::transport_coupling(phi, TransportMode::inclusion);
  CHECK(rep.preconditions_hold);
  CHECK(rep.conclusion.holds);
  // Per-atom equality in this instance.
  CHECK(coupling::curvature_load(dst, Subset::of_labels(ut, {"a0"})) ==
        coupling::curvature_load(src, Subset::of_labels(src.universe(), {"r0"})));

  // Exact mode needs surjectivity: the uncovered point is named.
  auto exact = morphisms::transport_coupling(phi, TransportMode::exact);
  CHECK_FALSE(exact.preconditions_hold);
  CHECK(exact.precondition_note == "map is not surjective");
  CHECK(exact.precondition_witness.describe(*ut) == "b");
}

TEST_CASE("inclusion transport with a strictly smaller target relation") {
  Datum src = models::total_relation_model(Rational(1, 2));
  auto ut = Universe::make({"r0", "r1"});
  Datum dst = identity_datum(ut, {Rational(1), Rational(1)}, Relation::diagonal(ut),
                             Rational(1, 2), Rational(2));
  Morphism phi(src, dst, {0, 1});

  auto rep = morphisms::transport_coupling(phi, TransportMode::inclusion);
  CHECK(rep.preconditions_hold);
  CHECK(rep.conclusion.holds);
  // Strict drop: the diagonal target halves each atom's load.
  CHECK(coupling::curvature_load(dst, Subset::of_labels(ut, {"r0"})) == Rational(1));
  CHECK(coupling::curvature_load(src, Subset::of_labels(src.universe(), {"r0"})) ==
        Rational(2));

  // Exact mode rejects the relation mismatch with the first differing pair.
  auto exact = morphisms::transport_coupling(phi, TransportMode::exact);
  CHECK_FALSE(exact.preconditions_hold);
  CHECK(exact.precondition_note ==
        "pullback of the target relation differs from the source relation");
  CHECK(exact.precondition_witness.describe(*src.universe()) == "(r0, r1)");
}

TEST_CASE("inclusion transport fails when the pullback leaves the source relation") {
  // Source diagonal, target total: the pullback strictly exceeds G_src.
  auto us = Universe::make({"r0", "r1"});
  Datum src = identity_datum(us, {Rational(2), Rational(0)}, Relation::diagonal(us),
                             Rational(1, 2), Rational(2));
  REQUIRE(axioms::check_axiom_III_c(src).holds);
  auto ut = Universe::make({"r0", "r1"});
  Datum dst = identity_datum(ut, {Rational(2), Rational(0)}, Relation::total(ut),
                             Rational(1, 2), Rational(2));
  Morphism phi(src, dst, {0, 1});
  auto rep = morphisms::transport_coupling(phi, TransportMode::inclusion);
  CHECK_FALSE(rep.preconditions_hold);
  CHECK(rep.precondition_note == "pullback of the target relation leaves the source relation");
}

TEST_CASE("inclusion transport can reject the conclusion itself") {
  // Heavier target over the same relation: the inequality flips.
  Datum src = models::total_relation_model(Rational(1, 2));
  auto ut = Universe::make({"r0", "r1"});
  Datum dst = identity_datum(ut, {Rational(2), Rational(2)}, Relation::total(ut),
                             Rational(1, 2), Rational(4));
  Morphism phi(src, dst, {0, 1});
  auto rep = morphisms::transport_coupling(phi, TransportMode::inclusion);
  CHECK(rep.preconditions_hold);
  CHECK_FALSE(rep.conclusion.holds);
  CHECK(rep.conclusion.lhs == Rational(8));
  CHECK(rep.conclusion.rhs == Rational(2));
}

TEST_CASE("exact transport through a padded fiber collapse") {
  for (const Rational& eta : {Rational(0), Rational(1, 2), Rational(2, 3)}) {
    Datum core = models::total_relation_model(eta);
    Datum padded = search::pad_fibers(core, {1, 2}, search::PadRelation::pullback);
    REQUIRE(axioms::check_admissible(padded).admissible);

    std::vector<std::size_t> collapse;
    for (std::size_t x = 0; x < padded.size(); ++x) {
      collapse.push_back(
          core.universe()->index_of(padded.universe()->label(padded.pi().map(x))));
    }
    Morphism phi(padded, core, collapse);
    CHECK(morphisms::check_morphism(phi).holds);
    CHECK(phi.surjective());

    auto rep = morphisms::transport_coupling(phi, TransportMode::exact);
    CHECK(rep.preconditions_hold);
    CHECK(rep.conclusion.holds);
    CHECK(rep.conclusion.note == "target coupling law holds in full");
  }
}

TEST_CASE("transport requires the source to satisfy the coupling law") {
  auto not_c = models::separating_model(models::SeparatingKind::not_c);
  Morphism phi = morphisms::identity(not_c.datum);
  CHECK_THROWS_AS(morphisms::transport_coupling(phi, TransportMode::exact),
                  PreconditionError);
}

TEST_CASE("restriction is functorial on the collapse chain") {
  Chain ch;
  // Restricting each leg and composing matches restricting the composite.
  auto rab = quotient::restrict_morphism(ch.ab);
  auto rbc = quotient::restrict_morphism(ch.bc);
  auto rcomp = quotient::restrict_morphism(morphisms::compose(ch.bc, ch.ab));
  CHECK(morphisms::check_morphism(rab).holds);
  CHECK(morphisms::check_morphism(rbc).holds);

  auto composed = morphisms::compose(rbc, rab);
  CHECK(composed.map == rcomp.map);
  CHECK(composed.source == rcomp.source);
  CHECK(composed.target == rcomp.target);

  // The restricted source of A -> B is exactly B (A's core re-labels to it).
  CHECK(rab.source == ch.b);

  // Restriction demands the fiber laws on both endpoints.
  auto not_III = models::separating_model(models::SeparatingKind::not_III);
  CHECK_THROWS_AS(quotient::restrict_morphism(morphisms::identity(not_III.datum)),
                  PreconditionError);
}
