#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "structura/axioms.hpp"
#include "structura/core.hpp"
#include "structura/coupling.hpp"

namespace structura::morphisms {

/// A total point map between two data. Only totality is enforced at
/// construction; the four structural clauses are verdicts produced by
/// check_morphism, so non-morphisms can be represented and diagnosed.
struct Morphism {
  Datum source;
  Datum target;
  std::vector<std::size_t> map;

  Morphism(Datum src, Datum dst, std::vector<std::size_t> m)
      : source(std::move(src)), target(std::move(dst)), map(std::move(m)) {
    if (map.size() != source.size()) throw InvariantError("Morphism: map size mismatch");
    for (std::size_t i : map)
      if (i >= target.size()) throw InvariantError("Morphism: image index out of range");
  }

  [[nodiscard]] Subset image_of(const Subset& b) const {
    require_same_universe(source.universe(), b.universe(), "Morphism::image_of");
    Subset out = Subset::none(target.universe());
    for (std::size_t x : b.members()) out = out.unite(Subset::of_point(target.universe(), map[x]));
    return out;
  }

  [[nodiscard]] Subset preimage_of(const Subset& b) const {
    require_same_universe(target.universe(), b.universe(), "Morphism::preimage_of");
    std::vector<bool> mask(source.size(), false);
    for (std::size_t x = 0; x < map.size(); ++x) mask[x] = b.contains(map[x]);
    return Subset(source.universe(), std::move(mask));
  }

  [[nodiscard]] bool surjective() const {
    std::vector<bool> hit(target.size(), false);
    for (std::size_t i : map) hit[i] = true;
    for (bool h : hit)
      if (!h) return false;
    return true;
  }

  /// Pushforward weights on the target: mass of each point's preimage.
  [[nodiscard]] std::vector<Rational> pushforward_weights() const {
    std::vector<Rational> w(target.size(), Rational(0));
    for (std::size_t x = 0; x < map.size(); ++x) w[map[x]] += source.mu().weight(x);
    return w;
  }
};

inline Morphism identity(const Datum& d) {
  std::vector<std::size_t> m(d.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = i;
  return Morphism(d, d, std::move(m));
}

/// Pointwise composition psi after phi. The inner target and outer source
/// must be the same datum.
inline Morphism compose(const Morphism& psi, const Morphism& phi) {
  if (phi.target != psi.source)
    throw PreconditionError("compose: target of the first map differs from source of the second");
  std::vector<std::size_t> m(phi.map.size());
  for (std::size_t x = 0; x < m.size(); ++x) m[x] = psi.map[phi.map[x]];
  return Morphism(phi.source, psi.target, std::move(m));
}

/// Clause-by-clause verdict for a candidate morphism:
///   (1) measurability of preimages — vacuous over power sets,
///   (2) the map commutes with the two retractions,
///   (3) related pairs map to related pairs,
///   (4) the charge pushes forward exactly (checked on target atoms, which
///       determines both the set-level and the product-level clause).
/// Also reports the automatic consequences: image of R lands in R', and the
/// target budget is bounded by the source mass (with equality detection).
struct MorphismReport {
  Verdict m1;
  Verdict m2;
  Verdict m3;
  Verdict m4;
  bool holds = false;  // conjunction of the four clauses
  Verdict maps_R_into_R;
  Verdict e0_bound;  // E0' <= mu(X), note records equality
};

inline MorphismReport check_morphism(const Morphism& phi) {
  if (phi.source.eta() != phi.target.eta())
    throw PreconditionError("check_morphism: endpoints carry different eta (" +
                            phi.source.eta().str() + " vs " + phi.target.eta().str() + ")");
  MorphismReport rep;
  rep.m1 = Verdict::pass("preimage measurability vacuous over power-set algebras");

  rep.m2 = Verdict::pass();
  for (std::size_t x = 0; x < phi.source.size(); ++x) {
    std::size_t via_source = phi.map[phi.source.pi().map(x)];
    std::size_t via_target = phi.target.pi().map(phi.map[x]);
    if (via_source != via_target) {
      rep.m2 = Verdict::fail(Witness::point(x), "map does not commute with the retractions");
      break;
    }
  }

  rep.m3 = Verdict::pass();
  for (std::size_t a = 0; a < phi.source.size() && rep.m3.holds; ++a)
    for (std::size_t b = 0; b < phi.source.size(); ++b)
      if (phi.source.G().contains(a, b) &&
          !phi.target.G().contains(phi.map[a], phi.map[b])) {
        rep.m3 = Verdict::fail(Witness::pair(a, b),
                               "related pair maps outside the target relation");
        break;
      }

  rep.m4 = Verdict::pass();
  auto pushed = phi.pushforward_weights();
  for (std::size_t y = 0; y < phi.target.size(); ++y) {
    if (pushed[y] != phi.target.mu().weight(y)) {
      rep.m4 = Verdict::fail_values(Witness::point(y), pushed[y], phi.target.mu().weight(y),
                                    "pushforward weight differs at a target point");
      break;
    }
  }

  rep.holds = rep.m1.holds && rep.m2.holds && rep.m3.holds && rep.m4.holds;

  Subset image_R = phi.image_of(phi.source.R());
  rep.maps_R_into_R =
      image_R.subset_of(phi.target.R())
          ? Verdict::pass()
          : Verdict::fail(Witness::subset(image_R.minus(phi.target.R())),
                          "image of R leaves the target's retained set");

  Rational src_mass = phi.source.total_mass();
  if (phi.target.E0() <= src_mass) {
    rep.e0_bound = Verdict::pass(phi.target.E0() == src_mass ? "equality" : "strict");
    rep.e0_bound.lhs = phi.target.E0();
    rep.e0_bound.rhs = src_mass;
  } else {
    rep.e0_bound = Verdict::fail_values(Witness::none(), phi.target.E0(), src_mass,
                                        "target budget exceeds source mass");
  }
  return rep;
}

/// Literal sweep of clause (4): every target subset's preimage mass, and
/// every product rectangle's pullback pair mass, against the target values.
/// Exists to cross-check the atom reduction at small sizes (target <= 16,
/// rectangles swept when target <= 8).
inline Verdict check_m4_exhaustive(const Morphism& phi) {
  std::size_t n = phi.target.size();
  if (n > axioms::kExhaustiveLimit)
    throw BudgetError("check_m4_exhaustive: limited to 16 target points");
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    Subset b = Subset::of_bits(phi.target.universe(), bits);
    Rational lhs = phi.source.mu().eval(phi.preimage_of(b));
    Rational rhs = phi.target.mu().eval(b);
    if (lhs != rhs)
      return Verdict::fail_values(Witness::subset(b), lhs, rhs,
                                  "preimage mass differs on a target subset");
  }
  if (n <= 8) {
    for (std::uint64_t abits = 0; abits < (std::uint64_t{1} << n); ++abits) {
      Subset a = Subset::of_bits(phi.target.universe(), abits);
      Subset pre_a = phi.preimage_of(a);
      for (std::uint64_t bbits = 0; bbits < (std::uint64_t{1} << n); ++bbits) {
        Subset b = Subset::of_bits(phi.target.universe(), bbits);
        Rational lhs =
            phi.source.mu().product_eval_rectangle(pre_a, phi.preimage_of(b));
        Rational rhs = phi.target.mu().product_eval_rectangle(a, b);
        if (lhs != rhs)
          return Verdict::fail_values(Witness::subset(a), lhs, rhs,
                                      "pullback pair mass differs on a rectangle");
      }
    }
  }
  return Verdict::pass();
}

// ---------------------------------------------------------------------------
// Coupling-law transport
// ---------------------------------------------------------------------------

enum class TransportMode { inclusion, exact };

/// Result of pushing the source's coupling law through a map.
///   - inclusion mode: needs the pullback of the target relation to lie
///     inside the source relation; concludes the source-side inequality
///     target_load(B') <= source_load(preimage(B')) for every B'.
///   - exact mode: needs pullback equality and surjectivity; concludes the
///     target coupling law in full.
/// Mode hypotheses are reported (with the violating pair / uncovered point),
/// not thrown; a failed hypothesis leaves the conclusion unevaluated.
struct TransportReport {
  TransportMode mode = TransportMode::inclusion;
  bool preconditions_hold = false;
  Witness precondition_witness{};
  std::string precondition_note;
  Verdict conclusion;  // meaningful only when preconditions_hold
};

inline TransportReport transport_coupling(const Morphism& phi, TransportMode mode) {
  if (phi.source.eta() != phi.target.eta())
    throw PreconditionError("transport_coupling: endpoints carry different eta");
  if (!axioms::check_axiom_III_c(phi.source).holds)
    throw PreconditionError("transport_coupling: source does not satisfy the coupling law");

  TransportReport rep;
  rep.mode = mode;

  // Pullback relation (phi x phi)^{-1}(G') on the source universe.
  Relation pullback(phi.source.universe());
  for (std::size_t a = 0; a < phi.source.size(); ++a)
    for (std::size_t b = 0; b < phi.source.size(); ++b)
      if (phi.target.G().contains(phi.map[a], phi.map[b])) pullback.set(a, b, true);

  if (mode == TransportMode::inclusion) {
    Relation excess = pullback.minus(phi.source.G());
    auto excess_pairs = excess.pairs();
    if (!excess_pairs.empty()) {
      rep.precondition_witness = Witness::pair(excess_pairs[0].first, excess_pairs[0].second);
      rep.precondition_note = "pullback of the target relation leaves the source relation";
      return rep;
    }
    rep.preconditions_hold = true;
    rep.conclusion = Verdict::pass();
    for (std::size_t y = 0; y < phi.target.size(); ++y) {
      Subset atom = Subset::of_point(phi.target.universe(), y);
      Rational lhs = coupling::curvature_load(phi.target, atom);
      Rational rhs = coupling::curvature_load(phi.source, phi.preimage_of(atom));
      if (lhs > rhs) {
        rep.conclusion = Verdict::fail_values(Witness::point(y), lhs, rhs,
                                              "target load exceeds pulled-back source load");
        break;
      }
    }
    return rep;
  }

  // exact mode
  Relation diff = pullback.minus(phi.source.G()).unite(phi.source.G().minus(pullback));
  auto diff_pairs = diff.pairs();
  if (!diff_pairs.empty()) {
    rep.precondition_witness = Witness::pair(diff_pairs[0].first, diff_pairs[0].second);
    rep.precondition_note = "pullback of the target relation differs from the source relation";
    return rep;
  }
  if (!phi.surjective()) {
    std::vector<bool> hit(phi.target.size(), false);
    for (std::size_t i : phi.map) hit[i] = true;
    for (std::size_t y = 0; y < hit.size(); ++y)
      if (!hit[y]) {
        rep.precondition_witness = Witness::point(y);
        break;
      }
    rep.precondition_note = "map is not surjective";
    return rep;
  }
  rep.preconditions_hold = true;
  rep.conclusion = axioms::check_axiom_III_c(phi.target);
  if (rep.conclusion.holds) rep.conclusion.note = "target coupling law holds in full";
  return rep;
}

}  // namespace structura::morphisms
