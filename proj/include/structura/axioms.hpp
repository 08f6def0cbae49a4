#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "structura/core.hpp"

namespace structura::axioms {

/// Quantifier strategy for the subset-quantified laws. Both sides of each law
/// are finitely additive in the subset argument, so equality on singletons
/// already decides equality on the whole power set; `exhaustive` re-checks
/// every subset anyway (guarded to universes of at most 16 points).
enum class Mode { singletons, exhaustive };

constexpr std::size_t kExhaustiveLimit = 16;

namespace detail {

inline void guard_exhaustive(const Datum& d, Mode mode, const char* who) {
  if (mode == Mode::exhaustive && d.size() > kExhaustiveLimit)
    throw BudgetError(std::string(who) + ": exhaustive mode limited to " +
                      std::to_string(kExhaustiveLimit) + " points");
}

/// Per-point curvature row: row(x) = m(x) * sum of m(y) over (x,y) in G.
/// The pair mass of (B x X) n G is the sum of rows over B.
inline std::vector<Rational> curvature_rows(const Datum& d) {
  std::size_t n = d.size();
  std::vector<Rational> rows(n, Rational(0));
  for (std::size_t x = 0; x < n; ++x) {
    if (d.mu().weight(x).is_zero()) continue;
    Rational s = 0;
    for (std::size_t y = 0; y < n; ++y)
      if (d.G().contains(x, y)) s += d.mu().weight(y);
    rows[x] = d.mu().weight(x) * s;
  }
  return rows;
}

inline Rational sum_over(const std::vector<Rational>& rows, const Subset& b) {
  Rational s = 0;
  for (std::size_t i : b.members()) s += rows[i];
  return s;
}

}  // namespace detail

/// Law I: the designated map fixes R pointwise and is idempotent; preimage
/// measurability is vacuous over a power-set algebra and reported as such.
inline Verdict check_axiom_I(const Datum& d) {
  for (std::size_t r : d.R().members()) {
    if (d.pi().map(r) != r)
      return Verdict::fail(Witness::point(r),
                           "map does not fix retained point '" + d.universe()->label(r) + "'");
  }
  for (std::size_t x = 0; x < d.size(); ++x) {
    std::size_t once = d.pi().map(x);
    std::size_t twice = d.pi().map(once);
    if (twice != once)
      return Verdict::fail(Witness::point(x),
                           "map not idempotent at '" + d.universe()->label(x) + "'");
  }
  return Verdict::pass("holds; preimage measurability vacuous over the power set");
}

/// Law II: the relation is reflexive, symmetric, and idempotent under
/// composition. The witness is the first missing diagonal pair, asymmetric
/// pair, or pair in the symmetric difference of G∘G and G.
inline Verdict check_axiom_II(const Datum& d) {
  const Relation& g = d.G();
  for (std::size_t i = 0; i < d.size(); ++i)
    if (!g.contains(i, i))
      return Verdict::fail(Witness::pair(i, i), "relation not reflexive");
  for (std::size_t a = 0; a < d.size(); ++a)
    for (std::size_t b = 0; b < d.size(); ++b)
      if (g.contains(a, b) && !g.contains(b, a))
        return Verdict::fail(Witness::pair(a, b), "relation not symmetric");
  Relation gg = g.compose(g);
  for (std::size_t a = 0; a < d.size(); ++a)
    for (std::size_t b = 0; b < d.size(); ++b)
      if (gg.contains(a, b) != g.contains(a, b))
        return Verdict::fail(Witness::pair(a, b),
                             gg.contains(a, b) ? "composition adds this pair"
                                               : "composition drops this pair");
  return Verdict::pass();
}

struct AxiomIIIVerdicts {
  Verdict a;
  Verdict b;
  Verdict c;
};

/// Law III(a): total mass splits as mu(R) + mu(I) = E0 > 0.
inline Verdict check_axiom_III_a(const Datum& d) {
  Rational lhs = d.mu().eval(d.R()) + d.mu().eval(d.I());
  if (lhs != d.E0()) {
    Verdict v = Verdict::fail_values(Witness::none(), lhs, d.E0(),
                                     "mu(R) + mu(I) differs from E0");
    return v;
  }
  Verdict v = Verdict::pass();
  v.lhs = lhs;
  v.rhs = d.E0();
  return v;
}

/// Law III(b): preimages under the map preserve mass for subsets of R.
/// Singleton mode checks atoms of R (sufficient by additivity); exhaustive
/// mode sweeps all subsets of R.
inline Verdict check_axiom_III_b(const Datum& d, Mode mode = Mode::singletons) {
  detail::guard_exhaustive(d, mode, "check_axiom_III_b");
  if (mode == Mode::singletons) {
    for (std::size_t r : d.R().members()) {
      Subset b = Subset::of_point(d.universe(), r);
      Rational lhs = d.mu().eval(d.pi().preimage(b));
      Rational rhs = d.mu().eval(b);
      if (lhs != rhs)
        return Verdict::fail_values(Witness::subset(b), lhs, rhs,
                                    "preimage mass differs on a retained singleton");
    }
    return Verdict::pass();
  }
  auto r_members = d.R().members();
  std::size_t k = r_members.size();
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
    Subset b = Subset::none(d.universe());
    for (std::size_t i = 0; i < k; ++i)
      if ((bits >> i) & 1U) b = b.unite(Subset::of_point(d.universe(), r_members[i]));
    Rational lhs = d.mu().eval(d.pi().preimage(b));
    Rational rhs = d.mu().eval(b);
    if (lhs != rhs)
      return Verdict::fail_values(Witness::subset(b), lhs, rhs,
                                  "preimage mass differs on a retained subset");
  }
  return Verdict::pass();
}

/// Law III(c), the coupling law: for every subset B,
///   pair_mass((B x X) n G) = mu(B) + eta * pair_mass((preimage(B n R) x X) n G).
/// Singleton mode checks atoms (sufficient by additivity of both sides).
inline Verdict check_axiom_III_c(const Datum& d, Mode mode = Mode::singletons) {
  detail::guard_exhaustive(d, mode, "check_axiom_III_c");
  auto rows = detail::curvature_rows(d);
  auto law = [&](const Subset& b) -> std::pair<Rational, Rational> {
    Rational lhs = detail::sum_over(rows, b);
    Subset pre = d.pi().preimage(b.intersect(d.R()));
    Rational rhs = d.mu().eval(b) + d.eta() * detail::sum_over(rows, pre);
    return {lhs, rhs};
  };
  if (mode == Mode::singletons) {
    for (std::size_t x = 0; x < d.size(); ++x) {
      Subset b = Subset::of_point(d.universe(), x);
      auto [lhs, rhs] = law(b);
      if (lhs != rhs)
        return Verdict::fail_values(Witness::subset(b), lhs, rhs,
                                    "coupling law fails on a singleton");
    }
    return Verdict::pass();
  }
  std::size_t n = d.size();
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    Subset b = Subset::of_bits(d.universe(), bits);
    auto [lhs, rhs] = law(b);
    if (lhs != rhs)
      return Verdict::fail_values(Witness::subset(b), lhs, rhs, "coupling law fails on a subset");
  }
  return Verdict::pass();
}

inline AxiomIIIVerdicts check_axiom_III(const Datum& d, Mode mode = Mode::singletons) {
  return {check_axiom_III_a(d), check_axiom_III_b(d, mode), check_axiom_III_c(d, mode)};
}

/// Aggregate decision: all five verdicts (I, II, IIIa, IIIb, IIIc).
struct AxiomReport {
  Verdict axiom_I;
  Verdict axiom_II;
  Verdict axiom_III_a;
  Verdict axiom_III_b;
  Verdict axiom_III_c;
  bool admissible = false;

  [[nodiscard]] std::array<bool, 5> pattern() const {
    return {axiom_I.holds, axiom_II.holds, axiom_III_a.holds, axiom_III_b.holds,
            axiom_III_c.holds};
  }
};

inline AxiomReport check_admissible(const Datum& d, Mode mode = Mode::singletons) {
  AxiomReport r;
  r.axiom_I = check_axiom_I(d);
  r.axiom_II = check_axiom_II(d);
  auto iii = check_axiom_III(d, mode);
  r.axiom_III_a = iii.a;
  r.axiom_III_b = iii.b;
  r.axiom_III_c = iii.c;
  r.admissible = r.axiom_I.holds && r.axiom_II.holds && r.axiom_III_a.holds &&
                 r.axiom_III_b.holds && r.axiom_III_c.holds;
  return r;
}

/// Structural facts every law-abiding datum must exhibit:
///   (i)   fixed points of the map are exactly R,
///   (ii)  iterating the map changes nothing after the first application,
///   (iii) the relation is an equivalence relation (transitivity included),
///   (iv)  if R and I tile the whole universe then mu(I) = 0,
///   (v)   at eta = 0 the curvature load of every singleton equals its mass.
/// Requires the datum to pass check_admissible first.
inline std::vector<Verdict> derived_consequence_checks(const Datum& d) {
  if (!check_admissible(d).admissible)
    throw PreconditionError("derived_consequence_checks: datum is not admissible");
  std::vector<Verdict> out;

  Subset fixed = d.pi().fixed_points();
  out.push_back(fixed == d.R()
                    ? Verdict::pass("fixed points = R")
                    : Verdict::fail(Witness::subset(fixed), "fixed points differ from R"));

  {
    Verdict v = Verdict::pass("map stable under iteration (n = 2..5)");
    Retraction power = d.pi();
    for (int n = 2; n <= 5 && v.holds; ++n) {
      power = power.compose_self();
      for (std::size_t x = 0; x < d.size(); ++x)
        if (power.map(x) != d.pi().map(x)) {
          v = Verdict::fail(Witness::point(x), "iterated map diverges at power " +
                                                   std::to_string(n));
          break;
        }
    }
    out.push_back(v);
  }

  out.push_back(d.G().is_transitive()
                    ? Verdict::pass("relation is an equivalence relation")
                    : Verdict::fail(Witness::none(), "relation not transitive"));

  if (d.R().unite(d.I()) == Subset::all(d.universe())) {
    Rational mi = d.mu().eval(d.I());
    out.push_back(mi.is_zero() ? Verdict::pass("inert mass vanishes")
                               : Verdict::fail_values(Witness::subset(d.I()), mi, Rational(0),
                                                      "inert set carries mass"));
  } else {
    out.push_back(Verdict::pass("R and I do not tile the universe; inert-mass check vacuous"));
  }

  if (d.eta().is_zero()) {
    Verdict v = Verdict::pass("curvature load matches mass on singletons at eta = 0");
    auto rows = detail::curvature_rows(d);
    for (std::size_t x = 0; x < d.size(); ++x)
      if (rows[x] != d.mu().weight(x)) {
        v = Verdict::fail_values(Witness::point(x), rows[x], d.mu().weight(x),
                                 "curvature load differs from mass");
        break;
      }
    out.push_back(v);
  } else {
    out.push_back(Verdict::pass("eta nonzero; baseline comparison vacuous"));
  }

  return out;
}

}  // namespace structura::axioms
