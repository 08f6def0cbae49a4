#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "structura/core.hpp"

namespace structura::models {

/// Diagonal model over nR retained points and nI inert points: the inert
/// points carry no mass and all sink to the first retained point, the
/// relation is the diagonal, eta = 0, E0 = total mass. weights01 gives the
/// 0/1 mass flags of the retained points; at least one must be 1.
inline Datum diagonal_finite_model(std::size_t nR, std::size_t nI,
                                   const std::vector<int>& weights01) {
  if (nR < 1) throw InvariantError("diagonal_finite_model: need at least one retained point");
  if (weights01.size() != nR)
    throw InvariantError("diagonal_finite_model: weight flag count must equal nR");
  bool any = false;
  for (int w : weights01) {
    if (w != 0 && w != 1) throw InvariantError("diagonal_finite_model: weights must be 0/1 flags");
    any = any || (w == 1);
  }
  if (!any)
    throw InvariantError(
        "diagonal_finite_model: all-zero weights leave the retained set massless");

  std::vector<std::string> labels;
  for (std::size_t k = 0; k < nR; ++k) labels.push_back("r" + std::to_string(k));
  for (std::size_t k = 0; k < nI; ++k) labels.push_back("i" + std::to_string(k));
  auto u = Universe::make(labels);

  std::vector<Rational> w(u->size(), Rational(0));
  for (std::size_t k = 0; k < nR; ++k) w[k] = weights01[k];
  Charge mu(u, w);

  std::vector<bool> r_mask(u->size(), false), i_mask(u->size(), false);
  for (std::size_t k = 0; k < nR; ++k) r_mask[k] = true;
  for (std::size_t k = nR; k < u->size(); ++k) i_mask[k] = true;
  Subset R(u, r_mask), I(u, i_mask);

  std::vector<std::size_t> pi(u->size());
  for (std::size_t k = 0; k < nR; ++k) pi[k] = k;
  for (std::size_t k = nR; k < u->size(); ++k) pi[k] = 0;  // sink to r0

  Rational e0 = mu.total();
  return Datum(u, mu, R, I, Retraction(u, R, pi), Relation::diagonal(u), e0, Rational(0));
}

/// Three-point model {r0, r1, i} with diagonal relation whose retained
/// weights 1/(1-eta) make the coupling law hold at the given eta.
/// E0 = 2/(1-eta). Requires 0 <= eta < 1.
inline Datum eta_model(const Rational& eta) {
  if (eta.is_negative() || eta >= 1)
    throw DomainError("eta_model: eta must lie in [0, 1)");
  auto u = Universe::make({"r0", "r1", "i"});
  Rational wr = Rational(1) / (Rational(1) - eta);
  Charge mu(u, {wr, wr, Rational(0)});
  Subset R = Subset::of_labels(u, {"r0", "r1"});
  Subset I = Subset::of_labels(u, {"i"});
  Retraction pi(u, R, {0, 1, 0});  // i sinks to r0
  return Datum(u, mu, R, I, pi, Relation::diagonal(u), wr + wr, eta);
}

/// Two-point identity-retraction model with the total relation; weights
/// 1/(2(1-eta)) each, E0 = 1/(1-eta). The relation strictly contains the
/// diagonal, so the curvature is non-diagonal. Requires 0 <= eta < 1.
inline Datum total_relation_model(const Rational& eta) {
  if (eta.is_negative() || eta >= 1)
    throw DomainError("total_relation_model: eta must lie in [0, 1)");
  auto u = Universe::make({"r0", "r1"});
  Rational w = Rational(1) / (Rational(2) * (Rational(1) - eta));
  Charge mu(u, {w, w});
  Subset R = Subset::all(u);
  Subset I = Subset::none(u);
  return Datum(u, mu, R, I, Retraction::identity(u, R), Relation::total(u),
               Rational(1) / (Rational(1) - eta), eta);
}

/// Identity-retraction model whose relation is a disjoint union of full
/// blocks C_k x C_k. Every block's weights must sum to exactly 1/(1-eta)
/// (the blockwise normalization); the mass distribution inside a block is
/// free. E0 = total mass. Points are labeled "b<k>_<j>".
inline Datum block_family_model(const std::vector<std::size_t>& block_sizes,
                                const std::vector<Rational>& weights, const Rational& eta) {
  if (eta.is_negative() || eta >= 1)
    throw DomainError("block_family_model: eta must lie in [0, 1)");
  if (block_sizes.empty()) throw InvariantError("block_family_model: need at least one block");
  std::size_t n = 0;
  for (std::size_t s : block_sizes) {
    if (s == 0) throw InvariantError("block_family_model: empty block");
    n += s;
  }
  if (weights.size() != n)
    throw InvariantError("block_family_model: weight count must match total block size");

  Rational target = Rational(1) / (Rational(1) - eta);
  std::vector<std::string> labels;
  std::size_t at = 0;
  for (std::size_t k = 0; k < block_sizes.size(); ++k) {
    Rational sum = 0;
    for (std::size_t j = 0; j < block_sizes[k]; ++j) {
      labels.push_back("b" + std::to_string(k) + "_" + std::to_string(j));
      sum += weights[at++];
    }
    if (sum != target)
      throw InvariantError("block_family_model: block " + std::to_string(k) + " sums to " +
                           sum.str() + ", expected " + target.str());
  }

  auto u = Universe::make(labels);
  Charge mu(u, weights);
  Subset R = Subset::all(u);
  Relation g(u);
  at = 0;
  for (std::size_t s : block_sizes) {
    for (std::size_t a = at; a < at + s; ++a)
      for (std::size_t b = at; b < at + s; ++b) g.set(a, b, true);
    at += s;
  }
  return Datum(u, mu, R, Subset::none(u), Retraction::identity(u, R), g, mu.total(), eta);
}

/// Model whose universe splits into classes C_j, each collapsed by the map
/// onto a distinguished representative r_j that carries the class's whole
/// 0/1 mass; the relation is the union of the class squares and eta = 0.
/// Class j's points are labeled "r<j>" (representative) and "c<j>_<m>".
inline Datum class_model(const std::vector<std::size_t>& class_sizes,
                         const std::vector<int>& rep_weights01) {
  if (class_sizes.empty()) throw InvariantError("class_model: need at least one class");
  if (rep_weights01.size() != class_sizes.size())
    throw InvariantError("class_model: one weight flag per class required");
  bool any = false;
  for (int w : rep_weights01) {
    if (w != 0 && w != 1) throw InvariantError("class_model: weights must be 0/1 flags");
    any = any || (w == 1);
  }
  if (!any) throw InvariantError("class_model: all-zero weights leave the model massless");

  std::vector<std::string> labels;
  std::vector<std::size_t> class_start;
  for (std::size_t j = 0; j < class_sizes.size(); ++j) {
    if (class_sizes[j] == 0) throw InvariantError("class_model: empty class");
    class_start.push_back(labels.size());
    labels.push_back("r" + std::to_string(j));
    for (std::size_t m = 1; m < class_sizes[j]; ++m)
      labels.push_back("c" + std::to_string(j) + "_" + std::to_string(m));
  }
  auto u = Universe::make(labels);

  std::vector<Rational> w(u->size(), Rational(0));
  std::vector<bool> r_mask(u->size(), false);
  std::vector<std::size_t> pi(u->size());
  Relation g(u);
  Rational e0 = 0;
  for (std::size_t j = 0; j < class_sizes.size(); ++j) {
    std::size_t start = class_start[j];
    w[start] = rep_weights01[j];
    e0 += w[start];
    r_mask[start] = true;
    for (std::size_t a = start; a < start + class_sizes[j]; ++a) {
      pi[a] = start;
      for (std::size_t b = start; b < start + class_sizes[j]; ++b) g.set(a, b, true);
    }
  }
  Subset R(u, r_mask);
  Charge mu(u, w);
  return Datum(u, mu, R, R.complement(), Retraction(u, R, pi), g, e0, Rational(0));
}

/// Finite stage of the countable extension: appends `extra` fresh zero-mass
/// points, all mapped to the first retained point, with the relation extended
/// by their diagonal loops only. The base must have eta = 0. E0, masses, and
/// curvature loads on old subsets are untouched. (The genuinely infinite
/// object is out of scope; this realizes its finite truncations.)
inline Datum countable_truncation(const Datum& base, std::size_t extra) {
  if (base.eta() != 0) throw PreconditionError("countable_truncation: base must have eta = 0");
  auto r_members = base.R().members();
  if (r_members.empty()) throw PreconditionError("countable_truncation: base has empty R");
  std::size_t r0 = r_members.front();
  if (extra == 0) return base;

  const auto& old_u = *base.universe();
  std::vector<std::string> labels = old_u.labels();
  std::size_t next = 0;
  for (std::size_t k = 0; k < extra; ++k) {
    std::string name;
    do {
      name = "y" + std::to_string(next++);
    } while (old_u.find(name).has_value());
    labels.push_back(name);
  }
  auto u = Universe::make(labels);
  std::size_t n_old = old_u.size();
  std::size_t n = u->size();

  std::vector<Rational> w(n, Rational(0));
  for (std::size_t i = 0; i < n_old; ++i) w[i] = base.mu().weight(i);

  std::vector<bool> r_mask(n, false), i_mask(n, false);
  for (std::size_t i = 0; i < n_old; ++i) {
    r_mask[i] = base.R().contains(i);
    i_mask[i] = base.I().contains(i);
  }
  for (std::size_t i = n_old; i < n; ++i) i_mask[i] = true;
  Subset R(u, r_mask), I(u, i_mask);

  std::vector<std::size_t> pi(n);
  for (std::size_t i = 0; i < n_old; ++i) pi[i] = base.pi().map(i);
  for (std::size_t i = n_old; i < n; ++i) pi[i] = r0;

  Relation g(u);
  for (std::size_t a = 0; a < n_old; ++a)
    for (std::size_t b = 0; b < n_old; ++b)
      if (base.G().contains(a, b)) g.set(a, b, true);
  for (std::size_t i = n_old; i < n; ++i) g.set(i, i, true);

  return Datum(u, Charge(u, w), R, I, Retraction(u, R, pi), g, base.E0(), base.eta());
}

// ---------------------------------------------------------------------------
// Separating models
// ---------------------------------------------------------------------------

enum class SeparatingKind { not_I, not_II, not_III, not_a, not_b, not_c };

/// A deliberately broken datum together with the exact verdict pattern it
/// must produce: {law I, law II, law III(a), law III(b), law III(c)}.
struct SeparatingModel {
  std::string name;
  Datum datum;
  std::array<bool, 5> expected;  // I, II, III(a), III(b), III(c)
};

/// The six canonical counterexamples, each failing exactly one law (the
/// three-law separators) or exactly one subclause (the internal ones).
inline SeparatingModel separating_model(SeparatingKind kind) {
  switch (kind) {
    case SeparatingKind::not_I: {
      // Swap-and-sink map on {a,b,c}: fixes nothing in R pointwise, yet all
      // mass-level identities still balance because the two retained points
      // carry equal unit mass.
      auto u = Universe::make({"a", "b", "c"});
      Subset R = Subset::of_labels(u, {"a", "b"});
      Subset I = Subset::of_labels(u, {"c"});
      Retraction pi(u, R, {1, 0, 0});  // a->b, b->a, c->a
      Charge mu(u, {1, 1, 0});
      return {"not_I",
              Datum(u, mu, R, I, pi, Relation::diagonal(u), Rational(2), Rational(0)),
              {false, true, true, true, true}};
    }
    case SeparatingKind::not_II: {
      // Reflexive symmetric relation with a composition gap at (a,c); the gap
      // is invisible to the charge because the bridging point b is massless.
      auto u = Universe::make({"a", "b", "c"});
      Subset R = Subset::all(u);
      Relation g = Relation::diagonal(u);
      g.set(0, 1, true);
      g.set(1, 0, true);
      g.set(1, 2, true);
      g.set(2, 1, true);
      Charge mu(u, {1, 0, 1});
      return {"not_II",
              Datum(u, mu, R, Subset::none(u), Retraction::identity(u, R), g, Rational(2),
                    Rational(0)),
              {true, false, true, true, true}};
    }
    case SeparatingKind::not_III: {
      // Collapsing a unit-mass inert point onto a unit-mass retained point
      // doubles the preimage mass: invariance fails at {r}.
      auto u = Universe::make({"r", "i"});
      Subset R = Subset::of_labels(u, {"r"});
      Subset I = Subset::of_labels(u, {"i"});
      Retraction pi(u, R, {0, 0});
      Charge mu(u, {1, 1});
      return {"not_III",
              Datum(u, mu, R, I, pi, Relation::diagonal(u), Rational(2), Rational(0)),
              {true, true, true, false, true}};
    }
    case SeparatingKind::not_a: {
      // The zero charge: every identity balances, but no positive budget can
      // equal the vanishing total mass.
      auto u = Universe::make({"r"});
      Subset R = Subset::all(u);
      Charge mu(u, {Rational(0)});
      return {"not_a",
              Datum(u, mu, R, Subset::none(u), Retraction::identity(u, R),
                    Relation::diagonal(u), Rational(1), Rational(0)),
              {true, true, false, true, true}};
    }
    case SeparatingKind::not_b: {
      // Same datum as not_III, viewed as the internal subclause separator:
      // conservation and the coupling law hold, invariance alone fails.
      SeparatingModel m = separating_model(SeparatingKind::not_III);
      m.name = "not_b";
      return m;
    }
    case SeparatingKind::not_c: {
      // Total relation at eta = 1/2 with mass concentrated on one point:
      // the curvature load is 1 but the law demands 1 + 1/2 * 1 = 3/2.
      auto u = Universe::make({"a", "b"});
      Subset R = Subset::all(u);
      Charge mu(u, {1, 0});
      return {"not_c",
              Datum(u, mu, R, Subset::none(u), Retraction::identity(u, R), Relation::total(u),
                    Rational(1), Rational(1, 2)),
              {true, true, true, true, false}};
    }
  }
  throw InvariantError("separating_model: unknown kind");
}

inline std::vector<SeparatingModel> all_separating_models() {
  return {separating_model(SeparatingKind::not_I),  separating_model(SeparatingKind::not_II),
          separating_model(SeparatingKind::not_III), separating_model(SeparatingKind::not_a),
          separating_model(SeparatingKind::not_b),  separating_model(SeparatingKind::not_c)};
}

}  // namespace structura::models
