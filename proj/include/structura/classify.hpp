#pragma once

#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "structura/axioms.hpp"
#include "structura/core.hpp"

namespace structura::classify {

/// The universe partitioned into the blocks of an equivalence relation,
/// ordered by smallest member index. Masses are filled in when a charge is
/// available.
struct BlockDecomposition {
  std::vector<Subset> classes;
  std::vector<Rational> masses;  // parallel to classes; empty when unset
};

namespace detail {

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[a < b ? b : a] = (a < b ? a : b);
  }
  std::vector<std::size_t> parent;
};

}  // namespace detail

/// Splits an equivalence relation into its blocks. Rejects relations that
/// fail reflexivity, symmetry, or idempotence, since only those decompose as
/// a disjoint union of full squares. Verifies the reconstruction
/// union of C_k x C_k == G before returning.
inline BlockDecomposition equivalence_classes(const Relation& g) {
  if (!g.is_reflexive() || !g.is_symmetric() || !g.is_idempotent())
    throw PreconditionError("equivalence_classes: relation is not an equivalence relation");

  std::size_t n = g.size();
  detail::UnionFind uf(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (g.contains(a, b)) uf.unite(a, b);

  BlockDecomposition out;
  std::vector<long> class_of(n, -1);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t root = uf.find(x);
    if (class_of[root] < 0) {
      class_of[root] = static_cast<long>(out.classes.size());
      out.classes.push_back(Subset::none(g.universe()));
    }
    out.classes[static_cast<std::size_t>(class_of[root])] =
        out.classes[static_cast<std::size_t>(class_of[root])]
            .unite(Subset::of_point(g.universe(), x));
  }

  Relation rebuilt(g.universe());
  for (const Subset& c : out.classes)
    for (std::size_t a : c.members())
      for (std::size_t b : c.members()) rebuilt.set(a, b, true);
  if (rebuilt != g)
    throw PreconditionError("equivalence_classes: relation is not a union of class squares");
  return out;
}

inline BlockDecomposition equivalence_classes(const Datum& d) {
  BlockDecomposition bd = equivalence_classes(d.G());
  for (const Subset& c : bd.classes) bd.masses.push_back(d.mu().eval(c));
  return bd;
}

namespace detail {

inline void require_identity_retraction(const Datum& d, const char* who) {
  if (!d.pi().is_identity() || d.R() != Subset::all(d.universe()))
    throw PreconditionError(std::string(who) +
                            ": requires the identity-retraction case (R = X, map = id)");
}

}  // namespace detail

/// The block formula for the curvature load:
///   pair_mass((B x X) n G) = sum_k mu(B n C_k) * mu(C_k).
/// Defined for identity-retraction data (or restricted cores) whose relation
/// passes law II.
inline Rational block_curvature_load(const Datum& d, const Subset& b) {
  detail::require_identity_retraction(d, "block_curvature_load");
  require_same_universe(d.universe(), b.universe(), "block_curvature_load");
  BlockDecomposition bd = equivalence_classes(d);
  Rational acc = 0;
  for (std::size_t k = 0; k < bd.classes.size(); ++k)
    acc += d.mu().eval(b.intersect(bd.classes[k])) * bd.masses[k];
  return acc;
}

/// Per-class outcome of the normalization law: each block's mass must be
/// either 0 or exactly 1/(1-eta).
struct DichotomyReport {
  bool holds = true;
  struct Entry {
    Subset block;
    Rational mass;
    bool zero = false;        // mass == 0
    bool normalized = false;  // mass == 1/(1-eta)
  };
  std::vector<Entry> per_class;
  Rational required_mass;  // 1/(1-eta)
};

/// The classification criterion for identity-retraction data: the coupling
/// law holds iff every positive-mass block has mass exactly 1/(1-eta).
inline DichotomyReport check_block_dichotomy(const Datum& d) {
  detail::require_identity_retraction(d, "check_block_dichotomy");
  if (d.eta() == 1)
    throw DomainError("check_block_dichotomy: eta = 1 would force infinite block mass");
  if (!axioms::check_axiom_II(d).holds)
    throw PreconditionError("check_block_dichotomy: relation fails law II");

  DichotomyReport rep;
  rep.required_mass = Rational(1) / (Rational(1) - d.eta());
  BlockDecomposition bd = equivalence_classes(d);
  for (std::size_t k = 0; k < bd.classes.size(); ++k) {
    DichotomyReport::Entry e{bd.classes[k], bd.masses[k]};
    e.zero = e.mass.is_zero();
    e.normalized = e.mass == rep.required_mass;
    if (!e.zero && !e.normalized) rep.holds = false;
    rep.per_class.push_back(std::move(e));
  }
  return rep;
}

/// Closed-form totals in the fully positive case: with m blocks all of mass
/// 1/(1-eta), the total mass is m/(1-eta) and the pair mass of G is
/// m/(1-eta)^2. Verified against direct evaluation before returning.
struct MassSummary {
  std::size_t class_count = 0;
  Rational total_mass;
  Rational pair_mass;
};

inline MassSummary total_mass_summary(const Datum& d) {
  detail::require_identity_retraction(d, "total_mass_summary");
  DichotomyReport dich = check_block_dichotomy(d);
  if (!dich.holds)
    throw PreconditionError("total_mass_summary: block dichotomy fails");
  for (const auto& e : dich.per_class)
    if (e.zero)
      throw PreconditionError("total_mass_summary: requires every block to carry positive mass");

  MassSummary s;
  s.class_count = dich.per_class.size();
  s.total_mass = d.total_mass();
  s.pair_mass = d.mu().product_eval(d.G());

  Rational m(static_cast<long long>(s.class_count));
  Rational geom = Rational(1) / (Rational(1) - d.eta());
  if (s.total_mass != m * geom)
    throw Error("total_mass_summary: total mass differs from m/(1-eta)");
  if (s.pair_mass != m * geom * geom)
    throw Error("total_mass_summary: pair mass differs from m/(1-eta)^2");
  return s;
}

}  // namespace structura::classify
