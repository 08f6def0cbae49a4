#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "structura/axioms.hpp"
#include "structura/classify.hpp"
#include "structura/core.hpp"
#include "structura/coupling.hpp"

namespace structura::search {

constexpr std::size_t kDefaultBudget = 10'000'000;

/// All relations on n points that pass law II (reflexive, symmetric,
/// idempotent) — exactly the equivalence relations, one per set partition.
/// Canonically ordered by their row-major adjacency pattern. Guarded to
/// n <= 5 (the candidate space grows as 2^(n^2)).
inline std::vector<Relation> enumerate_axiomII_relations(std::size_t n) {
  if (n == 0) throw InvariantError("enumerate_axiomII_relations: empty universe");
  if (n > 5) throw BudgetError("enumerate_axiomII_relations: n too large (max 5)");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  auto u = Universe::make(labels);

  // Reflexivity and symmetry leave only the strict upper triangle free.
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) slots.emplace_back(a, b);

  std::vector<Relation> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << slots.size()); ++bits) {
    Relation g = Relation::diagonal(u);
    for (std::size_t i = 0; i < slots.size(); ++i)
      if ((bits >> i) & 1U) {
        g.set(slots[i].first, slots[i].second, true);
        g.set(slots[i].second, slots[i].first, true);
      }
    if (g.is_idempotent()) out.push_back(g);
  }

  auto key = [n](const Relation& g) {
    std::vector<bool> v;
    v.reserve(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) v.push_back(g.contains(a, b));
    return v;
  };
  std::sort(out.begin(), out.end(),
            [&](const Relation& a, const Relation& b) { return key(a) < key(b); });
  return out;
}

/// Exhaustive instantiation of identity-retraction data over a weight grid:
/// every assignment of grid weights to n points, crossed with every law-II
/// relation. E0 is inferred as the total mass, so a candidate exists only
/// when that total is positive — an all-zero weight tuple admits no positive
/// budget at all and is skipped (counted separately). The statistics bucket
/// admissible hits by the multiset of block sizes.
struct EnumerationResult {
  std::vector<Datum> admissible;
  std::size_t candidates = 0;
  std::size_t skipped_massless = 0;  // weight tuples with zero total, per relation
  std::map<std::vector<std::size_t>, std::size_t> by_block_signature;
};

namespace detail {

/// Odometer over grid^n in lexicographic order; calls fn on each tuple.
template <class F>
void for_each_tuple(const std::vector<Rational>& grid, std::size_t n, F fn) {
  std::vector<std::size_t> idx(n, 0);
  std::vector<Rational> w(n, grid.at(0));
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) w[i] = grid[idx[i]];
    fn(w);
    std::size_t pos = 0;
    while (pos < n && ++idx[pos] == grid.size()) idx[pos++] = 0;
    if (pos == n) break;
  }
}

inline std::size_t pow_checked(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t v = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (v > cap / (base == 0 ? 1 : base)) return cap + 1;
    v *= base;
  }
  return v;
}

inline Datum make_identity_datum(const UniversePtr& u, const std::vector<Rational>& w,
                                 const Relation& g, const Rational& eta) {
  Charge mu(u, w);
  Rational total = mu.total();
  if (!total.is_positive())
    throw InvariantError("make_identity_datum: total mass must be positive (budget is inferred)");
  Subset all = Subset::all(u);
  return Datum(u, mu, all, Subset::none(u), Retraction::identity(u, all), g, total, eta);
}

}  // namespace detail

inline EnumerationResult enumerate_admissible(std::size_t n, const Rational& eta,
                                              const std::vector<Rational>& grid,
                                              std::size_t budget = kDefaultBudget) {
  if (n == 0 || n > 4) throw BudgetError("enumerate_admissible: n must be 1..4");
  if (grid.empty()) throw InvariantError("enumerate_admissible: empty weight grid");
  for (const auto& g : grid)
    if (g.is_negative()) throw InvariantError("enumerate_admissible: negative grid weight");

  auto relations = enumerate_axiomII_relations(n);
  std::size_t tuples = detail::pow_checked(grid.size(), n, budget);
  if (tuples > budget || tuples * relations.size() > budget)
    throw BudgetError("enumerate_admissible: candidate count exceeds budget");

  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  auto u = Universe::make(labels);

  EnumerationResult res;
  detail::for_each_tuple(grid, n, [&](const std::vector<Rational>& w) {
    Rational total = 0;
    for (const auto& x : w) total += x;
    if (!total.is_positive()) {
      res.skipped_massless += relations.size();
      return;
    }
    for (const Relation& g : relations) {
      ++res.candidates;
      Datum d = detail::make_identity_datum(u, w, g, eta);
      if (axioms::check_admissible(d).admissible) {
        auto blocks = classify::equivalence_classes(g);
        std::vector<std::size_t> sig;
        for (const Subset& c : blocks.classes) sig.push_back(c.count());
        std::sort(sig.begin(), sig.end());
        ++res.by_block_signature[sig];
        res.admissible.push_back(std::move(d));
      }
    }
  });
  return res;
}

/// Scan of probability-normalized data (total mass exactly 1): no admissible
/// datum exists at any positive eta, and every admissible eta = 0 datum has
/// pair mass exactly 1.
struct ProbabilityScan {
  bool no_positive_eta_admissible = true;
  bool unit_pair_mass_at_eta0 = true;
  std::size_t probability_candidates = 0;  // weight tuples with total 1, per relation
  std::size_t admissible_at_eta0 = 0;
  std::size_t positive_eta_admissible = 0;
};

inline ProbabilityScan probability_eta_scan(
    std::size_t n, const std::vector<Rational>& grid,
    const std::vector<Rational>& positive_etas = {Rational(1, 4), Rational(1, 3), Rational(1, 2),
                                                  Rational(2, 3), Rational(3, 4)},
    std::size_t budget = kDefaultBudget) {
  if (n == 0 || n > 4) throw BudgetError("probability_eta_scan: n must be 1..4");
  for (const auto& e : positive_etas)
    if (!e.is_positive() || e >= 1)
      throw InvariantError("probability_eta_scan: scanned etas must lie in (0, 1)");

  auto relations = enumerate_axiomII_relations(n);
  std::size_t tuples = detail::pow_checked(grid.size(), n, budget);
  std::size_t work = tuples * relations.size() * (positive_etas.size() + 1);
  if (tuples > budget || work > budget)
    throw BudgetError("probability_eta_scan: candidate count exceeds budget");

  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  auto u = Universe::make(labels);

  ProbabilityScan res;
  detail::for_each_tuple(grid, n, [&](const std::vector<Rational>& w) {
    Rational total = 0;
    for (const auto& x : w) total += x;
    if (total != 1) return;  // not a probability datum
    for (const Relation& g : relations) {
      ++res.probability_candidates;
      for (const Rational& eta : positive_etas) {
        Datum d = detail::make_identity_datum(u, w, g, eta);
        if (axioms::check_admissible(d).admissible) {
          ++res.positive_eta_admissible;
          res.no_positive_eta_admissible = false;
        }
      }
      Datum d0 = detail::make_identity_datum(u, w, g, Rational(0));
      if (axioms::check_admissible(d0).admissible) {
        ++res.admissible_at_eta0;
        if (d0.mu().product_eval(d0.G()) != 1) res.unit_pair_mass_at_eta0 = false;
      }
    }
  });
  return res;
}

/// Independent bracketing of the fixed-point value: the lower bound is the
/// partial geometric sum, the upper bound adds the telescoped tail
/// eta^(N+1)/(1-eta) * mu(preimage(B)). Under law I the upper bound equals
/// the fixed-point value exactly for every N.
inline std::pair<Rational, Rational> oracle_fixed_point(const Datum& d, const Subset& b,
                                                        std::size_t steps) {
  Rational partial = coupling::neumann_partial(d, b, steps);
  Rational tail = d.eta().pow(steps + 1) / (Rational(1) - d.eta()) *
                  d.mu().eval(d.pi().preimage(b));
  return {partial, partial + tail};
}

// ---------------------------------------------------------------------------
// Fiber padding
// ---------------------------------------------------------------------------

/// How the relation is extended over padded points: `diagonal` gives each new
/// point only its own loop; `pullback` relates x and y whenever their
/// retained images are related (the full fiber-square pattern).
enum class PadRelation { diagonal, pullback };

/// General-retraction variant of an identity-retraction datum: attaches
/// pad_counts[r] fresh zero-mass points to each point r, retracting them onto
/// r. Both relation modes preserve admissibility of admissible inputs; the
/// pullback mode additionally makes the retraction an exact-pullback
/// surjective morphism onto the original datum.
inline Datum pad_fibers(const Datum& core, const std::vector<std::size_t>& pad_counts,
                        PadRelation mode) {
  if (!core.pi().is_identity() || core.R() != Subset::all(core.universe()))
    throw PreconditionError("pad_fibers: input must be an identity-retraction datum");
  if (pad_counts.size() != core.size())
    throw InvariantError("pad_fibers: one pad count per point required");

  const auto& old_u = *core.universe();
  std::vector<std::string> labels = old_u.labels();
  std::vector<std::size_t> anchor;  // core point index of each appended pad
  std::size_t next = 0;
  for (std::size_t r = 0; r < pad_counts.size(); ++r)
    for (std::size_t k = 0; k < pad_counts[r]; ++k) {
      std::string name;
      do {
        name = "p" + std::to_string(next++);
      } while (old_u.find(name).has_value());
      labels.push_back(name);
      anchor.push_back(r);
    }

  auto u = Universe::make(labels);
  std::size_t n_old = old_u.size();
  std::size_t n = u->size();

  std::vector<Rational> w(n, Rational(0));
  for (std::size_t i = 0; i < n_old; ++i) w[i] = core.mu().weight(i);

  std::vector<bool> r_mask(n, false);
  for (std::size_t i = 0; i < n_old; ++i) r_mask[i] = true;
  Subset R(u, r_mask);

  std::vector<std::size_t> pi(n);
  for (std::size_t i = 0; i < n_old; ++i) pi[i] = i;
  for (std::size_t i = n_old; i < n; ++i) pi[i] = anchor[i - n_old];

  Relation g(u);
  if (mode == PadRelation::diagonal) {
    for (std::size_t a = 0; a < n_old; ++a)
      for (std::size_t b = 0; b < n_old; ++b)
        if (core.G().contains(a, b)) g.set(a, b, true);
    for (std::size_t i = n_old; i < n; ++i) g.set(i, i, true);
  } else {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (core.G().contains(pi[a], pi[b])) g.set(a, b, true);
  }

  return Datum(u, Charge(u, w), R, R.complement(), Retraction(u, R, pi), g, core.E0(),
               core.eta());
}

}  // namespace structura::search
