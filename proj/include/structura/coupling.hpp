#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "structura/axioms.hpp"
#include "structura/core.hpp"

namespace structura::coupling {

using axioms::Mode;

// ---------------------------------------------------------------------------
// SetFunction
// ---------------------------------------------------------------------------

/// A finitely additive signed set function on the power set of a finite
/// universe, stored by its atom values (which determine it completely).
class SetFunction {
 public:
  SetFunction(UniversePtr u, std::vector<Rational> atoms)
      : u_(std::move(u)), atoms_(std::move(atoms)) {
    if (atoms_.size() != u_->size()) throw InvariantError("SetFunction: atom count mismatch");
  }

  static SetFunction zero(const UniversePtr& u) {
    return SetFunction(u, std::vector<Rational>(u->size(), Rational(0)));
  }
  static SetFunction of_charge(const Charge& c) {
    return SetFunction(c.universe(), c.weights());
  }

  [[nodiscard]] const UniversePtr& universe() const { return u_; }
  [[nodiscard]] const Rational& atom(std::size_t i) const { return atoms_.at(i); }
  [[nodiscard]] const std::vector<Rational>& atoms() const { return atoms_; }

  [[nodiscard]] Rational eval(const Subset& b) const {
    require_same_universe(u_, b.universe(), "SetFunction::eval");
    Rational s = 0;
    for (std::size_t i : b.members()) s += atoms_[i];
    return s;
  }

  friend SetFunction operator+(const SetFunction& a, const SetFunction& b) {
    require_same_universe(a.u_, b.u_, "SetFunction::operator+");
    std::vector<Rational> v = a.atoms_;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += b.atoms_[i];
    return SetFunction(a.u_, std::move(v));
  }
  friend SetFunction operator-(const SetFunction& a, const SetFunction& b) {
    require_same_universe(a.u_, b.u_, "SetFunction::operator-");
    std::vector<Rational> v = a.atoms_;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= b.atoms_[i];
    return SetFunction(a.u_, std::move(v));
  }
  friend SetFunction operator*(const Rational& c, const SetFunction& f) {
    std::vector<Rational> v = f.atoms_;
    for (auto& x : v) x *= c;
    return SetFunction(f.u_, std::move(v));
  }

  friend bool operator==(const SetFunction& a, const SetFunction& b) {
    return same_universe(a.u_, b.u_) && a.atoms_ == b.atoms_;
  }
  friend bool operator!=(const SetFunction& a, const SetFunction& b) { return !(a == b); }

 private:
  UniversePtr u_;
  std::vector<Rational> atoms_;
};

/// Sup over all subsets of |f(B)|. For an additive function this is attained
/// at the positive or the negative support, so it equals
/// max(sum of positive atoms, -(sum of negative atoms)).
inline Rational norm_sup(const SetFunction& f) {
  Rational pos = 0, neg = 0;
  for (const auto& a : f.atoms()) {
    if (a.is_positive()) pos += a;
    if (a.is_negative()) neg += a;
  }
  return pos >= -neg ? pos : -neg;
}

/// Literal 2^n sweep of the same sup, for cross-checking (n <= 16).
inline Rational norm_sup_exhaustive(const SetFunction& f) {
  std::size_t n = f.universe()->size();
  if (n > axioms::kExhaustiveLimit)
    throw BudgetError("norm_sup_exhaustive: limited to 16 points");
  Rational best = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    Rational s = 0;
    for (std::size_t i = 0; i < n; ++i)
      if ((bits >> i) & 1U) s += f.atom(i);
    if (s.abs() > best) best = s.abs();
  }
  return best;
}

// ---------------------------------------------------------------------------
// Curvature load and the update operator
// ---------------------------------------------------------------------------

/// The observed curvature load of B: the pair mass of (B x X) n G,
/// i.e. the sum of m(x) m(y) over pairs (x,y) in G with x in B.
inline Rational curvature_load(const Datum& d, const Subset& b) {
  require_same_universe(d.universe(), b.universe(), "curvature_load");
  Rational acc = 0;
  for (std::size_t x : b.members()) {
    if (d.mu().weight(x).is_zero()) continue;
    Rational row = 0;
    for (std::size_t y = 0; y < d.size(); ++y)
      if (d.G().contains(x, y)) row += d.mu().weight(y);
    acc += d.mu().weight(x) * row;
  }
  return acc;
}

/// The curvature load as an additive set function (its atoms are the
/// per-point loads).
inline SetFunction curvature_load_function(const Datum& d) {
  std::vector<Rational> atoms(d.size(), Rational(0));
  for (std::size_t x = 0; x < d.size(); ++x)
    atoms[x] = curvature_load(d, Subset::of_point(d.universe(), x));
  return SetFunction(d.universe(), std::move(atoms));
}

/// One application of the update operator:
///   (T f)(B) = mu(B) + eta * f(preimage(B)).
/// The result is additive with atoms t(x) = m(x) + eta * f(preimage({x} n R)).
inline SetFunction apply_T(const Datum& d, const SetFunction& f) {
  require_same_universe(d.universe(), f.universe(), "apply_T");
  std::vector<Rational> atoms(d.size(), Rational(0));
  for (std::size_t x = 0; x < d.size(); ++x) {
    atoms[x] = d.mu().weight(x);
    if (d.R().contains(x)) {
      Subset fiber = d.pi().preimage(Subset::of_point(d.universe(), x));
      atoms[x] += d.eta() * f.eval(fiber);
    }
  }
  return SetFunction(d.universe(), std::move(atoms));
}

namespace detail {

inline void require_eta_lt_1(const Datum& d, const char* who) {
  if (d.eta() == 1)
    throw DomainError(std::string(who) + ": eta = 1 makes the geometric factor 1/(1-eta) diverge");
}

inline void require_axiom_I(const Datum& d, const char* who) {
  Verdict v = axioms::check_axiom_I(d);
  if (!v.holds)
    throw PreconditionError(std::string(who) + ": map is not an idempotent retraction (" +
                            v.note + ")");
}

}  // namespace detail

/// The unique additive fixed point of the update operator for eta < 1:
///   f_*(B) = mu(B) + eta/(1-eta) * mu(preimage(B)).
/// Requires the map to be a genuine retraction (law I), which makes the
/// closed form a fixed point via preimage idempotence.
inline SetFunction fixed_point_closed_form(const Datum& d) {
  detail::require_eta_lt_1(d, "fixed_point_closed_form");
  detail::require_axiom_I(d, "fixed_point_closed_form");
  Rational factor = d.eta() / (Rational(1) - d.eta());
  std::vector<Rational> atoms(d.size(), Rational(0));
  for (std::size_t x = 0; x < d.size(); ++x) {
    atoms[x] = d.mu().weight(x);
    if (d.R().contains(x)) {
      Subset fiber = d.pi().preimage(Subset::of_point(d.universe(), x));
      atoms[x] += factor * d.mu().eval(fiber);
    }
  }
  return SetFunction(d.universe(), std::move(atoms));
}

/// One step of the Banach iteration together with its exact a priori bound
/// eta^n * ||f0 - f_*|| and the exact achieved distance ||f_n - f_*||.
struct IterationStep {
  SetFunction f;
  Rational bound;
  Rational distance;
};

/// The trajectory f_1 .. f_steps of the update operator from f0, each step
/// carrying the exact geometric error bound. With exact arithmetic the
/// iteration never lands on the fixed point for eta > 0; convergence is
/// witnessed by the bounds, which this function verifies before returning.
inline std::vector<IterationStep> iterate_T(const Datum& d, const SetFunction& f0,
                                            std::size_t steps) {
  detail::require_eta_lt_1(d, "iterate_T");
  detail::require_axiom_I(d, "iterate_T");
  SetFunction fstar = fixed_point_closed_form(d);
  Rational base = norm_sup(f0 - fstar);
  std::vector<IterationStep> out;
  SetFunction f = f0;
  Rational factor = 1;
  for (std::size_t n = 1; n <= steps; ++n) {
    f = apply_T(d, f);
    factor *= d.eta();
    Rational dist = norm_sup(f - fstar);
    Rational bound = factor * base;
    if (dist > bound)
      throw Error("iterate_T: geometric bound violated at step " + std::to_string(n) +
                  " (distance " + dist.str() + " > bound " + bound.str() + ")");
    out.push_back({f, bound, dist});
  }
  return out;
}

/// Partial sum of the expansion f_*(B) = sum_n eta^n mu(preimage^n(B)),
/// summed for n = 0..N. Under law I the n-fold preimage stabilizes after one
/// application, so the tail telescopes geometrically.
inline Rational neumann_partial(const Datum& d, const Subset& b, std::size_t n_terms) {
  detail::require_eta_lt_1(d, "neumann_partial");
  detail::require_axiom_I(d, "neumann_partial");
  Rational acc = 0;
  Rational factor = 1;
  Subset s = b;
  for (std::size_t n = 0; n <= n_terms; ++n) {
    if (n > 0) {
      s = d.pi().preimage(s);
      factor *= d.eta();
    }
    acc += factor * d.mu().eval(s);
  }
  return acc;
}

/// Decides whether the curvature load coincides with the unique fixed point
/// (atom by atom, hence everywhere). Equivalent to law III(c) for data
/// satisfying laws I and II with eta < 1.
inline Verdict check_identification(const Datum& d) {
  detail::require_eta_lt_1(d, "check_identification");
  detail::require_axiom_I(d, "check_identification");
  if (!axioms::check_axiom_II(d).holds)
    throw PreconditionError("check_identification: relation fails law II");
  SetFunction load = curvature_load_function(d);
  SetFunction fstar = fixed_point_closed_form(d);
  for (std::size_t x = 0; x < d.size(); ++x) {
    if (load.atom(x) != fstar.atom(x))
      return Verdict::fail_values(Witness::subset(Subset::of_point(d.universe(), x)),
                                  load.atom(x), fstar.atom(x),
                                  "curvature load differs from the fixed point");
  }
  return Verdict::pass("curvature load equals the unique fixed point");
}

// ---------------------------------------------------------------------------
// Decoupling / reduction onto R
// ---------------------------------------------------------------------------

/// Verdict of the fiber-slack test plus, when it holds, the confirmation
/// that all curvature mass lives on R x R and the closed-form reduction
/// load(B) = mu(B)/(1-eta) on subsets of R.
struct DecouplingReport {
  bool holds = true;
  Witness witness{};
  Rational slack_mass = 0;             // pair mass of the violating fiber slack
  Rational off_core_pair_mass = 0;     // pair mass of G outside R x R (when holds)
  bool support_reduction_holds = false;
  Verdict closed_form;                 // load(B) = mu(B)/(1-eta) on checked B
  // Per retained point r: (index, load({r}), mu({r})/(1-eta)).
  std::vector<std::pair<std::size_t, std::pair<Rational, Rational>>> reduction_values;
};

/// The global decoupling condition: every fiber's slack F_r \ {r} carries
/// zero curvature pair mass. Singleton fibers suffice by additivity; the
/// exhaustive mode sweeps every subset of R. Requires an admissible datum
/// with eta < 1.
inline DecouplingReport check_decoupling(const Datum& d, Mode mode = Mode::singletons) {
  detail::require_eta_lt_1(d, "check_decoupling");
  if (!axioms::check_admissible(d).admissible)
    throw PreconditionError("check_decoupling: datum is not admissible");
  axioms::detail::guard_exhaustive(d, mode, "check_decoupling");

  DecouplingReport rep;
  for (std::size_t r : d.R().members()) {
    Subset point = Subset::of_point(d.universe(), r);
    Subset slack = d.pi().preimage(point).minus(point);
    Rational mass = curvature_load(d, slack);
    if (!mass.is_zero()) {
      rep.holds = false;
      rep.witness = Witness::subset(slack);
      rep.slack_mass = mass;
      return rep;
    }
  }
  if (mode == Mode::exhaustive) {
    auto r_members = d.R().members();
    std::size_t k = r_members.size();
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
      Subset b = Subset::none(d.universe());
      for (std::size_t i = 0; i < k; ++i)
        if ((bits >> i) & 1U) b = b.unite(Subset::of_point(d.universe(), r_members[i]));
      Subset slack = d.pi().preimage(b).minus(b);
      Rational mass = curvature_load(d, slack);
      if (!mass.is_zero()) {
        rep.holds = false;
        rep.witness = Witness::subset(slack);
        rep.slack_mass = mass;
        return rep;
      }
    }
  }

  // Decoupling established: confirm the curvature support lies in R x R ...
  Rational off_core = 0;
  for (std::size_t x = 0; x < d.size(); ++x)
    for (std::size_t y = 0; y < d.size(); ++y)
      if (d.G().contains(x, y) && !(d.R().contains(x) && d.R().contains(y)))
        off_core += d.mu().weight(x) * d.mu().weight(y);
  rep.off_core_pair_mass = off_core;
  rep.support_reduction_holds = off_core.is_zero();

  // ... and the closed-form reduction on R.
  Rational geom = Rational(1) / (Rational(1) - d.eta());
  rep.closed_form = Verdict::pass();
  for (std::size_t r : d.R().members()) {
    Subset point = Subset::of_point(d.universe(), r);
    Rational load = curvature_load(d, point);
    Rational expected = d.mu().eval(point) * geom;
    rep.reduction_values.push_back({r, {load, expected}});
    if (rep.closed_form.holds && load != expected)
      rep.closed_form = Verdict::fail_values(Witness::subset(point), load, expected,
                                             "reduced load differs from mu(B)/(1-eta)");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Global constraint and the feasibility window
// ---------------------------------------------------------------------------

/// The whole-space instance of the coupling law pins the total pair mass:
/// (1-eta) * pair_mass(G) = mu(X). Reported with both raw values; when the
/// total mass is positive and eta < 1, also checks the normalized form
/// pair_mass(G) = mu(X)/(1-eta).
struct GlobalConstraintReport {
  Rational pair_mass;       // pair mass of G
  Rational total_mass;      // mu(X)
  bool holds = false;       // (1-eta) * pair_mass == total_mass
  std::optional<Rational> normalized_expectation;  // mu(X)/(1-eta) when defined
  bool normalized_holds = false;
};

inline GlobalConstraintReport sigma_global_constraint(const Datum& d) {
  GlobalConstraintReport rep{d.mu().product_eval(d.G()), d.total_mass()};
  rep.holds = (Rational(1) - d.eta()) * rep.pair_mass == rep.total_mass;
  if (rep.total_mass.is_positive() && d.eta() < 1) {
    rep.normalized_expectation = rep.total_mass / (Rational(1) - d.eta());
    rep.normalized_holds = rep.pair_mass == *rep.normalized_expectation;
  }
  return rep;
}

/// The eta values compatible with total mass at most M: [0, 1 - 1/M],
/// intersected with [0, 1). Mass bounds below 1 admit no eta at all.
struct EtaWindow {
  bool feasible = false;
  Rational lo;  // meaningful only when feasible
  Rational hi;
};

inline EtaWindow eta_feasibility(const Rational& m_bound) {
  if (!m_bound.is_positive()) throw DomainError("eta_feasibility: mass bound must be positive");
  Rational hi = Rational(1) - Rational(1) / m_bound;
  if (hi.is_negative()) return {};
  return {true, Rational(0), hi};
}

}  // namespace structura::coupling
