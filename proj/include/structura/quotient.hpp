#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "structura/axioms.hpp"
#include "structura/classify.hpp"
#include "structura/core.hpp"
#include "structura/coupling.hpp"
#include "structura/morphisms.hpp"

namespace structura::quotient {

/// The preimage fibers of the retained points. Requires a genuine retraction
/// (law I), under which the fibers partition the universe and each retained
/// point sits inside its own fiber.
inline std::vector<std::pair<std::size_t, Subset>> fibers(const Datum& d) {
  Verdict v = axioms::check_axiom_I(d);
  if (!v.holds) throw PreconditionError("fibers: " + v.note);
  std::vector<std::pair<std::size_t, Subset>> out;
  for (std::size_t r : d.R().members())
    out.emplace_back(r, d.pi().preimage(Subset::of_point(d.universe(), r)));
  return out;
}

/// Per-fiber mass audit: every fiber minus its retained point should carry
/// zero mass, and the whole complement of R should carry zero mass. This is
/// the mass-concentration consequence of law III(b); the check evaluates it
/// so that violating data produce a witnessed failing report. Finiteness of
/// R (the regularity hypothesis used) is automatic here.
struct FiberReport {
  bool holds = true;
  Witness witness{};
  Rational violating_mass = 0;
  struct Entry {
    std::size_t retained_point;
    Subset fiber;
    Rational slack_mass;
  };
  std::vector<Entry> entries;
  Rational off_core_mass = 0;  // mu(X \ R)
};

inline FiberReport check_fiber_annihilation(const Datum& d) {
  FiberReport rep;
  for (auto& [r, fiber] : fibers(d)) {
    Subset slack = fiber.minus(Subset::of_point(d.universe(), r));
    Rational mass = d.mu().eval(slack);
    rep.entries.push_back({r, fiber, mass});
    if (!mass.is_zero() && rep.holds) {
      rep.holds = false;
      rep.witness = Witness::subset(slack);
      rep.violating_mass = mass;
    }
  }
  rep.off_core_mass = d.mu().eval(d.R().complement());
  if (!rep.off_core_mass.is_zero() && rep.holds) {
    rep.holds = false;
    rep.witness = Witness::subset(d.R().complement());
    rep.violating_mass = rep.off_core_mass;
  }
  return rep;
}

/// The identity-retraction core: universe R, restricted weights, identity
/// map, relation cut down to R x R, budget mu(R), same eta. Definable for
/// any datum whose retained set exists and carries positive mass (the budget
/// of a datum must be positive, so a massless core is not representable).
inline Datum restrict_to_core(const Datum& d) {
  auto r_members = d.R().members();
  if (r_members.empty()) throw DomainError("restrict_to_core: R is empty");
  Rational core_mass = d.mu().eval(d.R());
  if (!core_mass.is_positive())
    throw DomainError("restrict_to_core: core carries zero mass, which no positive budget fits");

  std::vector<std::string> labels;
  std::vector<Rational> weights;
  for (std::size_t r : r_members) {
    labels.push_back(d.universe()->label(r));
    weights.push_back(d.mu().weight(r));
  }
  auto u = Universe::make(labels);
  Relation g(u);
  for (std::size_t a = 0; a < r_members.size(); ++a)
    for (std::size_t b = 0; b < r_members.size(); ++b)
      if (d.G().contains(r_members[a], r_members[b])) g.set(a, b, true);

  Subset all = Subset::all(u);
  return Datum(u, Charge(u, weights), all, Subset::none(u), Retraction::identity(u, all), g,
               core_mass, d.eta());
}

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

/// One part of the factorization statement: whether its hypotheses are met
/// (with the missing ones named), and the verdict when they are.
struct FactorizationPart {
  bool applicable = false;
  std::string missing;  // names the unmet hypotheses when !applicable
  Verdict verdict;      // meaningful only when applicable
};

/// The three-part reduction onto the core:
///   (i)   the curvature load of any B equals the core's load of B n R
///         [needs law I and III(b)],
///   (ii)  the coupling law holds on the datum iff it holds on the core
///         [needs law I and III(b)],
///   (iii) the datum is admissible iff its core is admissible
///         [needs laws I, II, III(a), III(b), and R u I = X].
struct FactorizationReport {
  FactorizationPart load_reduction;
  FactorizationPart law_equivalence;
  FactorizationPart admissibility_equivalence;
  std::string note;
};

inline FactorizationReport check_factorization(const Datum& d,
                                               axioms::Mode mode = axioms::Mode::singletons) {
  if (d.eta() == 1) throw DomainError("check_factorization: requires eta < 1");

  Verdict law_I = axioms::check_axiom_I(d);
  Verdict law_II = axioms::check_axiom_II(d);
  Verdict law_IIIa = axioms::check_axiom_III_a(d);
  Verdict law_IIIb = axioms::check_axiom_III_b(d, mode);
  bool tiles = d.R().unite(d.I()) == Subset::all(d.universe());

  auto missing_of = [&](bool need_II_a_tiling) {
    std::string s;
    auto add = [&s](const char* name) {
      if (!s.empty()) s += ", ";
      s += name;
    };
    if (!law_I.holds) add("law I");
    if (need_II_a_tiling && !law_II.holds) add("law II");
    if (need_II_a_tiling && !law_IIIa.holds) add("law III(a)");
    if (!law_IIIb.holds) add("law III(b)");
    if (need_II_a_tiling && !tiles) add("R and I must tile the universe");
    return s;
  };

  FactorizationReport rep;

  bool core_ok = true;
  std::string core_problem;
  try {
    (void)restrict_to_core(d);
  } catch (const DomainError& e) {
    core_ok = false;
    core_problem = e.what();
  }

  // (i) and (ii)
  std::string missing12 = missing_of(false);
  if (!missing12.empty() || !core_ok) {
    std::string why = missing12;
    if (!core_ok) why += (why.empty() ? "" : "; ") + core_problem;
    rep.load_reduction = {false, why, {}};
    rep.law_equivalence = {false, why, {}};
  } else {
    Datum core = restrict_to_core(d);
    auto core_index_of = [&](std::size_t r) {
      return core.universe()->index_of(d.universe()->label(r));
    };

    FactorizationPart part_i;
    part_i.applicable = true;
    part_i.verdict = Verdict::pass();
    for (std::size_t x = 0; x < d.size(); ++x) {
      Subset atom = Subset::of_point(d.universe(), x);
      Rational lhs = coupling::curvature_load(d, atom);
      Rational rhs = 0;
      if (d.R().contains(x))
        rhs = coupling::curvature_load(core,
                                       Subset::of_point(core.universe(), core_index_of(x)));
      if (lhs != rhs) {
        part_i.verdict = Verdict::fail_values(Witness::subset(atom), lhs, rhs,
                                              "load differs from the core's load");
        break;
      }
    }
    rep.load_reduction = part_i;

    FactorizationPart part_ii;
    part_ii.applicable = true;
    bool law_d = axioms::check_axiom_III_c(d, mode).holds;
    bool law_core = axioms::check_axiom_III_c(core, mode).holds;
    part_ii.verdict =
        law_d == law_core
            ? Verdict::pass(std::string("coupling law ") + (law_d ? "holds" : "fails") +
                            " on both the datum and its core")
            : Verdict::fail(Witness::none(), std::string("coupling law verdicts diverge: datum ") +
                                                 (law_d ? "holds" : "fails") + ", core " +
                                                 (law_core ? "holds" : "fails"));
    rep.law_equivalence = part_ii;
  }

  // (iii)
  std::string missing3 = missing_of(true);
  if (!missing3.empty() || !core_ok) {
    std::string why = missing3;
    if (!core_ok) why += (why.empty() ? "" : "; ") + core_problem;
    rep.admissibility_equivalence = {false, why, {}};
    if (core_ok && !law_IIIb.holds) {
      bool adm_d = axioms::check_admissible(d, mode).admissible;
      bool adm_core = axioms::check_admissible(restrict_to_core(d), mode).admissible;
      if (adm_d != adm_core)
        rep.note = "law III(b) is essential here: the core is " +
                   std::string(adm_core ? "admissible" : "not admissible") +
                   " while the datum is " + (adm_d ? "admissible" : "not admissible");
    }
  } else {
    Datum core = restrict_to_core(d);
    bool adm_d = axioms::check_admissible(d, mode).admissible;
    bool adm_core = axioms::check_admissible(core, mode).admissible;
    FactorizationPart part_iii;
    part_iii.applicable = true;
    part_iii.verdict =
        adm_d == adm_core
            ? Verdict::pass(std::string("datum and core are both ") +
                            (adm_d ? "admissible" : "not admissible"))
            : Verdict::fail(Witness::none(),
                            std::string("admissibility diverges: datum ") +
                                (adm_d ? "admissible" : "not admissible") + ", core " +
                                (adm_core ? "admissible" : "not admissible"));
    rep.admissibility_equivalence = part_iii;
  }

  return rep;
}

/// Restriction acting on maps: cut a verified morphism down to the two cores.
/// Well-defined because a verified morphism sends retained points to retained
/// points. Both endpoints must satisfy laws I and III(b) (the fiber
/// hypotheses), and the map must pass check_morphism.
inline morphisms::Morphism restrict_morphism(const morphisms::Morphism& phi) {
  auto check_endpoint = [](const Datum& d, const char* which) {
    if (!axioms::check_axiom_I(d).holds)
      throw PreconditionError(std::string("restrict_morphism: ") + which + " fails law I");
    if (!axioms::check_axiom_III_b(d).holds)
      throw PreconditionError(std::string("restrict_morphism: ") + which + " fails law III(b)");
  };
  check_endpoint(phi.source, "source");
  check_endpoint(phi.target, "target");
  if (!morphisms::check_morphism(phi).holds)
    throw PreconditionError("restrict_morphism: map does not pass the morphism clauses");

  Datum src_core = restrict_to_core(phi.source);
  Datum dst_core = restrict_to_core(phi.target);
  std::vector<std::size_t> m;
  for (std::size_t r : phi.source.R().members()) {
    const std::string& target_label = phi.target.universe()->label(phi.map[r]);
    m.push_back(dst_core.universe()->index_of(target_label));
  }
  return morphisms::Morphism(std::move(src_core), std::move(dst_core), std::move(m));
}

/// Closed form of the curvature load through the core's blocks:
///   load(B) = sum_k mu(B n R n C_k) * mu(C_k),
/// where C_k are the classes of the core relation. Requires an admissible
/// datum; confirms agreement with the direct pair sum and the blockwise
/// mass dichotomy before returning.
inline Rational curvature_load_closed_form(const Datum& d, const Subset& b) {
  require_same_universe(d.universe(), b.universe(), "curvature_load_closed_form");
  if (!axioms::check_admissible(d).admissible)
    throw PreconditionError("curvature_load_closed_form: datum is not admissible");
  Datum core = restrict_to_core(d);

  classify::DichotomyReport dich = classify::check_block_dichotomy(core);
  if (!dich.holds)
    throw Error("curvature_load_closed_form: admissible datum whose core fails the dichotomy");

  Subset b_core = Subset::none(core.universe());
  for (std::size_t r : b.intersect(d.R()).members())
    b_core = b_core.unite(
        Subset::of_point(core.universe(), core.universe()->index_of(d.universe()->label(r))));

  Rational value = classify::block_curvature_load(core, b_core);
  Rational direct = coupling::curvature_load(d, b);
  if (value != direct)
    throw Error("curvature_load_closed_form: block formula disagrees with the pair sum (" +
                value.str() + " vs " + direct.str() + ")");
  return value;
}

}  // namespace structura::quotient
