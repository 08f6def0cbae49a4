#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "structura/rational.hpp"

namespace structura {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Base class for every error this library raises on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two objects built over different point sets were combined.
struct UniverseMismatchError : Error {
  using Error::Error;
};

/// A constructor's structural invariant was violated (overlapping R and I,
/// negative weight, retraction leaving its target set, ...).
struct InvariantError : Error {
  using Error::Error;
};

/// An operation was called on input outside its stated hypotheses
/// (e.g. a fixed-point query on a datum whose retraction is not idempotent).
struct PreconditionError : Error {
  using Error::Error;
};

/// The value asked for does not exist in the requested regime (e.g. the
/// geometric factor 1/(1-eta) at eta = 1).
struct DomainError : Error {
  using Error::Error;
};

/// An enumeration would exceed its configured work budget.
struct BudgetError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Universe
// ---------------------------------------------------------------------------

class Universe;
using UniversePtr = std::shared_ptr<const Universe>;

/// Immutable finite point set with distinct string labels. All other value
/// types (subsets, charges, relations, retractions) refer to one of these and
/// refuse to mix universes.
class Universe {
 public:
  static UniversePtr make(std::vector<std::string> labels) {
    return std::shared_ptr<const Universe>(new Universe(std::move(labels)));
  }

  [[nodiscard]] std::size_t size() const { return labels_.size(); }
  [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
  [[nodiscard]] const std::string& label(std::size_t i) const { return labels_.at(i); }

  [[nodiscard]] std::optional<std::size_t> find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  [[nodiscard]] std::size_t index_of(const std::string& label) const {
    auto i = find(label);
    if (!i) throw InvariantError("Universe: unknown point '" + label + "'");
    return *i;
  }

  friend bool operator==(const Universe& a, const Universe& b) { return a.labels_ == b.labels_; }

 private:
  explicit Universe(std::vector<std::string> labels) : labels_(std::move(labels)) {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!index_.emplace(labels_[i], i).second)
        throw InvariantError("Universe: duplicate point '" + labels_[i] + "'");
    }
  }

  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// True when the two handles denote the same point set (same object or equal
/// label sequences).
inline bool same_universe(const UniversePtr& a, const UniversePtr& b) {
  return a == b || (a && b && *a == *b);
}

inline void require_same_universe(const UniversePtr& a, const UniversePtr& b, const char* what) {
  if (!same_universe(a, b)) throw UniverseMismatchError(std::string(what) + ": universe mismatch");
}

// ---------------------------------------------------------------------------
// Subset
// ---------------------------------------------------------------------------

/// A subset of a universe, stored as a membership mask.
class Subset {
 public:
  Subset(UniversePtr u, std::vector<bool> mask) : u_(std::move(u)), mask_(std::move(mask)) {
    if (mask_.size() != u_->size()) throw InvariantError("Subset: mask size mismatch");
  }

  static Subset none(UniversePtr u) {
    auto n = u->size();
    return Subset(std::move(u), std::vector<bool>(n, false));
  }
  static Subset all(UniversePtr u) {
    auto n = u->size();
    return Subset(std::move(u), std::vector<bool>(n, true));
  }
  static Subset of_point(UniversePtr u, std::size_t i) {
    Subset s = none(std::move(u));
    s.mask_.at(i) = true;
    return s;
  }
  static Subset of_labels(const UniversePtr& u, const std::vector<std::string>& labels) {
    Subset s = none(u);
    for (const auto& l : labels) s.mask_[u->index_of(l)] = true;
    return s;
  }
  /// Decode a bit pattern over the universe (bit i = membership of point i).
  static Subset of_bits(UniversePtr u, std::uint64_t bits) {
    Subset s = none(std::move(u));
    for (std::size_t i = 0; i < s.size_hint(); ++i) s.mask_[i] = (bits >> i) & 1U;
    return s;
  }

  [[nodiscard]] const UniversePtr& universe() const { return u_; }
  [[nodiscard]] bool contains(std::size_t i) const { return mask_.at(i); }
  [[nodiscard]] bool empty() const {
    return std::none_of(mask_.begin(), mask_.end(), [](bool b) { return b; });
  }
  [[nodiscard]] std::size_t count() const {
    return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), true));
  }
  [[nodiscard]] std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mask_.size(); ++i)
      if (mask_[i]) out.push_back(i);
    return out;
  }
  [[nodiscard]] std::vector<std::string> member_labels() const {
    std::vector<std::string> out;
    for (std::size_t i : members()) out.push_back(u_->label(i));
    return out;
  }

  [[nodiscard]] Subset unite(const Subset& o) const {
    return zip(o, [](bool a, bool b) { return a || b; });
  }
  [[nodiscard]] Subset intersect(const Subset& o) const {
    return zip(o, [](bool a, bool b) { return a && b; });
  }
  [[nodiscard]] Subset minus(const Subset& o) const {
    return zip(o, [](bool a, bool b) { return a && !b; });
  }
  [[nodiscard]] Subset complement() const {
    Subset s = *this;
    s.mask_.flip();
    return s;
  }
  [[nodiscard]] bool subset_of(const Subset& o) const {
    require_same_universe(u_, o.u_, "Subset::subset_of");
    for (std::size_t i = 0; i < mask_.size(); ++i)
      if (mask_[i] && !o.mask_[i]) return false;
    return true;
  }
  [[nodiscard]] bool disjoint_from(const Subset& o) const { return intersect(o).empty(); }

  friend bool operator==(const Subset& a, const Subset& b) {
    return same_universe(a.u_, b.u_) && a.mask_ == b.mask_;
  }
  friend bool operator!=(const Subset& a, const Subset& b) { return !(a == b); }

 private:
  [[nodiscard]] std::size_t size_hint() const { return mask_.size(); }

  template <class F>
  [[nodiscard]] Subset zip(const Subset& o, F f) const {
    require_same_universe(u_, o.u_, "Subset");
    Subset s = *this;
    for (std::size_t i = 0; i < mask_.size(); ++i) s.mask_[i] = f(mask_[i], o.mask_[i]);
    return s;
  }

  UniversePtr u_;
  std::vector<bool> mask_;
};

// ---------------------------------------------------------------------------
// Relation
// ---------------------------------------------------------------------------

/// A binary relation on a universe: a set of ordered point pairs, stored as a
/// dense adjacency mask. Doubles as the "subset of X x X" argument of the
/// product charge.
class Relation {
 public:
  explicit Relation(UniversePtr u) : u_(std::move(u)), adj_(u_->size() * u_->size(), false) {}

  static Relation diagonal(const UniversePtr& u) {
    Relation r(u);
    for (std::size_t i = 0; i < u->size(); ++i) r.set(i, i, true);
    return r;
  }
  static Relation total(const UniversePtr& u) {
    Relation r(u);
    std::fill(r.adj_.begin(), r.adj_.end(), true);
    return r;
  }
  static Relation of_pairs(const UniversePtr& u,
                           const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    Relation r(u);
    for (auto [a, b] : pairs) r.set(a, b, true);
    return r;
  }

  [[nodiscard]] const UniversePtr& universe() const { return u_; }
  [[nodiscard]] std::size_t size() const { return u_->size(); }

  [[nodiscard]] bool contains(std::size_t a, std::size_t b) const { return adj_.at(idx(a, b)); }
  void set(std::size_t a, std::size_t b, bool v) { adj_.at(idx(a, b)) = v; }

  [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < size(); ++a)
      for (std::size_t b = 0; b < size(); ++b)
        if (contains(a, b)) out.emplace_back(a, b);
    return out;
  }
  [[nodiscard]] std::size_t pair_count() const {
    return static_cast<std::size_t>(std::count(adj_.begin(), adj_.end(), true));
  }

  [[nodiscard]] Relation transpose() const {
    Relation r(u_);
    for (std::size_t a = 0; a < size(); ++a)
      for (std::size_t b = 0; b < size(); ++b) r.set(b, a, contains(a, b));
    return r;
  }

  /// Relational composition: (a,c) in compose(S) iff exists b with
  /// (a,b) in *this and (b,c) in S.
  [[nodiscard]] Relation compose(const Relation& s) const {
    require_same_universe(u_, s.u_, "Relation::compose");
    Relation r(u_);
    for (std::size_t a = 0; a < size(); ++a)
      for (std::size_t b = 0; b < size(); ++b) {
        if (!contains(a, b)) continue;
        for (std::size_t c = 0; c < size(); ++c)
          if (s.contains(b, c)) r.set(a, c, true);
      }
    return r;
  }

  [[nodiscard]] Relation unite(const Relation& o) const {
    require_same_universe(u_, o.u_, "Relation::unite");
    Relation r = *this;
    for (std::size_t i = 0; i < adj_.size(); ++i) r.adj_[i] = r.adj_[i] || o.adj_[i];
    return r;
  }
  [[nodiscard]] Relation intersect(const Relation& o) const {
    require_same_universe(u_, o.u_, "Relation::intersect");
    Relation r = *this;
    for (std::size_t i = 0; i < adj_.size(); ++i) r.adj_[i] = r.adj_[i] && o.adj_[i];
    return r;
  }
  [[nodiscard]] Relation minus(const Relation& o) const {
    require_same_universe(u_, o.u_, "Relation::minus");
    Relation r = *this;
    for (std::size_t i = 0; i < adj_.size(); ++i) r.adj_[i] = r.adj_[i] && !o.adj_[i];
    return r;
  }
  [[nodiscard]] bool subset_of(const Relation& o) const {
    require_same_universe(u_, o.u_, "Relation::subset_of");
    for (std::size_t i = 0; i < adj_.size(); ++i)
      if (adj_[i] && !o.adj_[i]) return false;
    return true;
  }

  [[nodiscard]] bool is_reflexive() const {
    for (std::size_t i = 0; i < size(); ++i)
      if (!contains(i, i)) return false;
    return true;
  }
  [[nodiscard]] bool is_symmetric() const { return *this == transpose(); }
  [[nodiscard]] bool is_idempotent() const { return compose(*this) == *this; }
  [[nodiscard]] bool is_transitive() const { return compose(*this).subset_of(*this); }

  friend bool operator==(const Relation& a, const Relation& b) {
    return same_universe(a.u_, b.u_) && a.adj_ == b.adj_;
  }
  friend bool operator!=(const Relation& a, const Relation& b) { return !(a == b); }

 private:
  [[nodiscard]] std::size_t idx(std::size_t a, std::size_t b) const {
    if (a >= size() || b >= size()) throw InvariantError("Relation: point index out of range");
    return a * size() + b;
  }

  UniversePtr u_;
  std::vector<bool> adj_;
};

// ---------------------------------------------------------------------------
// Charge
// ---------------------------------------------------------------------------

/// A finitely additive, nonnegative set function on the power set of a finite
/// universe, determined by its point weights. The induced product charge on
/// pair sets is exposed alongside.
class Charge {
 public:
  Charge(UniversePtr u, std::vector<Rational> weights)
      : u_(std::move(u)), w_(std::move(weights)) {
    if (w_.size() != u_->size()) throw InvariantError("Charge: weight count mismatch");
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i].is_negative())
        throw InvariantError("Charge: negative weight at point '" + u_->label(i) + "'");
  }

  [[nodiscard]] const UniversePtr& universe() const { return u_; }
  [[nodiscard]] const Rational& weight(std::size_t i) const { return w_.at(i); }
  [[nodiscard]] const std::vector<Rational>& weights() const { return w_; }

  /// mu(B) = sum of weights over B.
  [[nodiscard]] Rational eval(const Subset& b) const {
    require_same_universe(u_, b.universe(), "Charge::eval");
    Rational s = 0;
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (b.contains(i)) s += w_[i];
    return s;
  }

  [[nodiscard]] Rational total() const {
    Rational s = 0;
    for (const auto& w : w_) s += w;
    return s;
  }

  /// Product charge of a pair set: sum of m(x) * m(y) over (x,y) in S.
  [[nodiscard]] Rational product_eval(const Relation& s) const {
    require_same_universe(u_, s.universe(), "Charge::product_eval");
    Rational acc = 0;
    for (std::size_t a = 0; a < u_->size(); ++a) {
      if (w_[a].is_zero()) continue;
      Rational row = 0;
      for (std::size_t b = 0; b < u_->size(); ++b)
        if (s.contains(a, b)) row += w_[b];
      acc += w_[a] * row;
    }
    return acc;
  }

  /// Product charge of a rectangle A x B: equals mu(A) * mu(B).
  [[nodiscard]] Rational product_eval_rectangle(const Subset& a, const Subset& b) const {
    return eval(a) * eval(b);
  }

  friend bool operator==(const Charge& a, const Charge& b) {
    return same_universe(a.u_, b.u_) && a.w_ == b.w_;
  }
  friend bool operator!=(const Charge& a, const Charge& b) { return !(a == b); }

 private:
  UniversePtr u_;
  std::vector<Rational> w_;
};

// ---------------------------------------------------------------------------
// Retraction
// ---------------------------------------------------------------------------

/// A total point map from the universe into a designated target subset.
/// Idempotence (fixing the target pointwise) is a checkable property, not a
/// construction invariant, so ill-behaved maps can be represented and
/// diagnosed.
class Retraction {
 public:
  Retraction(UniversePtr u, Subset target, std::vector<std::size_t> map)
      : u_(std::move(u)), target_(std::move(target)), map_(std::move(map)) {
    require_same_universe(u_, target_.universe(), "Retraction");
    if (map_.size() != u_->size()) throw InvariantError("Retraction: map size mismatch");
    for (std::size_t x = 0; x < map_.size(); ++x) {
      if (map_[x] >= u_->size())
        throw InvariantError("Retraction: image index out of range at '" + u_->label(x) + "'");
      if (!target_.contains(map_[x]))
        throw InvariantError("Retraction: point '" + u_->label(x) + "' maps to '" +
                             u_->label(map_[x]) + "' outside the target set");
    }
  }

  static Retraction identity(const UniversePtr& u, const Subset& target) {
    std::vector<std::size_t> m(u->size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = i;
    return Retraction(u, target, std::move(m));
  }

  [[nodiscard]] const UniversePtr& universe() const { return u_; }
  [[nodiscard]] const Subset& target() const { return target_; }
  [[nodiscard]] std::size_t map(std::size_t x) const { return map_.at(x); }
  [[nodiscard]] const std::vector<std::size_t>& map_vector() const { return map_; }

  /// True when every target point is fixed (the map is a retraction in the
  /// strict sense).
  [[nodiscard]] bool fixes_target() const {
    for (std::size_t i : target_.members())
      if (map_[i] != i) return false;
    return true;
  }

  [[nodiscard]] bool is_identity() const {
    for (std::size_t i = 0; i < map_.size(); ++i)
      if (map_[i] != i) return false;
    return true;
  }

  /// Set of fixed points {x : map(x) == x}.
  [[nodiscard]] Subset fixed_points() const {
    Subset s = Subset::none(u_);
    for (std::size_t i = 0; i < map_.size(); ++i)
      if (map_[i] == i) s = s.unite(Subset::of_point(u_, i));
    return s;
  }

  /// Preimage of a subset under the map.
  [[nodiscard]] Subset preimage(const Subset& b) const {
    require_same_universe(u_, b.universe(), "Retraction::preimage");
    std::vector<bool> mask(u_->size(), false);
    for (std::size_t x = 0; x < map_.size(); ++x) mask[x] = b.contains(map_[x]);
    return Subset(u_, std::move(mask));
  }

  /// n-fold iterated preimage (n >= 0; n == 0 gives B itself).
  [[nodiscard]] Subset preimage_iterate(const Subset& b, std::size_t n) const {
    Subset s = b;
    for (std::size_t k = 0; k < n; ++k) s = preimage(s);
    return s;
  }

  /// The map composed with itself.
  [[nodiscard]] Retraction compose_self() const {
    std::vector<std::size_t> m(map_.size());
    for (std::size_t x = 0; x < map_.size(); ++x) m[x] = map_[map_[x]];
    return Retraction(u_, target_, std::move(m));
  }

  friend bool operator==(const Retraction& a, const Retraction& b) {
    return same_universe(a.u_, b.u_) && a.target_ == b.target_ && a.map_ == b.map_;
  }
  friend bool operator!=(const Retraction& a, const Retraction& b) { return !(a == b); }

 private:
  UniversePtr u_;
  Subset target_;
  std::vector<std::size_t> map_;
};

// ---------------------------------------------------------------------------
// Datum
// ---------------------------------------------------------------------------

/// The full structural package: a finite point set X, a charge mu on it, a
/// distinguished decomposition pair (R, I), a total map into R, a binary
/// relation G, a positive budget scalar E0, and a contraction parameter eta.
///
/// Construction enforces only representability: R and I disjoint, weights
/// nonnegative, E0 > 0, 0 <= eta <= 1, map total into R. Whether the datum
/// satisfies the structural laws is the business of the checkers, so
/// deliberately broken data can be built and examined.
class Datum {
 public:
  Datum(UniversePtr u, Charge mu, Subset r, Subset i, Retraction pi, Relation g, Rational e0,
        Rational eta)
      : u_(std::move(u)),
        mu_(std::move(mu)),
        r_(std::move(r)),
        i_(std::move(i)),
        pi_(std::move(pi)),
        g_(std::move(g)),
        e0_(std::move(e0)),
        eta_(std::move(eta)) {
    require_same_universe(u_, mu_.universe(), "Datum(charge)");
    require_same_universe(u_, r_.universe(), "Datum(R)");
    require_same_universe(u_, i_.universe(), "Datum(I)");
    require_same_universe(u_, pi_.universe(), "Datum(map)");
    require_same_universe(u_, g_.universe(), "Datum(relation)");
    if (!r_.disjoint_from(i_)) throw InvariantError("Datum: R and I overlap");
    if (pi_.target() != r_) throw InvariantError("Datum: map target differs from R");
    if (!e0_.is_positive()) throw InvariantError("Datum: E0 must be positive");
    if (eta_.is_negative() || eta_ > 1) throw InvariantError("Datum: eta must lie in [0, 1]");
  }

  [[nodiscard]] const UniversePtr& universe() const { return u_; }
  [[nodiscard]] const Charge& mu() const { return mu_; }
  [[nodiscard]] const Subset& R() const { return r_; }
  [[nodiscard]] const Subset& I() const { return i_; }
  [[nodiscard]] const Retraction& pi() const { return pi_; }
  [[nodiscard]] const Relation& G() const { return g_; }
  [[nodiscard]] const Rational& E0() const { return e0_; }
  [[nodiscard]] const Rational& eta() const { return eta_; }

  [[nodiscard]] std::size_t size() const { return u_->size(); }
  [[nodiscard]] Rational total_mass() const { return mu_.total(); }

  friend bool operator==(const Datum& a, const Datum& b) {
    return same_universe(a.u_, b.u_) && a.mu_ == b.mu_ && a.r_ == b.r_ && a.i_ == b.i_ &&
           a.pi_ == b.pi_ && a.g_ == b.g_ && a.e0_ == b.e0_ && a.eta_ == b.eta_;
  }
  friend bool operator!=(const Datum& a, const Datum& b) { return !(a == b); }

 private:
  UniversePtr u_;
  Charge mu_;
  Subset r_;
  Subset i_;
  Retraction pi_;
  Relation g_;
  Rational e0_;
  Rational eta_;
};

// ---------------------------------------------------------------------------
// Witness / Verdict
// ---------------------------------------------------------------------------

/// Concrete evidence attached to a failed (or notable) check: a point, an
/// ordered pair, or a subset of the universe.
struct Witness {
  enum class Kind { none, point, pair, subset };

  Kind kind = Kind::none;
  std::size_t a = 0;
  std::size_t b = 0;
  std::vector<std::size_t> members;

  static Witness none() { return {}; }
  static Witness point(std::size_t i) {
    Witness w;
    w.kind = Kind::point;
    w.a = i;
    return w;
  }
  static Witness pair(std::size_t i, std::size_t j) {
    Witness w;
    w.kind = Kind::pair;
    w.a = i;
    w.b = j;
    return w;
  }
  static Witness subset(std::vector<std::size_t> ms) {
    Witness w;
    w.kind = Kind::subset;
    w.members = std::move(ms);
    return w;
  }
  static Witness subset(const Subset& s) { return subset(s.members()); }

  [[nodiscard]] std::string describe(const Universe& u) const {
    switch (kind) {
      case Kind::none:
        return "(none)";
      case Kind::point:
        return u.label(a);
      case Kind::pair:
        return "(" + u.label(a) + ", " + u.label(b) + ")";
      case Kind::subset: {
        std::string s = "{";
        for (std::size_t k = 0; k < members.size(); ++k) {
          if (k) s += ", ";
          s += u.label(members[k]);
        }
        return s + "}";
      }
    }
    return "(none)";
  }
};

/// Outcome of a single check: pass/fail, the first counterexample found, the
/// two sides of the violated (or confirmed) identity when meaningful, and a
/// free-form note.
struct Verdict {
  bool holds = true;
  Witness witness{};
  std::optional<Rational> lhs;
  std::optional<Rational> rhs;
  std::string note;

  explicit operator bool() const { return holds; }

  static Verdict pass(std::string note = "") {
    Verdict v;
    v.note = std::move(note);
    return v;
  }
  static Verdict fail(Witness w, std::string note = "") {
    Verdict v;
    v.holds = false;
    v.witness = std::move(w);
    v.note = std::move(note);
    return v;
  }
  static Verdict fail_values(Witness w, Rational lhs, Rational rhs, std::string note = "") {
    Verdict v = fail(std::move(w), std::move(note));
    v.lhs = std::move(lhs);
    v.rhs = std::move(rhs);
    return v;
  }
};

}  // namespace structura
