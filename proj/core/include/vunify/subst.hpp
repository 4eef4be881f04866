// Idempotent sorted substitutions and fresh-variable management.
#ifndef VUNIFY_SUBST_HPP
#define VUNIFY_SUBST_HPP

#include <map>
#include <string>
#include <vector>

#include "vunify/term.hpp"

namespace vunify {

class Theory;

/// Variable -> term map, kept idempotent: no binding image may contain a
/// domain variable. Bindings x -> x are never stored.
class Subst {
 public:
  Subst() = default;

  bool empty() const { return b_.empty(); }
  size_t size() const { return b_.size(); }
  bool binds(const Var& v) const { return b_.count(v) != 0; }
  /// Image of v, or v itself when unbound.
  Term get(const Theory& th, const Var& v) const;
  const std::map<Var, Term>& bindings() const { return b_; }

  /// Inserts a binding; the image must already be free of domain variables.
  void set(const Var& v, const Term& t);
  void erase(const Var& v) { b_.erase(v); }

  std::vector<Var> domain() const;

  bool operator==(const Subst& o) const { return b_ == o.b_; }

 private:
  std::map<Var, Term> b_;
};

/// Homomorphic application followed by re-canonicalization.
Term apply(const Theory& th, const Subst& s, const Term& t);

/// compose(s1,s2)(x) = apply(s2, s1(x)); re-idempotized over both domains.
/// Throws TheoryError when the composition cannot be made idempotent (cyclic).
Subst compose(const Theory& th, const Subst& s1, const Subst& s2);

Subst restrict_to(const Subst& s, const std::vector<Var>& w);

/// Union of substitutions with disjoint domains.
Subst union_disjoint(const Subst& a, const Subst& b);

bool equal_on(const Theory& th, const Subst& a, const Subst& b, const std::vector<Var>& w);

/// Counters for the two fresh-variable namespaces: #n (unification) and
/// %n (narrowing). Generated names never collide with parsed user variables
/// because the surface syntax rejects identifiers starting with '#' or '%'.
class FreshCounter {
 public:
  Var next_unify(SortId sort) { return Var{"#" + std::to_string(++unify_), sort, false}; }
  Var next_narrow(SortId sort) { return Var{"%" + std::to_string(++narrow_), sort, false}; }
  long unify_count() const { return unify_; }
  long narrow_count() const { return narrow_; }

 private:
  long unify_ = 0;
  long narrow_ = 0;
};

enum class FreshKind { Unify, Narrow };

/// Replaces every variable by a fresh one of the same sort (first-occurrence
/// order); returns the renamed term and the renaming used.
std::pair<Term, Subst> rename_apart(const Theory& th, const Term& t, FreshCounter& fresh,
                                    FreshKind kind);

}  // namespace vunify

#endif
