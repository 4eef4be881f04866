// Finitary unification and matching modulo B (free / C / AC per symbol).
//
// The AC case follows the classical basis method: flatten both layers, cancel
// common arguments, solve the induced linear Diophantine balance over argument
// multiplicities by minimal-solution enumeration, and combine covering subsets
// of basis vectors, recursing into alien subproblems.
#ifndef VUNIFY_AX_UNIFY_HPP
#define VUNIFY_AX_UNIFY_HPP

#include <optional>
#include <vector>

#include "vunify/subst.hpp"
#include "vunify/term.hpp"
#include "vunify/theory.hpp"

namespace vunify {

struct BProblem {
  std::vector<std::pair<Term, Term>> equations;
};

/// One element of a complete set of B-unifiers.
///
/// `subst` is the finalized form: restricted to the problem variables and
/// padded away from them, so every range variable is a fresh #n variable
/// (Maude-style output). Variables merely merged with one another appear as
/// bindings to a shared fresh variable; `forced` lists the problem variables
/// whose binding is essential (image not a bare fresh variable) -- reorienting
/// representatives can free any non-forced variable, which is what the fast
/// intersection's domain-disjointness test needs.
struct BSolution {
  Subst subst;
  std::vector<Var> forced;
};

/// Complete set of B-unifiers of the given equations, deterministic order,
/// locally minimized by pairwise B-subsumption. Fresh range variables come
/// from `fresh` (unify counter). Empty result means not B-unifiable.
std::vector<BSolution> unify_b(const Theory& th, const BProblem& p, FreshCounter& fresh);

/// Complete set of matchers theta with apply(theta, pattern) == subject
/// (canonically). Subject variables are treated as constants. Matchers are
/// not padded: Dom ⊆ Var(pattern) and ranges may mention subject variables.
/// max_results caps the search (1 = existence query).
std::vector<Subst> match_b(const Theory& th, const Term& pattern, const Term& subject,
                           size_t max_results = SIZE_MAX);

/// Simultaneous matching of a tuple of pattern terms against subject terms
/// under one shared matcher.
std::vector<Subst> match_b_tuple(const Theory& th, const std::vector<Term>& patterns,
                                 const std::vector<Term>& subjects,
                                 size_t max_results = SIZE_MAX);

/// true iff s_general is more general than s_specific on W modulo B.
bool subsumes_b(const Theory& th, const Subst& s_general, const Subst& s_specific,
                const std::vector<Var>& w);

/// Variables replaced by rigid (frozen) stand-ins, recursively.
Term freeze_rigid(const Theory& th, const Term& t);

/// Existence-only simultaneous B-match against already-frozen subjects;
/// the low-overhead core of the folding checks.
bool b_match_exists(const Theory& th, const std::vector<Term>& patterns,
                    const std::vector<Term>& frozen_subjects);

/// First matcher of pattern against an already-frozen subject (unfrozen in
/// the result), or nullopt. The rewrite engine's fast path.
std::optional<Subst> b_match_first(const Theory& th, const Term& pattern,
                                   const Term& frozen_subject);

}  // namespace vunify

#endif
