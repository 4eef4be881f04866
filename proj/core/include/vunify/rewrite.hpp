// Normalization by rewriting with the oriented equations modulo B, and
// one-step narrowing.
#ifndef VUNIFY_REWRITE_HPP
#define VUNIFY_REWRITE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vunify/subst.hpp"
#include "vunify/term.hpp"
#include "vunify/theory.hpp"

namespace vunify {

/// Leftmost-innermost exhaustive rewriting; AC layers are matched both whole
/// and through an extension variable (any sub-multiset is a redex position).
/// Throws NonTerminationError once `step_budget` root rewrites have fired.
Term normalize(const Theory& th, const Term& t, long step_budget = 10000);

/// A position: path of argument indexes, plus an optional sub-multiset of an
/// AC layer (indices into the flattened argument list, size >= 2).
struct Position {
  std::vector<int> path;
  std::vector<int> ac_subset;  // empty = the node itself
};

struct NarrowStep {
  Term term;        // normalized narrowed term
  Subst subst;      // unifier restricted to Var(t)
  Position pos;
  int rule_index;
};

/// All one-step E,B-narrowings of a canonical term: every non-variable
/// position (including proper AC sub-multisets), every rule renamed apart
/// with %n variables, every B-unifier. Deduplicated up to renaming + B.
std::vector<NarrowStep> narrow_steps(const Theory& th, const Term& t, FreshCounter& fresh,
                                     long step_budget = 10000);

}  // namespace vunify

#endif
