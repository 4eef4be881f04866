// Exhaustive ground-unifier oracle, independent of the unification pipeline:
// it uses only normalize and canonical equality. (This file must not include
// ax_unify.hpp, variants.hpp or unifier.hpp.)
#ifndef VUNIFY_ORACLE_HPP
#define VUNIFY_ORACLE_HPP

#include <vector>

#include "vunify/rewrite.hpp"
#include "vunify/subst.hpp"
#include "vunify/term.hpp"
#include "vunify/theory.hpp"

namespace vunify {

struct OracleConfig {
  std::vector<Term> constants;  // ground seed terms
  int depth = 1;                // nesting depth of the term universe
  long budget = 2000000;        // max candidate substitutions; error beyond
};

/// The ground-term universe: the constants closed to the given depth under
/// the non-constant symbols occurring in the equations.
std::vector<Term> oracle_universe(const Theory& th, const std::vector<std::pair<Term, Term>>& eqs,
                                  const OracleConfig& cfg);

/// All ground substitutions gamma over the universe (component-respecting)
/// with normalize(lhs gamma) == normalize(rhs gamma) for every equation.
/// Throws OracleBudgetError instead of silently truncating.
std::vector<Subst> ground_oracle(const Theory& th, const std::vector<std::pair<Term, Term>>& eqs,
                                 const OracleConfig& cfg);

}  // namespace vunify

#endif
