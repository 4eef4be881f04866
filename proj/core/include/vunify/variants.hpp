// Folding variant narrowing: the complete set of most general E,B-variants of
// a term, kept as a tree with provenance for the fast intersection.
#ifndef VUNIFY_VARIANTS_HPP
#define VUNIFY_VARIANTS_HPP

#include <functional>
#include <optional>
#include <vector>

#include "vunify/rewrite.hpp"
#include "vunify/subst.hpp"
#include "vunify/term.hpp"
#include "vunify/theory.hpp"

namespace vunify {

struct Variant {
  Term term;         // canonical, E,B-irreducible
  Subst subst;       // accumulated substitution, images normalized, Dom ⊆ root vars
  Subst edge_subst;  // narrowing substitution from parent, restricted to parent's term vars
  int parent = -1;   // node index, -1 for the root
  int depth = 0;
  int rule_index = -1;
  bool folded = false;  // evicted by a later, more general variant
};

struct VariantTree {
  Term root_term;               // normalize(input)
  std::vector<Var> root_vars;   // variables of the input term
  std::vector<Variant> nodes;   // generation order; folded nodes stay for provenance
  std::vector<int> kept;        // indices of non-folded nodes, generation order
  bool closed = false;          // frontier exhausted (FVP witnessed for this term)
};

struct VariantLimits {
  std::optional<long> bound;      // stop once this many variants are kept
  std::optional<int> depth_cap;   // do not expand nodes at this depth
  long node_budget = 100000;      // safety net for non-FVP theories
  long step_budget = 10000;       // rewrite budget per normalize call
  std::function<void()> tick;     // cooperative deadline hook
};

/// Breadth-first folding variant narrowing. A new variant is discarded when
/// an already-kept one subsumes it; a kept variant may retro-fold older ones
/// it strictly subsumes (they stay in `nodes`, marked folded, because the
/// fast intersection needs edge substitutions through them).
VariantTree generate_variants(const Theory& th, const Term& t, FreshCounter& fresh,
                              const VariantLimits& limits = {});

/// Variant subsumption modulo B: one simultaneous B-match of v1's (term,
/// substitution images) tuple against v2's. The matcher may instantiate
/// range variables of v1.subst that do not occur in v1.term.
bool variant_subsumes(const Theory& th, const Variant& v1, const Variant& v2,
                      const std::vector<Var>& root_vars);

/// Def.-1 construction: adds sort Truth, constant tt, one eq operator per
/// pre-existing component top sort and one rule eq(X,X) -> tt each.
/// Clashing names get a numeric suffix. Idempotent.
Theory eq_extend(const Theory& th);

}  // namespace vunify

#endif
