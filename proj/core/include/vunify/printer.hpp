// Term, substitution and listing printers (Maude-transcript style).
#ifndef VUNIFY_PRINTER_HPP
#define VUNIFY_PRINTER_HPP

#include <string>
#include <vector>

#include "vunify/subst.hpp"
#include "vunify/term.hpp"
#include "vunify/theory.hpp"
#include "vunify/variants.hpp"

namespace vunify {

std::string term_to_string(const Theory& th, const Term& t);
std::string sort_to_string(const Theory& th, SortId s);
std::string var_to_string(const Theory& th, const Var& v);

/// `X --> term` binding lines for vars of `order` (unbound vars included as
/// themselves when `include_unbound`).
std::string subst_to_string(const Theory& th, const Subst& s, const std::vector<Var>& order,
                            bool include_unbound = false);

/// Renames a (term, substitution) pair with #n display variables starting
/// from 1, first-occurrence order (term first, then images in `order`).
std::pair<Term, Subst> display_rename(const Theory& th, const Term& t, const Subst& s,
                                      const std::vector<Var>& order);

/// `Variant #k` block as in the paper's transcripts.
std::string variant_block(const Theory& th, const VariantTree& tree, int kept_index);

/// `Unifier #k` block.
std::string unifier_block(const Theory& th, const Subst& u, const std::vector<Var>& problem_vars,
                          int index);

}  // namespace vunify

#endif
