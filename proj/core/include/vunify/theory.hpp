// A decomposition (Sigma, B, E): signature with per-symbol axioms plus
// oriented variant equations used as rewrite rules modulo B.
#ifndef VUNIFY_THEORY_HPP
#define VUNIFY_THEORY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vunify/sorts.hpp"
#include "vunify/subst.hpp"
#include "vunify/term.hpp"

namespace vunify {

struct Rule {
  std::string label;
  Term lhs;
  Term rhs;
};

/// Convergence modulo B (confluence, termination, strict coherence) is the
/// theory author's obligation; validate() checks the structural conditions
/// (sort-decreasingness, non-variable lhs, supported axiom sets) and
/// coherence_warnings() flags AC-rooted rules with no extension-style sibling.
class Theory {
 public:
  SortGraph sorts;

  /// Identity for normalization caches: copies share the uid (same rules);
  /// freshly built theories get a new one.
  long uid = next_uid();
  static long next_uid();

  SymbolId add_symbol(Symbol s);
  std::optional<SymbolId> find_symbol(const std::string& name) const;
  const Symbol& symbol(SymbolId id) const { return symbols_[id]; }
  int symbol_count() const { return static_cast<int>(symbols_.size()); }

  void add_rule(Rule r) { rules_.push_back(std::move(r)); }
  const std::vector<Rule>& rules() const { return rules_; }

  /// Declared variables from the surface syntax (name -> sort), used by the
  /// term parser to resolve bare identifiers.
  std::map<std::string, SortId>& var_decls() { return var_decls_; }
  const std::map<std::string, SortId>& var_decls() const { return var_decls_; }

  std::string name;

  /// Structural decomposition checks; throws TheoryError on violation.
  void validate() const;
  /// Heuristic warnings for AC-rooted rules lacking an arity+1 sibling.
  std::vector<std::string> coherence_warnings() const;

 private:
  std::vector<Symbol> symbols_;
  std::map<std::string, SymbolId> symbol_index_;
  std::vector<Rule> rules_;
  std::map<std::string, SortId> var_decls_;
};

/// Shadow extension used by E-union-B matching: a copy of th with one fresh
/// constant per given variable (reserved ".frz$" name prefix). Terms built
/// against th remain valid against the copy (symbol ids are append-only).
struct FrozenTheory {
  Theory theory;
  std::map<Var, SymbolId> const_of_var;
  std::map<SymbolId, Var> var_of_const;
};
FrozenTheory freeze_vars(const Theory& th, const std::vector<Var>& vars);

}  // namespace vunify

#endif
