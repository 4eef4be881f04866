// Variant-based equational unification: variant intersection, fast variant
// intersection, E-union-B matching and subsumption, post-filtering and the
// quotient by mutual subsumption, composed into the four unification modes.
#ifndef VUNIFY_UNIFIER_HPP
#define VUNIFY_UNIFIER_HPP

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vunify/ax_unify.hpp"
#include "vunify/variants.hpp"

namespace vunify {

struct UnificationProblem {
  std::vector<std::pair<Term, Term>> equations;  // nonempty
  std::optional<long> bound;
  std::optional<int> depth_cap;
};

struct UnifyModes {
  bool fast = false;
  bool post = false;
  bool quotient = false;
};

struct UnifierSet {
  std::vector<Subst> unifiers;   // restricted to problem variables, fresh ranges
  std::vector<Var> problem_vars;
  UnifyModes mode;
  bool truncated = false;
};

/// Drives the pipeline and owns the fresh counter plus the variant-tree and
/// subsumption caches that make post mode affordable. Not thread-safe; use
/// one engine per thread.
class Engine {
 public:
  explicit Engine(const Theory& th);

  /// k = 1 returns the pair as-is; k > 1 wraps both sides in a fresh free
  /// tupling symbol over the component kinds (shadow signature).
  std::pair<Term, Term> tuple_encode(const UnificationProblem& p);

  VariantTree variants(const Term& t, std::optional<long> bound = {},
                       std::optional<int> depth_cap = {});

  UnifierSet intersect_variants(const VariantTree& v1, const VariantTree& v2,
                                const UnificationProblem& p);
  UnifierSet fast_intersect(const VariantTree& v1, const VariantTree& v2,
                            const UnificationProblem& p);

  /// Complete set of E∪B-matchers of t against t_prime (variables of t_prime
  /// frozen into constants, variant unification, constants unfrozen).
  std::vector<Subst> match_eb(const Term& t, const Term& t_prime);

  /// theta1 more general than theta2 modulo E∪B, compared in economical form
  /// on Dom(theta1) ∪ Dom(theta2).
  bool subsumes_eb(const Subst& theta1, const Subst& theta2, const std::vector<Var>& w);

  UnifierSet post_filter(const UnifierSet& us);
  UnifierSet quotient(const UnifierSet& us);

  /// tuple_encode -> variants of both sides -> (fast_)intersect ->
  /// post_filter? -> quotient? -> truncate to bound. Asserts soundness of
  /// every emitted unifier.
  UnifierSet unify(const UnificationProblem& p, UnifyModes modes);

  const Theory& theory() const { return *theory_; }
  FreshCounter& fresh() { return fresh_; }

  void set_deadline(std::chrono::steady_clock::time_point tp) { deadline_ = tp; }
  void clear_deadline() { deadline_.reset(); }
  void check_deadline() const;

  long variant_node_budget = 100000;
  long rewrite_step_budget = 10000;

 private:
  struct PairKey {
    int a;
    int b;
    bool operator<(const PairKey& o) const { return a != o.a ? a < o.a : b < o.b; }
  };
  struct TreeEntry {
    Term root_term_input;
    VariantTree tree;
  };

  SymbolId tuple_symbol(int k, const std::vector<SortId>& arg_kinds);
  SymbolId frozen_const(const Var& v);
  Term freeze_into_consts(const Term& t);
  Term unfreeze_consts(const Term& t);
  UnifierSet intersect_impl(const VariantTree& v1, const VariantTree& v2,
                            const UnificationProblem& p, bool fast);
  bool compatible(const Subst& th1, const Subst& th2, const Subst& sigma,
                  const std::vector<Var>& shared) const;
  Subst emit_unifier(const VariantTree& v1, int i1, const VariantTree& v2, int i2,
                     const Subst& sigma, const std::vector<Var>& w_union);
  bool fast_witness(const VariantTree& side, int node, const Term& other_term,
                    const Subst& other_subst, const std::vector<Var>& shared,
                    std::map<PairKey, std::vector<BSolution>>& memo, int other_id);
  /// Economical form: padded-away renamings undone, Dom restricted to
  /// essentially constrained variables.
  Subst unpad(const Subst& s, const std::vector<Var>& w) const;
  const VariantTree& cached_variants(const Term& t);

  std::shared_ptr<const Theory> theory_;
  /// Growing auxiliary signature: the base theory plus on-demand tupling
  /// symbols and frozen constants (append-only, so term ids stay valid).
  std::shared_ptr<Theory> aux_;
  FreshCounter fresh_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;

  std::map<Var, SymbolId> frozen_pool_;
  std::map<std::string, SymbolId> tuple_pool_;
  // caches for post/quotient-mode subsumption checks
  std::map<std::string, std::shared_ptr<TreeEntry>> tree_cache_;
  std::map<std::string, bool> subsume_cache_;
};

/// Sound-by-construction check used in tests and assertions: both sides of
/// every equation normalize to the same canonical term under theta.
bool is_unifier(const Theory& th, const Subst& theta,
                const std::vector<std::pair<Term, Term>>& equations, long step_budget = 10000);

}  // namespace vunify

#endif
