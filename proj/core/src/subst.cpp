#include "vunify/subst.hpp"

#include <algorithm>

#include "vunify/errors.hpp"
#include "vunify/theory.hpp"

namespace vunify {

Term Subst::get(const Theory& th, const Var& v) const {
  (void)th;
  auto it = b_.find(v);
  return it == b_.end() ? Term::make_var(v) : it->second;
}

void Subst::set(const Var& v, const Term& t) {
  if (t.is_var() && t.var() == v) return;
  b_[v] = t;
}

std::vector<Var> Subst::domain() const {
  std::vector<Var> out;
  out.reserve(b_.size());
  for (auto& [v, t] : b_) out.push_back(v);
  return out;
}

Term apply(const Theory& th, const Subst& s, const Term& t) {
  if (s.empty()) return t;
  if (t.is_var()) return s.get(th, t.var());
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (auto& a : t.args()) {
    Term b = apply(th, s, a);
    if (!(b == a)) changed = true;
    args.push_back(std::move(b));
  }
  if (!changed) return t;
  return Term::make_app(th, t.sym(), std::move(args));
}

Subst compose(const Theory& th, const Subst& s1, const Subst& s2) {
  Subst out;
  for (auto& [v, t] : s1.bindings()) out.set(v, apply(th, s2, t));
  for (auto& [v, t] : s2.bindings())
    if (!s1.binds(v)) out.set(v, t);

  // Re-idempotize: rewrite ranges until no domain variable occurs in them.
  for (size_t round = 0; round <= out.size() + 1; ++round) {
    bool dirty = false;
    for (auto& [v, t] : out.bindings()) {
      for (auto& [w, u] : out.bindings()) {
        if (v == w) continue;
        if (contains_var(t, w)) {
          dirty = true;
          break;
        }
      }
      if (dirty) break;
    }
    if (!dirty) break;
    if (round == out.size() + 1)
      throw TheoryError("substitution composition is cyclic; cannot re-idempotize");
    Subst next;
    for (auto& [v, t] : out.bindings()) {
      Subst others;
      for (auto& [w, u] : out.bindings())
        if (!(w == v)) others.set(w, u);
      next.set(v, apply(th, others, t));
    }
    out = next;
  }
  return out;
}

Subst restrict_to(const Subst& s, const std::vector<Var>& w) {
  Subst out;
  for (auto& v : w) {
    auto it = s.bindings().find(v);
    if (it != s.bindings().end()) out.set(v, it->second);
  }
  return out;
}

Subst union_disjoint(const Subst& a, const Subst& b) {
  Subst out = a;
  for (auto& [v, t] : b.bindings()) {
    if (a.binds(v)) throw TheoryError("union of substitutions with overlapping domains");
    out.set(v, t);
  }
  return out;
}

bool equal_on(const Theory& th, const Subst& a, const Subst& b, const std::vector<Var>& w) {
  for (auto& v : w)
    if (!(a.get(th, v) == b.get(th, v))) return false;
  return true;
}

std::pair<Term, Subst> rename_apart(const Theory& th, const Term& t, FreshCounter& fresh,
                                    FreshKind kind) {
  Subst renaming;
  std::vector<Var> vs = vars_of(t);
  for (auto& v : vs) {
    if (v.frozen) continue;
    Var nv = kind == FreshKind::Unify ? fresh.next_unify(v.sort) : fresh.next_narrow(v.sort);
    renaming.set(v, Term::make_var(nv));
  }
  return {apply(th, renaming, t), renaming};
}

}  // namespace vunify
