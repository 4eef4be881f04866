#include "vunify/unifier.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <set>
#include <sstream>

#include "vunify/errors.hpp"

namespace vunify {

std::string subst_key(const Subst& s, const std::vector<Var>& w);  // ax_unify.cpp

bool is_unifier(const Theory& th, const Subst& theta,
                const std::vector<std::pair<Term, Term>>& equations, long step_budget) {
  for (auto& [l, r] : equations) {
    Term a = normalize(th, apply(th, theta, l), step_budget);
    Term b = normalize(th, apply(th, theta, r), step_budget);
    if (!(a == b)) return false;
  }
  return true;
}

namespace {

void term_key(const Term& t, std::map<Var, int>& seen, std::ostringstream& os) {
  if (t.is_var()) {
    if (t.var().frozen) {
      os << "F(" << t.var().name << ")";
      return;
    }
    auto it = seen.find(t.var());
    if (it == seen.end()) it = seen.emplace(t.var(), static_cast<int>(seen.size())).first;
    os << "v" << it->second << ":" << t.var().sort;
    return;
  }
  os << t.sym_name() << "(";
  for (auto& a : t.args()) {
    term_key(a, seen, os);
    os << ",";
  }
  os << ")";
}

std::string terms_key(const std::vector<Term>& ts) {
  std::map<Var, int> seen;
  std::ostringstream os;
  for (auto& t : ts) {
    term_key(t, seen, os);
    os << "|";
  }
  return os.str();
}

std::vector<Var> union_vars(const std::vector<Var>& a, const std::vector<Var>& b) {
  std::vector<Var> out = a;
  for (auto& v : b)
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

std::vector<Var> intersect_vars(const std::vector<Var>& a, const std::vector<Var>& b) {
  std::vector<Var> out;
  for (auto& v : a)
    if (std::find(b.begin(), b.end(), v) != b.end()) out.push_back(v);
  return out;
}

// ---------------------------------------------------------------------------
// Joint reorientation check for the fast intersection's Dom(sigma') ∩ Dom(rho)
// = ∅ condition. A binding x -> z with z a bare fresh variable is a solved-form
// orientation choice: the representative of z's merge class can be freed by
// renaming z to it. The test asks whether representatives can be chosen for
// both substitutions so that their essential domains are disjoint.
// ---------------------------------------------------------------------------
struct SideInfo {
  std::set<Var> forced;                 // image is not a bare variable
  std::map<Var, std::vector<Var>> cls;  // bare image var z -> members
  std::map<Var, Var> class_of;          // member -> z
};

SideInfo side_info(const Subst& s) {
  SideInfo si;
  for (auto& [x, img] : s.bindings()) {
    if (img.is_var() && !img.var().frozen) {
      si.cls[img.var()].push_back(x);
      si.class_of[x] = img.var();
    } else {
      si.forced.insert(x);
    }
  }
  return si;
}

bool domains_avoidable(const Subst& sigma, const Subst& rho) {
  SideInfo S = side_info(sigma), R = side_info(rho);
  auto inS = [&](const Var& v) { return S.forced.count(v) || S.class_of.count(v); };
  auto inR = [&](const Var& v) { return R.forced.count(v) || R.class_of.count(v); };

  std::vector<Var> conflicts;
  for (auto& [x, img] : sigma.bindings())
    if (inR(x)) conflicts.push_back(x);
  for (auto& v : conflicts)
    if (S.forced.count(v) && R.forced.count(v)) return false;

  // freed[z] = the member freed in class z (at most one per class)
  std::map<Var, Var> freedS, freedR;
  std::vector<Var> open;
  for (auto& v : conflicts) {
    bool s_forced = S.forced.count(v) != 0;
    bool r_forced = R.forced.count(v) != 0;
    if (s_forced) {  // must be freed on the R side
      Var z = R.class_of.at(v);
      auto it = freedR.find(z);
      if (it != freedR.end() && !(it->second == v)) return false;
      freedR[z] = v;
    } else if (r_forced) {
      Var z = S.class_of.at(v);
      auto it = freedS.find(z);
      if (it != freedS.end() && !(it->second == v)) return false;
      freedS[z] = v;
    } else {
      open.push_back(v);
    }
  }
  // each remaining conflict var must be freed in its S-class or its R-class
  std::function<bool(size_t)> assign = [&](size_t i) -> bool {
    if (i == open.size()) return true;
    const Var& v = open[i];
    Var zs = S.class_of.at(v), zr = R.class_of.at(v);
    auto its = freedS.find(zs);
    if (its == freedS.end() || its->second == v) {
      bool had = its != freedS.end();
      freedS[zs] = v;
      if (assign(i + 1)) return true;
      if (!had) freedS.erase(zs);
    }
    auto itr = freedR.find(zr);
    if (itr == freedR.end() || itr->second == v) {
      bool had = itr != freedR.end();
      freedR[zr] = v;
      if (assign(i + 1)) return true;
      if (!had) freedR.erase(zr);
    }
    return false;
  };
  return assign(0);
}

}  // namespace

Engine::Engine(const Theory& th)
    : theory_(std::make_shared<Theory>(th)), aux_(std::make_shared<Theory>(th)) {}

void Engine::check_deadline() const {
  if (deadline_ && std::chrono::steady_clock::now() > *deadline_)
    throw TimeoutError("engine deadline exceeded");
}

SymbolId Engine::tuple_symbol(int k, const std::vector<SortId>& arg_kinds) {
  std::ostringstream os;
  os << ".tuple" << k;
  for (auto s : arg_kinds) os << "," << s;
  auto it = tuple_pool_.find(os.str());
  if (it != tuple_pool_.end()) return it->second;
  Symbol sym;
  sym.name = ".tup" + std::to_string(k) + "$" + std::to_string(tuple_pool_.size());
  sym.arg_sorts = arg_kinds;
  sym.result_sort = arg_kinds.front();
  SymbolId id = aux_->add_symbol(sym);
  tuple_pool_[os.str()] = id;
  return id;
}

SymbolId Engine::frozen_const(const Var& v) {
  auto it = frozen_pool_.find(v);
  if (it != frozen_pool_.end()) return it->second;
  Symbol c;
  c.name = ".frz$" + std::to_string(frozen_pool_.size()) + "$" + v.name;
  c.result_sort = v.sort;
  c.frozen_marker = true;
  SymbolId id = aux_->add_symbol(c);
  frozen_pool_[v] = id;
  return id;
}

Term Engine::freeze_into_consts(const Term& t) {
  if (t.is_var()) {
    if (t.var().frozen) return t;
    return Term::make_app(*aux_, frozen_const(t.var()), {});
  }
  std::vector<Term> args;
  for (auto& a : t.args()) args.push_back(freeze_into_consts(a));
  return Term::make_app(*aux_, t.sym(), std::move(args));
}

Term Engine::unfreeze_consts(const Term& t) {
  if (t.is_var()) return t;
  if (t.args().empty()) {
    const Symbol& s = aux_->symbol(t.sym());
    if (s.frozen_marker) {
      for (auto& [v, id] : frozen_pool_)
        if (id == t.sym()) return Term::make_var(v);
    }
    return t;
  }
  std::vector<Term> args;
  for (auto& a : t.args()) args.push_back(unfreeze_consts(a));
  return Term::make_app(*aux_, t.sym(), std::move(args));
}

std::pair<Term, Term> Engine::tuple_encode(const UnificationProblem& p) {
  if (p.equations.empty()) throw TheoryError("empty unification problem");
  const Theory& T = *aux_;
  for (auto& [l, r] : p.equations)
    if (!T.sorts.same_component(l.least_sort(), r.least_sort()))
      throw SortError("equation sides live in different sort components");
  if (p.equations.size() == 1) return p.equations.front();
  std::vector<SortId> kinds;
  std::vector<Term> ls, rs;
  for (auto& [l, r] : p.equations) {
    kinds.push_back(T.sorts.kind_of(l.least_sort()));
    ls.push_back(l);
    rs.push_back(r);
  }
  SymbolId tup = tuple_symbol(static_cast<int>(p.equations.size()), kinds);
  return {Term::make_app(*aux_, tup, ls), Term::make_app(*aux_, tup, rs)};
}

VariantTree Engine::variants(const Term& t, std::optional<long> bound,
                             std::optional<int> depth_cap) {
  VariantLimits lim;
  lim.bound = bound;
  lim.depth_cap = depth_cap;
  lim.node_budget = variant_node_budget;
  lim.step_budget = rewrite_step_budget;
  lim.tick = [this] { check_deadline(); };
  return generate_variants(*aux_, t, fresh_, lim);
}

bool Engine::compatible(const Subst& th1, const Subst& th2, const Subst& sigma,
                        const std::vector<Var>& shared) const {
  for (auto& x : shared) {
    Term a = apply(*aux_, sigma, th1.get(*aux_, x));
    Term b = apply(*aux_, sigma, th2.get(*aux_, x));
    if (!(a == b)) return false;
  }
  return true;
}

Subst Engine::emit_unifier(const VariantTree& v1, int i1, const VariantTree& v2, int i2,
                           const Subst& sigma, const std::vector<Var>& w_union) {
  const Theory& T = *aux_;
  Subst out;
  for (auto& x : w_union) {
    bool in1 = std::find(v1.root_vars.begin(), v1.root_vars.end(), x) != v1.root_vars.end();
    const Subst& th = in1 ? v1.nodes[i1].subst : v2.nodes[i2].subst;
    Term img = normalize(T, apply(T, sigma, th.get(T, x)), rewrite_step_budget);
    out.set(x, img);
  }
  return out;
}

UnifierSet Engine::intersect_variants(const VariantTree& v1, const VariantTree& v2,
                                      const UnificationProblem& p) {
  return intersect_impl(v1, v2, p, false);
}

UnifierSet Engine::fast_intersect(const VariantTree& v1, const VariantTree& v2,
                                  const UnificationProblem& p) {
  return intersect_impl(v1, v2, p, true);
}

bool Engine::fast_witness(const VariantTree& side, int node, const Term& other_term,
                          const Subst& other_subst, const std::vector<Var>& shared,
                          std::map<PairKey, std::vector<BSolution>>& memo, int other_id) {
  const Theory& T = *aux_;
  // walk the ancestor chain, accumulating the edge substitution; folded
  // ancestors contribute their edges but are not used as witnesses
  Subst rho;
  int cur = node;
  bool first = true;
  while (side.nodes[cur].parent >= 0) {
    const Variant& child = side.nodes[cur];
    if (first) {
      rho = child.edge_subst;
      first = false;
    } else {
      rho = compose(T, child.edge_subst, rho);
    }
    int anc = child.parent;
    cur = anc;
    if (side.nodes[anc].folded) continue;
    std::vector<Var> anc_vars = vars_of(side.nodes[anc].term);
    Subst rho_r;
    for (auto& v : anc_vars) {
      Term img = rho.get(T, v);
      if (img.is_var() && img.var() == v) continue;
      rho_r.set(v, normalize(T, img, rewrite_step_budget));
    }
    PairKey key{anc, other_id};
    auto it = memo.find(key);
    if (it == memo.end()) {
      BProblem bp;
      bp.equations.emplace_back(side.nodes[anc].term, other_term);
      it = memo.emplace(key, unify_b(T, bp, fresh_)).first;
    }
    for (const auto& sol : it->second) {
      if (!compatible(side.nodes[anc].subst, other_subst, sol.subst, shared)) continue;
      if (domains_avoidable(sol.subst, rho_r)) return true;
    }
  }
  return false;
}

UnifierSet Engine::intersect_impl(const VariantTree& v1, const VariantTree& v2,
                                  const UnificationProblem& p, bool fast) {
  const Theory& T = *aux_;
  std::vector<Var> w_union = union_vars(v1.root_vars, v2.root_vars);
  std::vector<Var> shared = intersect_vars(v1.root_vars, v2.root_vars);

  UnifierSet us;
  us.problem_vars = w_union;
  us.mode.fast = fast;
  std::set<std::string> seen;
  std::map<PairKey, std::vector<BSolution>> memo1, memo2;

  for (int i1 : v1.kept) {
    for (int i2 : v2.kept) {
      check_deadline();
      BProblem bp;
      bp.equations.emplace_back(v1.nodes[i1].term, v2.nodes[i2].term);
      auto csu = unify_b(T, bp, fresh_);
      for (const auto& sol : csu) {
        if (!compatible(v1.nodes[i1].subst, v2.nodes[i2].subst, sol.subst, shared)) continue;
        if (fast) {
          if (fast_witness(v1, i1, v2.nodes[i2].term, v2.nodes[i2].subst, shared, memo1, i2))
            continue;
          if (fast_witness(v2, i2, v1.nodes[i1].term, v1.nodes[i1].subst, shared, memo2, i1))
            continue;
        }
        Subst u = emit_unifier(v1, i1, v2, i2, sol.subst, w_union);
        std::string key = subst_key(u, w_union);
        if (seen.insert(key).second) us.unifiers.push_back(std::move(u));
      }
    }
  }
  return us;
}

Subst Engine::unpad(const Subst& s, const std::vector<Var>& w) const {
  const Theory& T = *aux_;
  // classes of problem vars sharing a bare fresh image variable
  std::map<Var, std::vector<Var>> cls;
  for (auto& x : w) {
    auto it = s.bindings().find(x);
    if (it == s.bindings().end()) continue;
    if (it->second.is_var() && !it->second.var().frozen) cls[it->second.var()].push_back(x);
  }
  Subst renaming;
  std::set<Var> freed;
  for (auto& [z, members] : cls) {
    // skip if z is itself a problem variable (not a padding artifact)
    if (std::find(w.begin(), w.end(), z) != w.end()) continue;
    const Var& rep = members.back();
    renaming.set(z, Term::make_var(rep));
    freed.insert(rep);
  }
  Subst out;
  for (auto& x : w) {
    if (freed.count(x)) continue;
    auto it = s.bindings().find(x);
    if (it == s.bindings().end()) continue;
    out.set(x, apply(T, renaming, it->second));
  }
  return out;
}

const VariantTree& Engine::cached_variants(const Term& t) {
  // Keyed up to variable renaming: the cached tree is only used for
  // emptiness-of-match queries against frozen ground subjects, which are
  // invariant under renaming the pattern.
  std::string key = terms_key({t});
  auto it = tree_cache_.find(key);
  if (it != tree_cache_.end()) return it->second->tree;
  auto entry = std::make_shared<TreeEntry>();
  entry->root_term_input = t;
  entry->tree = variants(t);
  tree_cache_[key] = entry;
  return tree_cache_[key]->tree;
}

bool Engine::subsumes_eb(const Subst& theta1, const Subst& theta2, const std::vector<Var>& w) {
  const Theory& T = *aux_;
  Subst u1 = unpad(theta1, w), u2 = unpad(theta2, w);
  std::vector<Var> dom;
  for (auto& x : w)
    if (u1.binds(x) || u2.binds(x)) dom.push_back(x);
  if (dom.empty()) return true;

  std::vector<Term> pats, subs;
  for (auto& x : dom) {
    pats.push_back(u1.get(T, x));
    subs.push_back(u2.get(T, x));
  }
  std::string cache_key = terms_key(pats) + "=>" + terms_key(subs);
  {
    auto it = subsume_cache_.find(cache_key);
    if (it != subsume_cache_.end()) return it->second;
  }

  // freeze the subject side into constants and tuple both sides
  Term pat, sub;
  if (dom.size() == 1) {
    pat = pats[0];
    sub = subs[0];
  } else {
    std::vector<SortId> kinds;
    for (auto& x : dom) kinds.push_back(T.sorts.kind_of(x.sort));
    SymbolId tup = tuple_symbol(static_cast<int>(dom.size()), kinds);
    pat = Term::make_app(*aux_, tup, pats);
    sub = Term::make_app(*aux_, tup, subs);
  }
  Term frozen_sub = normalize(*aux_, freeze_into_consts(sub), rewrite_step_budget);

  bool result = false;
  const VariantTree& tree = cached_variants(pat);
  for (int k : tree.kept) {
    check_deadline();
    if (!match_b(*aux_, tree.nodes[k].term, frozen_sub, 1).empty()) {
      result = true;
      break;
    }
  }
  subsume_cache_[cache_key] = result;
  return result;
}

std::vector<Subst> Engine::match_eb(const Term& t, const Term& t_prime) {
  const Theory& T = *aux_;
  Term frozen = freeze_into_consts(t_prime);
  UnificationProblem p;
  p.equations.emplace_back(t, frozen);
  VariantTree v1 = variants(t);
  VariantTree v2 = variants(frozen);
  UnifierSet us = intersect_variants(v1, v2, p);
  std::vector<Subst> out;
  std::vector<Var> tvars = vars_of(t);
  for (auto& u : us.unifiers) {
    Subst m;
    for (auto& x : tvars) {
      auto it = u.bindings().find(x);
      if (it != u.bindings().end()) m.set(x, unfreeze_consts(it->second));
    }
    out.push_back(std::move(m));
  }
  return out;
}

UnifierSet Engine::post_filter(const UnifierSet& us) {
  UnifierSet out;
  out.problem_vars = us.problem_vars;
  out.mode = us.mode;
  out.mode.post = true;
  out.truncated = us.truncated;
  const size_t n = us.unifiers.size();
  std::vector<std::vector<int>> sub(n, std::vector<int>(n, -1));
  auto subsumes = [&](size_t i, size_t j) {
    if (sub[i][j] < 0)
      sub[i][j] = subsumes_eb(us.unifiers[i], us.unifiers[j], us.problem_vars) ? 1 : 0;
    return sub[i][j] == 1;
  };
  for (size_t i = 0; i < n; ++i) {
    bool dominated = false;
    for (size_t j = 0; j < n && !dominated; ++j) {
      if (i == j) continue;
      check_deadline();
      if (subsumes(j, i) && !subsumes(i, j)) dominated = true;
    }
    if (!dominated) out.unifiers.push_back(us.unifiers[i]);
  }
  return out;
}

UnifierSet Engine::quotient(const UnifierSet& us) {
  UnifierSet out;
  out.problem_vars = us.problem_vars;
  out.mode = us.mode;
  out.mode.quotient = true;
  out.truncated = us.truncated;
  const size_t n = us.unifiers.size();
  std::vector<bool> taken(n, false);
  for (size_t i = 0; i < n; ++i) {
    if (taken[i]) continue;
    out.unifiers.push_back(us.unifiers[i]);
    for (size_t j = i + 1; j < n; ++j) {
      if (taken[j]) continue;
      check_deadline();
      if (subsumes_eb(us.unifiers[i], us.unifiers[j], us.problem_vars) &&
          subsumes_eb(us.unifiers[j], us.unifiers[i], us.problem_vars))
        taken[j] = true;
    }
  }
  return out;
}

UnifierSet Engine::unify(const UnificationProblem& p, UnifyModes modes) {
  auto [lhs, rhs] = tuple_encode(p);
  VariantTree v1 = variants(lhs, std::nullopt, p.depth_cap);
  VariantTree v2 = variants(rhs, std::nullopt, p.depth_cap);
  UnifierSet us = modes.fast ? fast_intersect(v1, v2, p) : intersect_variants(v1, v2, p);
  if (modes.post) us = post_filter(us);
  if (modes.quotient) us = quotient(us);
  us.mode = modes;
  if (p.bound && static_cast<long>(us.unifiers.size()) > *p.bound) {
    us.unifiers.resize(*p.bound);
    us.truncated = true;
  }
  for (auto& u : us.unifiers) {
    if (!is_unifier(*aux_, u, p.equations, rewrite_step_budget))
      throw std::logic_error("internal error: emitted substitution is not a unifier");
  }
  return us;
}

}  // namespace vunify
