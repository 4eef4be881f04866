#include "vunify/variants.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "vunify/ax_unify.hpp"
#include "vunify/errors.hpp"

namespace vunify {

long g_vs_calls = 0;

namespace {

std::vector<Term> variant_tuple(const Theory& th, const Variant& v,
                                const std::vector<Var>& root_vars) {
  std::vector<Term> out;
  out.reserve(root_vars.size() + 1);
  out.push_back(v.term);
  for (const auto& x : root_vars) out.push_back(v.subst.get(th, x));
  return out;
}

std::vector<Term> frozen_tuple(const Theory& th, const std::vector<Term>& tuple) {
  std::vector<Term> out;
  out.reserve(tuple.size());
  for (const auto& t : tuple) out.push_back(freeze_rigid(th, t));
  return out;
}

}  // namespace

bool variant_subsumes(const Theory& th, const Variant& v1, const Variant& v2,
                      const std::vector<Var>& root_vars) {
  // One simultaneous B-match of (term, substitution images). The matcher is
  // free to instantiate range variables of v1.subst that do not occur in
  // v1.term, which is exactly what folding needs.
  ++g_vs_calls;
  return b_match_exists(th, variant_tuple(th, v1, root_vars),
                        frozen_tuple(th, variant_tuple(th, v2, root_vars)));
}

namespace {

Subst normalize_subst(const Theory& th, const Subst& s, long step_budget) {
  Subst out;
  for (auto& [v, t] : s.bindings()) out.set(v, normalize(th, t, step_budget));
  return out;
}

void term_canon_key(const Term& t, std::map<Var, int>& seen, std::string& out) {
  if (t.is_var()) {
    if (t.var().frozen) {
      out += "F(" + t.var().name + ")";
      return;
    }
    auto it = seen.find(t.var());
    if (it == seen.end()) it = seen.emplace(t.var(), static_cast<int>(seen.size())).first;
    out += "v" + std::to_string(it->second) + ":" + std::to_string(t.var().sort);
    return;
  }
  out += t.sym_name() + "(";
  for (auto& a : t.args()) {
    term_canon_key(a, seen, out);
    out += ",";
  }
  out += ")";
}

// Positionwise variable correspondence between two alpha-equivalent canonical
// terms (valid exactly when their canonical keys coincide).
void derive_renaming(const Term& from, const Term& to, std::map<Var, Var>& m) {
  if (from.is_var()) {
    if (!from.var().frozen) m.emplace(from.var(), to.var());
    return;
  }
  for (size_t i = 0; i < from.args().size(); ++i)
    derive_renaming(from.args()[i], to.args()[i], m);
}

// Narrow steps of alpha-equivalent node terms are themselves equal up to
// renaming, so they are cached per canonical key and re-issued with fresh
// variables on each hit.
struct NarrowCache {
  struct Entry {
    Term node_term;
    std::vector<NarrowStep> steps;
  };
  std::map<std::string, Entry> entries;

  const std::vector<NarrowStep>& get(const Theory& th, const Term& t, FreshCounter& fresh,
                                     long step_budget, std::vector<NarrowStep>& scratch) {
    std::map<Var, int> seen;
    std::string key;
    term_canon_key(t, seen, key);
    auto it = entries.find(key);
    if (it == entries.end()) {
      Entry e;
      e.node_term = t;
      e.steps = narrow_steps(th, t, fresh, step_budget);
      it = entries.emplace(std::move(key), std::move(e)).first;
      return it->second.steps;
    }
    // rename the cached steps: node vars positionwise, everything else fresh
    std::map<Var, Var> node_map;
    derive_renaming(it->second.node_term, t, node_map);
    Subst ren;
    std::map<Var, bool> done;
    auto freshen = [&](const Term& u, auto&& self) -> void {
      if (u.is_var()) {
        const Var& v = u.var();
        if (v.frozen || done.count(v)) return;
        done[v] = true;
        auto nm = node_map.find(v);
        if (nm != node_map.end()) {
          ren.set(v, Term::make_var(nm->second));
        } else {
          Var nv = v.name[0] == '%' ? fresh.next_narrow(v.sort) : fresh.next_unify(v.sort);
          ren.set(v, Term::make_var(nv));
        }
        return;
      }
      for (auto& a : u.args()) self(a, self);
    };
    scratch.clear();
    for (const auto& s : it->second.steps) {
      freshen(s.term, freshen);
      for (auto& [v, img] : s.subst.bindings()) {
        freshen(Term::make_var(v), freshen);
        freshen(img, freshen);
      }
    }
    for (const auto& s : it->second.steps) {
      NarrowStep ns;
      ns.term = apply(th, ren, s.term);
      for (auto& [v, img] : s.subst.bindings()) {
        Term nv = ren.get(th, v);
        ns.subst.set(nv.var(), apply(th, ren, img));
      }
      ns.pos = s.pos;
      ns.rule_index = s.rule_index;
      scratch.push_back(std::move(ns));
    }
    return scratch;
  }
};

}  // namespace

VariantTree generate_variants(const Theory& th, const Term& t, FreshCounter& fresh,
                              const VariantLimits& limits) {
  VariantTree tree;
  tree.root_vars = vars_of(t);
  tree.root_term = normalize(th, t, limits.step_budget);

  Variant root;
  root.term = tree.root_term;
  root.depth = 0;
  tree.nodes.push_back(root);
  tree.kept.push_back(0);

  std::deque<int> frontier{0};
  bool truncated = false;
  long generated = 0;
  NarrowCache narrow_cache;
  std::vector<NarrowStep> scratch;
  // prepared (pattern, frozen-subject) tuples per node, for cheap fold checks
  std::vector<std::vector<Term>> pats{variant_tuple(th, root, tree.root_vars)};
  std::vector<std::vector<Term>> frozen{frozen_tuple(th, pats[0])};
  std::set<std::string> candidate_seen;

  auto kept_count = [&] {
    long n = 0;
    for (int i : tree.kept)
      if (!tree.nodes[i].folded) ++n;
    return n;
  };

  while (!frontier.empty()) {
    if (limits.tick) limits.tick();
    if (limits.bound && kept_count() >= *limits.bound) {
      truncated = true;
      break;
    }
    int vi = frontier.front();
    frontier.pop_front();
    if (tree.nodes[vi].folded) continue;
    if (limits.depth_cap && tree.nodes[vi].depth >= *limits.depth_cap) {
      truncated = true;
      continue;
    }

    Term parent_term = tree.nodes[vi].term;
    Subst parent_subst = tree.nodes[vi].subst;
    for (auto& step : narrow_cache.get(th, parent_term, fresh, limits.step_budget, scratch)) {
      if (++generated > limits.node_budget)
        throw VariantBudgetError(
            "variant generation exceeded its node budget without closing; the theory may lack "
            "the finite variant property (use a bound or depth cap)");
      Variant w;
      w.term = step.term;
      w.edge_subst = step.subst;
      w.parent = vi;
      w.depth = tree.nodes[vi].depth + 1;
      w.rule_index = step.rule_index;
      w.subst = normalize_subst(
          th, restrict_to(compose(th, parent_subst, step.subst), tree.root_vars),
          limits.step_budget);

      std::vector<Term> w_pats = variant_tuple(th, w, tree.root_vars);
      {
        // same (term, substitution) up to renaming as an earlier candidate
        std::map<Var, int> seen_vars;
        std::string ckey;
        for (const auto& u : w_pats) term_canon_key(u, seen_vars, ckey);
        if (!candidate_seen.insert(ckey).second) continue;
      }
      std::vector<Term> w_frozen = frozen_tuple(th, w_pats);

      bool folded = false;
      for (int k : tree.kept) {
        if (tree.nodes[k].folded) continue;
        if (b_match_exists(th, pats[k], w_frozen)) {
          folded = true;
          break;
        }
      }
      if (folded) continue;  // never expanded, no descendants: not stored
      if (limits.tick) limits.tick();

      int wi = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(w);
      tree.kept.push_back(wi);
      frontier.push_back(wi);
      pats.push_back(std::move(w_pats));
      frozen.push_back(std::move(w_frozen));

      // retro-fold strictly less general earlier variants; they stay in
      // `nodes` because descendants' provenance runs through them
      for (int k : tree.kept) {
        if (k == wi || tree.nodes[k].folded) continue;
        if (b_match_exists(th, pats[wi], frozen[k]) &&
            !b_match_exists(th, pats[k], frozen[wi]))
          tree.nodes[k].folded = true;
      }
    }
  }

  tree.kept.erase(std::remove_if(tree.kept.begin(), tree.kept.end(),
                                 [&](int i) { return tree.nodes[i].folded; }),
                  tree.kept.end());
  tree.closed = !truncated;
  return tree;
}

Theory eq_extend(const Theory& th) {
  // already extended: some rule has shape eq(X,X) -> tt with a Truth-sorted
  // nullary right-hand side in its own component
  for (const auto& r : th.rules()) {
    if (r.lhs.is_app() && r.lhs.args().size() == 2 && r.lhs.args()[0].is_var() &&
        r.lhs.args()[0] == r.lhs.args()[1] && r.rhs.is_app() && r.rhs.args().empty() &&
        !th.sorts.same_component(r.rhs.least_sort(), r.lhs.args()[0].least_sort()))
      return th;
  }

  auto fresh_sort_name = [&](const std::string& base) {
    std::string name = base;
    int k = 0;
    while (th.sorts.find(name)) name = base + std::to_string(++k);
    return name;
  };
  auto fresh_symbol_name = [&](const std::string& base) {
    std::string name = base;
    int k = 0;
    while (th.find_symbol(name)) name = base + std::to_string(++k);
    return name;
  };

  // Rebuild the sort graph with the added Truth sort (SortGraph is finalized
  // and append-only up to that point). Kinds keep their names, so old sort
  // ids map to new ones by name.
  Theory ext;
  ext.name = th.name;
  std::string truth_name = fresh_sort_name("Truth");
  for (SortId s : th.sorts.user_sorts()) ext.sorts.add_sort(th.sorts.name(s));
  SortId truth = ext.sorts.add_sort(truth_name);
  for (SortId a : th.sorts.user_sorts())
    for (SortId b : th.sorts.user_sorts())
      if (a != b && th.sorts.leq(a, b))
        ext.sorts.add_subsort(*ext.sorts.find(th.sorts.name(a)), *ext.sorts.find(th.sorts.name(b)));
  ext.sorts.finalize();
  auto map_sort = [&](SortId s) {
    auto found = ext.sorts.find(th.sorts.name(s));
    if (!found) throw TheoryError("eq_extend: lost sort " + th.sorts.name(s));
    return *found;
  };

  for (int i = 0; i < th.symbol_count(); ++i) {
    Symbol s = th.symbol(i);
    for (auto& a : s.arg_sorts) a = map_sort(a);
    s.result_sort = map_sort(s.result_sort);
    ext.add_symbol(s);
  }

  std::function<Term(const Term&)> remap_term = [&](const Term& t) -> Term {
    if (t.is_var()) {
      Var v = t.var();
      v.sort = map_sort(v.sort);
      return Term::make_var(v);
    }
    std::vector<Term> args;
    for (auto& a : t.args()) args.push_back(remap_term(a));
    auto sym = ext.find_symbol(th.symbol(t.sym()).name);
    return Term::make_app(ext, *sym, std::move(args));
  };
  for (const auto& r : th.rules()) ext.add_rule({r.label, remap_term(r.lhs), remap_term(r.rhs)});
  for (auto& [n, s] : th.var_decls()) ext.var_decls()[n] = map_sort(s);

  Symbol tt;
  tt.name = fresh_symbol_name("tt");
  tt.result_sort = truth;
  SymbolId tt_id = ext.add_symbol(tt);

  std::string eq_base = fresh_symbol_name("eq");
  int n_components = th.sorts.component_count();
  for (int c = 0; c < n_components; ++c) {
    SortId top = map_sort(th.sorts.kind_of_component(c));
    Symbol eqs;
    eqs.name = c == 0 ? eq_base : eq_base + "." + std::to_string(c);
    while (ext.find_symbol(eqs.name)) eqs.name += "'";
    eqs.arg_sorts = {top, top};
    eqs.result_sort = truth;
    SymbolId eq_id = ext.add_symbol(eqs);
    Term xv = Term::make_var(Var{"X", top, false});
    ext.add_rule({"eq-" + ext.sorts.name(top), Term::make_app(ext, eq_id, {xv, xv}),
                  Term::make_app(ext, tt_id, {})});
  }
  return ext;
}

}  // namespace vunify
