#include "vunify/ax_unify.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "vunify/errors.hpp"

namespace vunify {

long g_solver_steps = 0;
long g_match_calls = 0;
long g_unify_calls = 0;
long g_mm_rejects = 0;

namespace {

// ---------------------------------------------------------------------------
// Multiset view of an AC layer: distinct canonical terms with multiplicities.
// ---------------------------------------------------------------------------
struct LayerElem {
  Term term;
  int mult = 0;
};

std::vector<LayerElem> layer_of(const std::vector<Term>& args) {
  std::vector<LayerElem> out;
  for (const auto& a : args) {
    if (!out.empty() && out.back().term == a) {
      out.back().mult++;
    } else {
      out.push_back({a, 1});
    }
  }
  return out;  // args are sorted, so equal terms are adjacent
}

void cancel_common(std::vector<LayerElem>& l, std::vector<LayerElem>& r) {
  for (auto& e : l) {
    for (auto& f : r) {
      if (e.mult == 0 || f.mult == 0) continue;
      if (e.term == f.term) {
        int c = std::min(e.mult, f.mult);
        e.mult -= c;
        f.mult -= c;
      }
    }
  }
  auto drop = [](std::vector<LayerElem>& v) {
    v.erase(std::remove_if(v.begin(), v.end(), [](const LayerElem& e) { return e.mult == 0; }),
            v.end());
  };
  drop(l);
  drop(r);
}

// ---------------------------------------------------------------------------
// Minimal non-negative solutions of  sum a_i x_i = sum b_j y_j  (not all 0).
// Classical component bounds for minimal solutions: x_i <= max(b), y_j <= max(a).
// ---------------------------------------------------------------------------
struct DioSolution {
  std::vector<int> x, y;
};

void enum_solutions_uncached(const std::vector<int>& a, const std::vector<int>& b,
                             std::vector<DioSolution>& out) {
  int bx = 1, by = 1;
  for (int v : b) bx = std::max(bx, v);
  for (int v : a) by = std::max(by, v);
  std::vector<int> x(a.size(), 0), y(b.size(), 0);

  // enumerate x assignments, then balance with y
  std::function<void(size_t, long)> go_y = [&](size_t j, long rem) {
    if (j == b.size()) {
      if (rem == 0) out.push_back({x, y});
      return;
    }
    long max_rest = 0;
    for (size_t k = j + 1; k < b.size(); ++k) max_rest += static_cast<long>(b[k]) * by;
    for (int v = 0; v <= by; ++v) {
      long used = static_cast<long>(b[j]) * v;
      if (used > rem) break;
      if (rem - used > max_rest) continue;
      y[j] = v;
      go_y(j + 1, rem - used);
    }
    y[j] = 0;
  };
  std::function<void(size_t, long)> go_x = [&](size_t i, long sum) {
    if (i == a.size()) {
      if (sum > 0) go_y(0, sum);
      return;
    }
    for (int v = 0; v <= bx; ++v) {
      x[i] = v;
      go_x(i + 1, sum + static_cast<long>(a[i]) * v);
    }
    x[i] = 0;
  };
  go_x(0, 0);

  // keep only the pointwise-minimal ones
  auto leq = [](const DioSolution& p, const DioSolution& q) {
    for (size_t i = 0; i < p.x.size(); ++i)
      if (p.x[i] > q.x[i]) return false;
    for (size_t j = 0; j < p.y.size(); ++j)
      if (p.y[j] > q.y[j]) return false;
    return true;
  };
  std::vector<DioSolution> min;
  for (const auto& s : out) {
    bool minimal = true;
    for (const auto& t : out) {
      if (&s == &t) continue;
      if (leq(t, s) && !leq(s, t)) {
        minimal = false;
        break;
      }
    }
    if (minimal) min.push_back(s);
  }
  // deterministic order
  std::sort(min.begin(), min.end(), [](const DioSolution& p, const DioSolution& q) {
    if (p.x != q.x) return p.x < q.x;
    return p.y < q.y;
  });
  out = std::move(min);
}

void enum_solutions(const std::vector<int>& a, const std::vector<int>& b,
                    std::vector<DioSolution>& out) {
  using Key = std::pair<std::vector<int>, std::vector<int>>;
  thread_local std::map<Key, std::vector<DioSolution>> cache;
  Key key{a, b};
  auto it = cache.find(key);
  if (it == cache.end()) {
    std::vector<DioSolution> sols;
    enum_solutions_uncached(a, b, sols);
    it = cache.emplace(std::move(key), std::move(sols)).first;
  }
  out = it->second;
}

// ---------------------------------------------------------------------------
// The backtracking solver over a worklist of equations.
// ---------------------------------------------------------------------------
struct Solver {
  const Theory& th;
  long temp_counter = 0;
  long budget = 4000000;
  size_t max_solutions = SIZE_MAX;  // existence queries stop at the first hit
  std::vector<Subst> out;

  explicit Solver(const Theory& t) : th(t) {}

  bool done() const { return out.size() >= max_solutions; }

  Var fresh_temp(SortId sort) { return Var{".z" + std::to_string(++temp_counter), sort, false}; }

  bool bindable(const Var& v, const Term& t) const {
    if (v.frozen) return false;
    if (contains_var(t, v)) return false;  // occurs check (no collapse axioms)
    return th.sorts.same_component(t.least_sort(), v.sort);
  }

  void extend(Subst& sigma, const Var& v, const Term& t) {
    Subst one;
    one.set(v, t);
    Subst next;
    for (auto& [w, u] : sigma.bindings()) next.set(w, apply(th, one, u));
    next.set(v, t);
    sigma = std::move(next);
  }

  void solve(const std::vector<std::pair<Term, Term>>& eqs, size_t idx, Subst sigma) {
    if (done()) return;
    ++g_solver_steps;
    if (--budget < 0) throw TheoryError("B-unification budget exceeded");
    while (true) {
      if (idx == eqs.size()) {
        out.push_back(std::move(sigma));
        return;
      }
      Term s = apply(th, sigma, eqs[idx].first);
      Term t = apply(th, sigma, eqs[idx].second);
      ++idx;
      if (s == t) continue;
      if (s.is_var() && bindable(s.var(), t)) {
        extend(sigma, s.var(), t);
        continue;
      }
      if (t.is_var() && bindable(t.var(), s)) {
        extend(sigma, t.var(), s);
        continue;
      }
      if (s.is_var() || t.is_var()) return;  // unbindable variable: fail
      if (s.sym() != t.sym()) return;
      const Symbol& f = th.symbol(s.sym());
      if (f.assoc && !f.comm)
        throw TheoryError("symbol '" + f.name + "': assoc without comm is unsupported");
      if (f.ac()) {
        solve_ac(eqs, idx, sigma, s, t);
        return;
      }
      if (f.comm) {
        // two argument pairings
        for (int order = 0; order < 2 && !done(); ++order) {
          std::vector<std::pair<Term, Term>> rest(eqs.begin() + idx, eqs.end());
          std::vector<std::pair<Term, Term>> next;
          next.emplace_back(s.args()[0], t.args()[order == 0 ? 0 : 1]);
          next.emplace_back(s.args()[1], t.args()[order == 0 ? 1 : 0]);
          next.insert(next.end(), rest.begin(), rest.end());
          solve(next, 0, sigma);
        }
        return;
      }
      // free symbol: decompose argwise
      std::vector<std::pair<Term, Term>> next;
      for (size_t i = 0; i < s.args().size(); ++i) next.emplace_back(s.args()[i], t.args()[i]);
      next.insert(next.end(), eqs.begin() + idx, eqs.end());
      solve(next, 0, sigma);
      return;
    }
  }

  void solve_ac(const std::vector<std::pair<Term, Term>>& eqs, size_t idx, const Subst& sigma,
                const Term& s, const Term& t) {
    SymbolId f = s.sym();
    std::vector<LayerElem> left = layer_of(s.args());
    std::vector<LayerElem> right = layer_of(t.args());
    cancel_common(left, right);
    if (left.empty() && right.empty()) {
      std::vector<std::pair<Term, Term>> rest(eqs.begin() + idx, eqs.end());
      solve(rest, 0, sigma);
      return;
    }
    if (left.empty() || right.empty()) return;  // no identity element in B

    auto is_unit_var = [](const Term& u) { return u.is_var() && !u.var().frozen; };

    // cheap necessary conditions: after cancellation a non-variable element
    // can only be covered by a variable or a same-rooted element opposite
    // (equal elements are gone, and B has no collapse equations)
    auto coverable = [&](const Term& e, const std::vector<LayerElem>& other) {
      for (auto& o : other) {
        if (is_unit_var(o.term)) return true;
        if (e.is_app() && o.term.is_app() && e.sym() == o.term.sym()) return true;
      }
      return false;
    };
    for (auto& e : left)
      if (!is_unit_var(e.term) && !coverable(e.term, right)) return;
    for (auto& e : right)
      if (!is_unit_var(e.term) && !coverable(e.term, left)) return;

    std::vector<int> a, b;
    for (auto& e : left) a.push_back(e.mult);
    for (auto& e : right) b.push_back(e.mult);
    std::vector<DioSolution> basis;
    enum_solutions(a, b, basis);

    // a basis vector assigning >= 2 units to a non-variable element is unusable
    basis.erase(std::remove_if(basis.begin(), basis.end(),
                               [&](const DioSolution& d) {
                                 for (size_t i = 0; i < left.size(); ++i)
                                   if (!is_unit_var(left[i].term) && d.x[i] >= 2) return true;
                                 for (size_t j = 0; j < right.size(); ++j)
                                   if (!is_unit_var(right[j].term) && d.y[j] >= 2) return true;
                                 return false;
                               }),
                basis.end());
    if (basis.empty()) return;
    const size_t n = basis.size();
    const size_t ne = left.size() + right.size();

    auto covers = [&](const DioSolution& d, size_t e) {
      return e < left.size() ? d.x[e] > 0 : d.y[e - left.size()] > 0;
    };
    auto count_of = [&](const DioSolution& d, size_t e) {
      return e < left.size() ? d.x[e] : d.y[e - left.size()];
    };
    auto elem_term = [&](size_t e) -> const Term& {
      return e < left.size() ? left[e].term : right[e - left.size()].term;
    };

    // enumerate covering subsets with pruning, then order (size, lex)
    std::vector<std::vector<int>> chosen_sets;
    std::vector<int> cover(ne, 0);
    std::vector<int> cur;
    std::function<void(size_t)> enumerate = [&](size_t i) {
      if (--budget < 0) throw TheoryError("B-unification budget exceeded");
      // prune: every still-uncovered element must be coverable by remaining vectors
      for (size_t e = 0; e < ne; ++e) {
        if (cover[e] > 0) continue;
        bool possible = false;
        for (size_t k = i; k < n && !possible; ++k) possible = covers(basis[k], e);
        if (!possible) return;
      }
      if (i == n) {
        bool ok = !cur.empty();
        for (size_t e = 0; e < ne && ok; ++e) {
          if (is_unit_var(elem_term(e)))
            ok = cover[e] >= 1;
          else
            ok = cover[e] == 1;
        }
        if (ok) chosen_sets.push_back(cur);
        return;
      }
      // exclude basis[i]
      enumerate(i + 1);
      // include basis[i] unless it overfills a non-variable element
      bool feasible = true;
      for (size_t e = 0; e < ne && feasible; ++e)
        if (!is_unit_var(elem_term(e)) && cover[e] + count_of(basis[i], e) > 1) feasible = false;
      if (feasible) {
        for (size_t e = 0; e < ne; ++e) cover[e] += count_of(basis[i], e);
        cur.push_back(static_cast<int>(i));
        enumerate(i + 1);
        cur.pop_back();
        for (size_t e = 0; e < ne; ++e) cover[e] -= count_of(basis[i], e);
      }
    };
    enumerate(0);
    std::sort(chosen_sets.begin(), chosen_sets.end(),
              [](const std::vector<int>& p, const std::vector<int>& q) {
                if (p.size() != q.size()) return p.size() < q.size();
                return p < q;
              });

    SortId zsort = th.sorts.kind_of(th.symbol(f).result_sort);
    std::vector<std::pair<Term, Term>> rest(eqs.begin() + idx, eqs.end());
    for (const auto& set : chosen_sets) {
      if (done()) return;
      // one fresh unit variable per selected basis vector
      std::vector<Term> unit;
      long saved = temp_counter;
      for (size_t k = 0; k < set.size(); ++k) unit.push_back(Term::make_var(fresh_temp(zsort)));
      std::vector<std::pair<Term, Term>> next;
      for (size_t e = 0; e < ne; ++e) {
        std::vector<Term> parts;
        for (size_t k = 0; k < set.size(); ++k) {
          int c = count_of(basis[set[k]], e);
          for (int r = 0; r < c; ++r) parts.push_back(unit[k]);
        }
        Term image;
        if (parts.size() == 1) {
          image = parts[0];
        } else {
          image = Term::make_app(th, f, parts);
        }
        const Term& et = elem_term(e);
        if (is_unit_var(et)) {
          next.emplace_back(et, image);
        } else {
          next.emplace_back(image, et);  // image is a single unit var here
        }
      }
      next.insert(next.end(), rest.begin(), rest.end());
      solve(next, 0, sigma);
      temp_counter = saved;
    }
  }
};

// Necessary conditions for a B-match of pattern against a rigid subject:
// same root symbols, AC layer sizes compatible, ground pattern elements
// present in the subject layer. Purely a fast-fail filter.
bool same_var_loose(const Var& a, const Var& b) {
  return a.name == b.name && a.sort == b.sort;  // ignores the frozen flag
}

bool may_match(const Theory& th, const Term& pat, const Term& subj) {
  if (pat.is_var()) {
    if (pat.var().frozen) return subj.is_var() && same_var_loose(subj.var(), pat.var());
    return th.sorts.same_component(pat.least_sort(), subj.least_sort());
  }
  if (!subj.is_app() || subj.sym() != pat.sym()) return false;
  const Symbol& f = th.symbol(pat.sym());
  if (!f.ac()) {
    if (pat.args().size() != subj.args().size()) return false;
    for (size_t i = 0; i < pat.args().size(); ++i)
      if (!may_match(th, pat.args()[i], subj.args()[i])) return false;
    return true;
  }
  if (pat.args().size() > subj.args().size()) return false;
  size_t pat_vars = 0;
  for (auto& e : pat.args())
    if (e.is_var() && !e.var().frozen) ++pat_vars;
  if (pat_vars == 0 && pat.args().size() != subj.args().size()) return false;
  // every non-var pattern element needs a same-rooted (or equal) subject elem
  for (auto& e : pat.args()) {
    if (e.is_var() && !e.var().frozen) continue;
    bool ok = false;
    for (auto& s : subj.args()) {
      if (e.is_var() ? (s.is_var() && same_var_loose(s.var(), e.var()))
                     : (s.is_app() && s.sym() == e.sym())) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  // ground pattern elements must occur in the subject multiset, with
  // multiplicity (both layers are sorted, walk them in step)
  {
    size_t j = 0;
    for (size_t i = 0; i < pat.args().size(); ++i) {
      const Term& e = pat.args()[i];
      if (e.is_var() || !vars_of(e).empty()) continue;
      bool found = false;
      while (j < subj.args().size()) {
        int c = compare(subj.args()[j], e);
        ++j;
        if (c == 0) {
          found = true;
          break;
        }
        if (c > 0) break;
      }
      if (!found) return false;
    }
  }
  return true;
}

Term freeze_term(const Term& t) {
  if (t.is_var()) {
    Var v = t.var();
    v.frozen = true;
    return Term::make_var(v);
  }
  return t;  // frozen recursively below
}

Term deep_freeze(const Theory& th, const Term& t) {
  if (t.is_var()) return freeze_term(t);
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (auto& a : t.args()) args.push_back(deep_freeze(th, a));
  return Term::make_app(th, t.sym(), std::move(args));
}

Term deep_unfreeze(const Theory& th, const Term& t) {
  if (t.is_var()) {
    Var v = t.var();
    v.frozen = false;
    return Term::make_var(v);
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (auto& a : t.args()) args.push_back(deep_unfreeze(th, a));
  return Term::make_app(th, t.sym(), std::move(args));
}

void collect_free_vars(const Term& t, std::vector<Var>& out) {
  if (t.is_var()) {
    if (!t.var().frozen && std::find(out.begin(), out.end(), t.var()) == out.end())
      out.push_back(t.var());
    return;
  }
  for (auto& a : t.args()) collect_free_vars(a, out);
}

void key_term(const Term& t, std::map<Var, int>& seen, std::ostringstream& os) {
  if (t.is_var()) {
    if (t.var().frozen) {
      os << "F(" << t.var().name << "," << t.var().sort << ")";
      return;
    }
    auto it = seen.find(t.var());
    if (it == seen.end()) it = seen.emplace(t.var(), static_cast<int>(seen.size())).first;
    os << "v" << it->second << ":" << t.var().sort;
    return;
  }
  os << t.sym_name() << "(";
  for (auto& a : t.args()) {
    key_term(a, seen, os);
    os << ",";
  }
  os << ")";
}

}  // namespace

/// Canonical key of a substitution on W, up to renaming of non-frozen range
/// variables. Used for result deduplication.
std::string subst_key(const Subst& s, const std::vector<Var>& w) {
  std::map<Var, int> seen;
  std::ostringstream os;
  for (auto& v : w) {
    auto it = s.bindings().find(v);
    os << v.name << ":" << v.sort << "=";
    if (it == s.bindings().end()) {
      os << "*";
    } else {
      key_term(it->second, seen, os);
    }
    os << ";";
  }
  return os.str();
}

std::vector<BSolution> unify_b(const Theory& th, const BProblem& p, FreshCounter& fresh) {
  ++g_unify_calls;
  std::vector<Var> w;
  for (auto& [l, r] : p.equations) {
    collect_free_vars(l, w);
    collect_free_vars(r, w);
  }
  Solver solver(th);
  solver.solve(p.equations, 0, Subst{});

  std::vector<BSolution> result;
  std::set<std::string> seen;
  for (auto& sigma : solver.out) {
    // finalize: restrict to problem vars and pad ranges away from them
    Subst rho;
    std::vector<Var> range_vars;
    for (auto& x : w) {
      auto it = sigma.bindings().find(x);
      if (it == sigma.bindings().end()) continue;
      collect_free_vars(it->second, range_vars);
    }
    for (auto& v : range_vars) rho.set(v, Term::make_var(fresh.next_unify(v.sort)));
    BSolution sol;
    for (auto& x : w) {
      auto it = sigma.bindings().find(x);
      if (it != sigma.bindings().end()) {
        Term img = apply(th, rho, it->second);
        sol.subst.set(x, img);
        if (!img.is_var()) sol.forced.push_back(x);
      } else if (rho.binds(x)) {
        sol.subst.set(x, rho.get(th, x));
      }
    }
    std::string key = subst_key(sol.subst, w);
    if (seen.insert(key).second) result.push_back(std::move(sol));
  }

  // Best-effort local minimization: drop solutions strictly B-subsumed by
  // another. Bounded (small solver budget, skipped for large sets) -- a
  // missed removal only leaves a redundant, still-correct unifier.
  if (result.size() > 1 && result.size() <= 12) {
    auto bounded_subsumes = [&](const Subst& g, const Subst& s) {
      std::vector<std::pair<Term, Term>> eqs;
      for (auto& v : w) {
        Term pat = g.get(th, v), sub = s.get(th, v);
        if (!may_match(th, pat, sub)) return false;
        eqs.emplace_back(pat, deep_freeze(th, sub));
      }
      Solver sv(th);
      sv.budget = 3000;
      sv.max_solutions = 1;
      try {
        sv.solve(eqs, 0, Subst{});
      } catch (const TheoryError&) {
        return false;  // budget hit: treat as incomparable
      }
      return !sv.out.empty();
    };
    std::vector<bool> dead(result.size(), false);
    for (size_t i = 0; i < result.size(); ++i) {
      for (size_t j = 0; j < result.size(); ++j) {
        if (i == j || dead[i] || dead[j]) continue;
        if (bounded_subsumes(result[i].subst, result[j].subst) &&
            !bounded_subsumes(result[j].subst, result[i].subst))
          dead[j] = true;
      }
    }
    std::vector<BSolution> min;
    for (size_t i = 0; i < result.size(); ++i)
      if (!dead[i]) min.push_back(std::move(result[i]));
    return min;
  }
  return result;
}

std::vector<Subst> match_b_tuple(const Theory& th, const std::vector<Term>& patterns,
                                 const std::vector<Term>& subjects, size_t max_results) {
  if (patterns.size() != subjects.size())
    throw TheoryError("match_b_tuple: arity mismatch");
  ++g_match_calls;
  for (size_t i = 0; i < patterns.size(); ++i)
    if (!may_match(th, patterns[i], subjects[i])) { ++g_mm_rejects; return {}; }
  // cheapest-first equation order (rigid patterns before ones with choice
  // points); only the search order changes, not the matcher set
  std::vector<size_t> order(patterns.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto cost = [&](size_t i) {
    const Term& p = patterns[i];
    if (p.is_var()) return p.var().frozen ? 0 : 3;
    if (vars_of(p).empty()) return 0;
    const Symbol& s = th.symbol(p.sym());
    return s.ac() || s.comm ? 2 : 1;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t i, size_t j) { return cost(i) < cost(j); });
  std::vector<std::pair<Term, Term>> eqs;
  for (size_t i : order) eqs.emplace_back(patterns[i], deep_freeze(th, subjects[i]));
  std::vector<Var> pvars;
  for (auto& p : patterns) collect_free_vars(p, pvars);

  Solver solver(th);
  solver.max_solutions = max_results;
  solver.solve(eqs, 0, Subst{});

  std::vector<Subst> result;
  std::set<std::string> seen;
  for (auto& sigma : solver.out) {
    Subst m;
    for (auto& x : pvars) {
      auto it = sigma.bindings().find(x);
      if (it != sigma.bindings().end()) m.set(x, deep_unfreeze(th, it->second));
    }
    std::string key = subst_key(m, pvars);
    if (seen.insert(key).second) result.push_back(std::move(m));
  }
  return result;
}

std::vector<Subst> match_b(const Theory& th, const Term& pattern, const Term& subject,
                           size_t max_results) {
  return match_b_tuple(th, {pattern}, {subject}, max_results);
}

Term freeze_rigid(const Theory& th, const Term& t) { return deep_freeze(th, t); }

std::optional<Subst> b_match_first(const Theory& th, const Term& pattern,
                                   const Term& frozen_subject) {
  if (!may_match(th, pattern, frozen_subject)) return std::nullopt;
  Solver solver(th);
  solver.max_solutions = 1;
  solver.solve({{pattern, frozen_subject}}, 0, Subst{});
  if (solver.out.empty()) return std::nullopt;
  Subst m;
  std::vector<Var> pvars;
  collect_free_vars(pattern, pvars);
  for (auto& x : pvars) {
    auto it = solver.out.front().bindings().find(x);
    if (it != solver.out.front().bindings().end()) m.set(x, deep_unfreeze(th, it->second));
  }
  return m;
}

long g_bme_calls = 0;
long g_bme_solver = 0;

bool b_match_exists(const Theory& th, const std::vector<Term>& patterns,
                    const std::vector<Term>& frozen_subjects) {
  ++g_bme_calls;
  for (size_t i = 0; i < patterns.size(); ++i)
    if (!may_match(th, patterns[i], frozen_subjects[i])) return false;
  ++g_bme_solver;
  std::vector<std::pair<Term, Term>> eqs;
  eqs.reserve(patterns.size());
  for (size_t i = 0; i < patterns.size(); ++i)
    eqs.emplace_back(patterns[i], frozen_subjects[i]);
  Solver solver(th);
  solver.max_solutions = 1;
  solver.solve(eqs, 0, Subst{});
  return !solver.out.empty();
}

bool subsumes_b(const Theory& th, const Subst& s_general, const Subst& s_specific,
                const std::vector<Var>& w) {
  std::vector<Term> pats, subs;
  for (auto& v : w) {
    pats.push_back(s_general.get(th, v));
    subs.push_back(s_specific.get(th, v));
  }
  return !match_b_tuple(th, pats, subs, 1).empty();
}

}  // namespace vunify
