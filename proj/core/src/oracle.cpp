#include "vunify/oracle.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <string>

#include "vunify/errors.hpp"

namespace vunify {

namespace {

void collect_symbols(const Term& t, std::set<SymbolId>& out) {
  if (t.is_var()) return;
  out.insert(t.sym());
  for (auto& a : t.args()) collect_symbols(a, out);
}

}  // namespace

std::vector<Term> oracle_universe(const Theory& th, const std::vector<std::pair<Term, Term>>& eqs,
                                  const OracleConfig& cfg) {
  // symbols eligible for term construction: the non-constant symbols that
  // occur in the equations (keeps the universe at desk scale)
  std::set<SymbolId> syms;
  for (auto& [l, r] : eqs) {
    collect_symbols(l, syms);
    collect_symbols(r, syms);
  }

  std::vector<Term> universe = cfg.constants;
  std::set<std::string> seen;
  auto key = [&](const Term& t) {
    // ground terms: structural identity via recursive print
    std::string s;
    std::function<void(const Term&)> go = [&](const Term& u) {
      if (u.is_var()) {
        s += u.var().name;
        return;
      }
      s += u.sym_name();
      s += "(";
      for (auto& a : u.args()) {
        go(a);
        s += ",";
      }
      s += ")";
    };
    go(t);
    return s;
  };
  for (auto& t : universe) seen.insert(key(t));

  for (int d = 0; d < cfg.depth; ++d) {
    std::vector<Term> prev = universe;
    for (SymbolId sid : syms) {
      const Symbol& s = th.symbol(sid);
      if (s.arity() == 0) continue;
      // enumerate argument tuples over the previous level
      std::vector<size_t> idx(s.arity(), 0);
      while (true) {
        std::vector<Term> args;
        bool well_sorted = true;
        for (int i = 0; i < s.arity() && well_sorted; ++i) {
          const Term& a = prev[idx[i]];
          if (!th.sorts.same_component(a.least_sort(), s.arg_sorts[i])) well_sorted = false;
          args.push_back(a);
        }
        if (well_sorted) {
          Term t = Term::make_app(th, sid, std::move(args));
          if (static_cast<long>(universe.size()) > cfg.budget)
            throw OracleBudgetError("oracle universe exceeded its budget");
          if (seen.insert(key(t)).second) universe.push_back(t);
        }
        int i = s.arity() - 1;
        while (i >= 0 && ++idx[i] == prev.size()) idx[i--] = 0;
        if (i < 0) break;
      }
    }
  }
  return universe;
}

std::vector<Subst> ground_oracle(const Theory& th, const std::vector<std::pair<Term, Term>>& eqs,
                                 const OracleConfig& cfg) {
  std::vector<Term> universe = oracle_universe(th, eqs, cfg);
  std::vector<Var> vars;
  for (auto& [l, r] : eqs) {
    collect_vars(l, vars);
    collect_vars(r, vars);
  }
  const int n = static_cast<int>(vars.size());

  // candidate images per variable, filtered by sort component
  std::vector<std::vector<Term>> candidates(n);
  for (int i = 0; i < n; ++i)
    for (auto& t : universe)
      if (th.sorts.same_component(t.least_sort(), vars[i].sort)) candidates[i].push_back(t);

  long total = 1;
  for (int i = 0; i < n; ++i) {
    total *= static_cast<long>(candidates[i].size());
    if (total > cfg.budget)
      throw OracleBudgetError("oracle candidate count " + std::to_string(total) +
                              " exceeds the budget of " + std::to_string(cfg.budget));
  }

  std::vector<Subst> out;
  std::vector<size_t> idx(n, 0);
  while (true) {
    Subst gamma;
    for (int i = 0; i < n; ++i) gamma.set(vars[i], candidates[i][idx[i]]);
    bool ok = true;
    for (auto& [l, r] : eqs) {
      Term a = normalize(th, apply(th, gamma, l));
      Term b = normalize(th, apply(th, gamma, r));
      if (!(a == b)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(std::move(gamma));
    int i = n - 1;
    while (i >= 0 && ++idx[i] == candidates[i].size()) idx[i--] = 0;
    if (i < 0 || n == 0) break;
  }
  return out;
}

}  // namespace vunify
