#include "vunify/rewrite.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "vunify/ax_unify.hpp"
#include "vunify/errors.hpp"

namespace vunify {

long g_rr_calls = 0;

std::string subst_key(const Subst& s, const std::vector<Var>& w);  // ax_unify.cpp

namespace {

struct NormCacheKey {
  long uid;
  Term term;
  bool operator==(const NormCacheKey& o) const { return uid == o.uid && term == o.term; }
};
struct NormCacheHash {
  size_t operator()(const NormCacheKey& k) const {
    return k.term.hash() ^ (static_cast<size_t>(k.uid) * 0x9e3779b97f4a7c15ULL);
  }
};
using NormCache = std::unordered_map<NormCacheKey, Term, NormCacheHash>;

NormCache& norm_cache() {
  thread_local NormCache cache;
  if (cache.size() > 1000000) cache.clear();
  return cache;
}

struct Rewriter {
  const Theory& th;
  long steps_left;

  Term normalize(const Term& t) {
    if (t.is_var()) return t;
    NormCache& cache = norm_cache();
    NormCacheKey key{th.uid, t};
    auto hit = cache.find(key);
    if (hit != cache.end()) return hit->second;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (auto& a : t.args()) args.push_back(normalize(a));
    Term u = Term::make_app(th, t.sym(), std::move(args));
    // a root contractum is re-normalized recursively (innermost strategy)
    auto red = root_rewrite(u);
    Term result = red ? normalize(*red) : u;
    cache.emplace(std::move(key), result);
    return result;
  }

  std::optional<Term> root_rewrite(const Term& u) {
    if (!u.is_app()) return std::nullopt;
    ++g_rr_calls;
    const Symbol& f = th.symbol(u.sym());
    Term frozen_u = freeze_rigid(th, u);
    for (size_t ri = 0; ri < th.rules().size(); ++ri) {
      const Rule& r = th.rules()[ri];
      // whole-term match
      if (auto m = b_match_first(th, r.lhs, frozen_u)) {
        spend(r);
        return apply(th, *m, r.rhs);
      }
      // AC layer: match any proper sub-multiset through an extension variable
      if (f.ac() && r.lhs.is_app() && r.lhs.sym() == u.sym() &&
          r.lhs.args().size() < u.args().size()) {
        SortId ext_sort = th.sorts.kind_of(f.result_sort);
        Var ext{".ext", ext_sort, false};
        std::vector<Term> pat_args = r.lhs.args();
        pat_args.push_back(Term::make_var(ext));
        Term pattern = Term::make_app(th, u.sym(), std::move(pat_args));
        if (auto m = b_match_first(th, pattern, frozen_u)) {
          spend(r);
          Term rem = m->get(th, ext);
          Term rhs = apply(th, restrict_without(*m, ext), r.rhs);
          return Term::make_app(th, u.sym(), {rhs, rem});
        }
      }
    }
    return std::nullopt;
  }

  static Subst restrict_without(const Subst& s, const Var& v) {
    Subst out = s;
    out.erase(v);
    return out;
  }

  void spend(const Rule& r) {
    if (--steps_left < 0)
      throw NonTerminationError(
          "rewriting exceeded the step budget; last rule applied: '" + r.label + "'", r.label);
  }
};

}  // namespace

Term normalize(const Theory& th, const Term& t, long step_budget) {
  // Rename variables canonically first: normalization commutes with
  // renaming, so alpha-equivalent inputs share every cache entry.
  Subst fwd, back;
  int counter = 0;
  auto visit = [&](const Term& u, auto&& self) -> void {
    if (u.is_var()) {
      if (u.var().frozen || fwd.binds(u.var())) return;
      Var cv{".c" + std::to_string(counter++), u.var().sort, false};
      if (cv == u.var()) return;
      fwd.set(u.var(), Term::make_var(cv));
      back.set(cv, Term::make_var(u.var()));
      return;
    }
    for (auto& a : u.args()) self(a, self);
  };
  visit(t, visit);
  Term tc = apply(th, fwd, t);
  Rewriter rw{th, step_budget};
  Term rc = rw.normalize(tc);
  return apply(th, back, rc);
}

namespace {

void collect_positions(const Theory& th, const Term& t, std::vector<int>& path,
                       std::vector<Position>& out) {
  if (t.is_var()) return;
  out.push_back({path, {}});
  // proper sub-multisets of an AC layer are positions too (size >= 2)
  if (th.symbol(t.sym()).ac() && t.args().size() >= 3) {
    int n = static_cast<int>(t.args().size());
    // layer args are sorted, so equal elements are adjacent; class index of
    // each arg gives an exact multiset signature for dedup
    std::vector<int> cls(n, 0);
    for (int i = 1; i < n; ++i) cls[i] = t.args()[i] == t.args()[i - 1] ? cls[i - 1] : i;
    std::set<std::vector<int>> seen_multisets;
    for (int size = 2; size < n; ++size) {
      std::vector<int> idx(size);
      std::function<void(int, int)> combos = [&](int start, int k) {
        if (k == size) {
          std::vector<int> sig;
          for (int i : idx) sig.push_back(cls[i]);
          if (seen_multisets.insert(sig).second) out.push_back({path, idx});
          return;
        }
        for (int i = start; i < n; ++i) {
          idx[k] = i;
          combos(i + 1, k + 1);
        }
      };
      combos(0, 0);
    }
  }
  for (size_t i = 0; i < t.args().size(); ++i) {
    path.push_back(static_cast<int>(i));
    collect_positions(th, t.args()[i], path, out);
    path.pop_back();
  }
}

Term subterm_at(const Theory& th, const Term& t, const Position& p) {
  Term cur = t;
  for (int i : p.path) cur = cur.args()[i];
  if (p.ac_subset.empty()) return cur;
  std::vector<Term> sel;
  for (int i : p.ac_subset) sel.push_back(cur.args()[i]);
  return Term::make_app(th, cur.sym(), std::move(sel));
}

Term replace_at(const Theory& th, const Term& t, const Position& p, size_t depth,
                const Term& replacement) {
  if (depth == p.path.size()) {
    if (p.ac_subset.empty()) return replacement;
    std::vector<Term> rest;
    std::set<int> chosen(p.ac_subset.begin(), p.ac_subset.end());
    for (int i = 0; i < static_cast<int>(t.args().size()); ++i)
      if (!chosen.count(i)) rest.push_back(t.args()[i]);
    rest.push_back(replacement);
    return Term::make_app(th, t.sym(), std::move(rest));
  }
  std::vector<Term> args = t.args();
  int i = p.path[depth];
  args[i] = replace_at(th, args[i], p, depth + 1, replacement);
  return Term::make_app(th, t.sym(), std::move(args));
}

}  // namespace

std::vector<NarrowStep> narrow_steps(const Theory& th, const Term& t, FreshCounter& fresh,
                                     long step_budget) {
  std::vector<NarrowStep> out;
  std::vector<Position> positions;
  std::vector<int> path;
  collect_positions(th, t, path, positions);
  std::vector<Var> tvars = vars_of(t);

  std::set<std::string> seen;
  for (const auto& pos : positions) {
    Term sub = subterm_at(th, t, pos);
    for (size_t ri = 0; ri < th.rules().size(); ++ri) {
      const Rule& rule = th.rules()[ri];
      // rename the rule apart with narrowing variables
      auto [lhs_r, renaming] = rename_apart(th, rule.lhs, fresh, FreshKind::Narrow);
      Term rhs_r = apply(th, renaming, rule.rhs);
      BProblem prob;
      prob.equations.emplace_back(sub, lhs_r);
      for (auto& sol : unify_b(th, prob, fresh)) {
        Term replaced = replace_at(th, t, pos, 0, rhs_r);
        Term narrowed = normalize(th, apply(th, sol.subst, replaced), step_budget);
        Subst edge = restrict_to(sol.subst, tvars);
        // dedup up to renaming + B over (term, edge images)
        std::vector<Var> keyw = tvars;
        Subst key_s = edge;
        Var tkey{".t", narrowed.least_sort(), false};
        key_s.set(tkey, narrowed);
        keyw.push_back(tkey);
        std::string key = subst_key(key_s, keyw);
        if (!seen.insert(key).second) continue;
        out.push_back({narrowed, edge, pos, static_cast<int>(ri)});
      }
    }
  }
  return out;
}

}  // namespace vunify
