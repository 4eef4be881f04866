#include "vunify/term.hpp"

#include <algorithm>

#include "vunify/errors.hpp"
#include "vunify/theory.hpp"

namespace vunify {

struct TermData {
  SymbolId sym = -1;  // -1: variable
  Var var;
  std::string sym_name;  // copy of the symbol name; keys the total order
  std::vector<Term> args;
  SortId lsort = -1;
  size_t hash = 0;
};

bool Term::is_var() const { return p_ && p_->sym < 0; }
const std::string& Term::sym_name() const { return p_->sym_name; }
bool Term::is_app() const { return p_ && p_->sym >= 0; }
const Var& Term::var() const { return p_->var; }
SymbolId Term::sym() const { return p_->sym; }
const std::vector<Term>& Term::args() const { return p_->args; }
SortId Term::least_sort() const { return p_->lsort; }
size_t Term::hash() const { return p_ ? p_->hash : 0; }

static size_t hash_mix(size_t h, size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

bool Term::operator==(const Term& o) const {
  if (p_ == o.p_) return true;
  if (!p_ || !o.p_) return false;
  if (p_->hash != o.p_->hash) return false;
  if (p_->sym != o.p_->sym) return false;
  if (p_->sym < 0) return p_->var == o.p_->var;
  if (p_->args.size() != o.p_->args.size()) return false;
  for (size_t i = 0; i < p_->args.size(); ++i)
    if (!(p_->args[i] == o.p_->args[i])) return false;
  return true;
}

Term Term::make_var(const Var& v) {
  auto d = std::make_shared<TermData>();
  d->sym = -1;
  d->var = v;
  d->lsort = v.sort;
  size_t h = std::hash<std::string>{}(v.name);
  h = hash_mix(h, static_cast<size_t>(v.sort));
  h = hash_mix(h, v.frozen ? 0x51u : 0x7fu);
  d->hash = h;
  return Term(std::move(d));
}

int compare(const Term& a, const Term& b) {
  bool av = a.is_var(), bv = b.is_var();
  if (av != bv) return av ? -1 : 1;
  if (av) {
    const Var& x = a.var();
    const Var& y = b.var();
    if (x.frozen != y.frozen) return x.frozen < y.frozen ? -1 : 1;
    if (int c = x.name.compare(y.name)) return c < 0 ? -1 : 1;
    if (x.sort != y.sort) return x.sort < y.sort ? -1 : 1;
    return 0;
  }
  // Applications: lexicographic on (symbol name, arity, arguments).
  if (a.sym() != b.sym()) {
    if (int c = a.sym_name().compare(b.sym_name())) return c < 0 ? -1 : 1;
    return a.sym() < b.sym() ? -1 : 1;
  }
  size_t n = a.args().size(), m = b.args().size();
  if (n != m) return n < m ? -1 : 1;
  for (size_t i = 0; i < n; ++i)
    if (int c = compare(a.args()[i], b.args()[i])) return c;
  return 0;
}

Term Term::make_app(const Theory& th, SymbolId sym, std::vector<Term> args) {
  const Symbol& s = th.symbol(sym);
  // Flatten nested layers of the same assoc symbol.
  std::vector<Term> flat;
  if (s.assoc) {
    for (auto& a : args) {
      if (a.is_app() && a.sym() == sym) {
        for (auto& sub : a.args()) flat.push_back(sub);
      } else {
        flat.push_back(a);
      }
    }
  } else {
    flat = std::move(args);
  }
  if (!s.assoc && static_cast<int>(flat.size()) != s.arity())
    throw SortError("symbol '" + s.name + "' expects " + std::to_string(s.arity()) +
                    " arguments, got " + std::to_string(flat.size()));
  if (s.assoc && flat.size() < 2)
    throw SortError("assoc symbol '" + s.name + "' needs at least 2 arguments");

  if (s.comm) std::stable_sort(flat.begin(), flat.end(),
                               [](const Term& x, const Term& y) { return compare(x, y) < 0; });

  // Sort check: each argument's least sort must lie in the declared argument
  // sort's connected component. For flattened layers every slot uses the
  // first declared argument sort (assoc requires one component anyway).
  const SortGraph& sg = th.sorts;
  bool all_leq = true;
  for (size_t i = 0; i < flat.size(); ++i) {
    SortId declared = s.arg_sorts[std::min<size_t>(i, s.arg_sorts.size() - 1)];
    SortId ls = flat[i].least_sort();
    if (!sg.same_component(ls, declared))
      throw SortError("argument " + std::to_string(i + 1) + " of '" + s.name +
                      "' is in the wrong sort component");
    if (!sg.leq(ls, declared)) all_leq = false;
  }
  auto d = std::make_shared<TermData>();
  d->sym = sym;
  d->sym_name = s.name;
  d->args = std::move(flat);
  d->lsort = all_leq ? s.result_sort : sg.kind_of(s.result_sort);
  size_t h = std::hash<std::string>{}(s.name);
  h = hash_mix(h, d->args.size());
  for (auto& a : d->args) h = hash_mix(h, a.hash());
  d->hash = h;
  return Term(std::move(d));
}

Term canonicalize(const Term& t, const Theory& th) {
  if (t.is_var()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (auto& a : t.args()) args.push_back(canonicalize(a, th));
  return Term::make_app(th, t.sym(), std::move(args));
}

void collect_vars(const Term& t, std::vector<Var>& out) {
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.var()) == out.end()) out.push_back(t.var());
    return;
  }
  for (auto& a : t.args()) collect_vars(a, out);
}

std::vector<Var> vars_of(const Term& t) {
  std::vector<Var> out;
  collect_vars(t, out);
  return out;
}

bool contains_var(const Term& t, const Var& v) {
  if (t.is_var()) return t.var() == v;
  for (auto& a : t.args())
    if (contains_var(a, v)) return true;
  return false;
}


}  // namespace vunify
