#include "vunify/printer.hpp"

#include <set>
#include <sstream>

namespace vunify {

std::string sort_to_string(const Theory& th, SortId s) { return th.sorts.name(s); }

std::string var_to_string(const Theory& th, const Var& v) {
  // fresh #n / %n variables carry their sort; named variables print bare
  if (!v.name.empty() && (v.name[0] == '#' || v.name[0] == '%'))
    return v.name + ":" + th.sorts.name(v.sort);
  return v.name;
}

namespace {

bool is_infix(const Symbol& s) {
  return s.name.size() >= 3 && s.name.front() == '_' && s.name.back() == '_' &&
         s.name.find('_', 1) == s.name.size() - 1;
}

bool is_prefix(const Symbol& s) {
  return s.name.size() >= 2 && s.name.back() == '_' && s.name.find('_') == s.name.size() - 1;
}

std::string infix_token(const Symbol& s) { return s.name.substr(1, s.name.size() - 2); }
std::string prefix_token(const Symbol& s) { return s.name.substr(0, s.name.size() - 1); }

std::string print_term(const Theory& th, const Term& t, bool parenthesize) {
  if (t.is_var()) return var_to_string(th, t.var());
  const Symbol& s = th.symbol(t.sym());
  if (t.args().empty()) return s.name;
  if (is_infix(s)) {
    std::ostringstream os;
    if (parenthesize) os << "(";
    for (size_t i = 0; i < t.args().size(); ++i) {
      if (i) os << " " << infix_token(s) << " ";
      os << print_term(th, t.args()[i], true);
    }
    if (parenthesize) os << ")";
    return os.str();
  }
  if (is_prefix(s)) {
    const Term& a = t.args()[0];
    bool wrap = a.is_app() && !a.args().empty();
    return prefix_token(s) + " " + print_term(th, a, wrap);
  }
  std::ostringstream os;
  os << s.name << "(";
  for (size_t i = 0; i < t.args().size(); ++i) {
    if (i) os << ", ";
    os << print_term(th, t.args()[i], false);
  }
  os << ")";
  return os.str();
}

}  // namespace

std::string term_to_string(const Theory& th, const Term& t) { return print_term(th, t, false); }

std::string subst_to_string(const Theory& th, const Subst& s, const std::vector<Var>& order,
                            bool include_unbound) {
  std::ostringstream os;
  for (const auto& v : order) {
    auto it = s.bindings().find(v);
    if (it == s.bindings().end() && !include_unbound) continue;
    Term img = it == s.bindings().end() ? Term::make_var(v) : it->second;
    os << v.name << " --> " << term_to_string(th, img) << "\n";
  }
  return os.str();
}

std::pair<Term, Subst> display_rename(const Theory& th, const Term& t, const Subst& s,
                                      const std::vector<Var>& order) {
  FreshCounter local;
  Subst renaming;
  std::set<Var> visited;
  auto visit = [&](const Term& u, auto&& self) -> void {
    if (u.is_var()) {
      if (!u.var().frozen && visited.insert(u.var()).second)
        renaming.set(u.var(), Term::make_var(local.next_unify(u.var().sort)));
      return;
    }
    for (auto& a : u.args()) self(a, self);
  };
  if (!t.null()) visit(t, visit);
  for (const auto& v : order) {
    Term img = s.get(th, v);
    visit(img, visit);
  }
  Term rt = t.null() ? t : apply(th, renaming, t);
  Subst rs;
  for (const auto& v : order) rs.set(v, apply(th, renaming, s.get(th, v)));
  return {rt, rs};
}

std::string variant_block(const Theory& th, const VariantTree& tree, int kept_index) {
  const Variant& v = tree.nodes[tree.kept[kept_index]];
  auto [rt, rs] = display_rename(th, v.term, v.subst, tree.root_vars);
  std::ostringstream os;
  os << "Variant #" << (kept_index + 1) << "\n";
  os << sort_to_string(th, rt.least_sort()) << ": " << term_to_string(th, rt) << "\n";
  os << subst_to_string(th, rs, tree.root_vars, true);
  return os.str();
}

std::string unifier_block(const Theory& th, const Subst& u, const std::vector<Var>& problem_vars,
                          int index) {
  auto [rt, rs] = display_rename(th, Term{}, u, problem_vars);
  std::ostringstream os;
  os << "Unifier #" << index << "\n";
  os << subst_to_string(th, rs, problem_vars, true);
  return os.str();
}

}  // namespace vunify
