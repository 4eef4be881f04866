#include "vunify/theory.hpp"

#include <algorithm>

#include "vunify/errors.hpp"

namespace vunify {

long Theory::next_uid() {
  static long counter = 0;
  return ++counter;
}

SymbolId Theory::add_symbol(Symbol s) {
  if (symbol_index_.count(s.name))
    throw TheoryError("symbol '" + s.name + "' declared twice");
  symbols_.push_back(s);
  SymbolId id = static_cast<SymbolId>(symbols_.size() - 1);
  symbol_index_[s.name] = id;
  return id;
}

std::optional<SymbolId> Theory::find_symbol(const std::string& name) const {
  auto it = symbol_index_.find(name);
  if (it == symbol_index_.end()) return std::nullopt;
  return it->second;
}

void Theory::validate() const {
  for (const auto& s : symbols_) {
    if (s.assoc && !s.comm)
      throw TheoryError("symbol '" + s.name +
                        "': associativity without commutativity is not supported "
                        "(infinitary unification)");
    if (s.comm) {
      if (s.arity() != 2)
        throw TheoryError("comm symbol '" + s.name + "' must be binary");
      if (s.arg_sorts[0] != s.arg_sorts[1])
        throw TheoryError("comm symbol '" + s.name + "' needs equal argument sorts");
    }
    if (s.assoc) {
      if (!sorts.same_component(s.arg_sorts[0], s.result_sort) ||
          !sorts.same_component(s.arg_sorts[1], s.result_sort))
        throw TheoryError("assoc symbol '" + s.name +
                          "' must stay within one sort component");
    }
  }
  for (const auto& r : rules_) {
    if (r.lhs.is_var())
      throw TheoryError("rule '" + r.label + "': left-hand side is a variable");
    std::vector<Var> lv = vars_of(r.lhs), rv = vars_of(r.rhs);
    for (auto& v : rv)
      if (std::find(lv.begin(), lv.end(), v) == lv.end())
        throw TheoryError("rule '" + r.label + "': right-hand side variable '" + v.name +
                          "' does not occur on the left");
    SortId ls = r.lhs.least_sort(), rs = r.rhs.least_sort();
    if (!sorts.same_component(ls, rs) || !sorts.leq(rs, ls))
      throw TheoryError("rule '" + r.label + "' is not sort-decreasing");
  }
}

std::vector<std::string> Theory::coherence_warnings() const {
  std::vector<std::string> out;
  for (const auto& r : rules_) {
    if (!r.lhs.is_app()) continue;
    const Symbol& s = symbols_[r.lhs.sym()];
    if (!s.ac()) continue;
    size_t layer = r.lhs.args().size();
    bool has_extension = false, is_extension = false;
    for (const auto& r2 : rules_) {
      if (&r2 == &r) continue;
      if (!r2.lhs.is_app() || r2.lhs.sym() != r.lhs.sym()) continue;
      if (r2.lhs.args().size() == layer + 1) has_extension = true;
      if (r2.lhs.args().size() + 1 == layer) is_extension = true;
    }
    if (!has_extension && !is_extension)
      out.push_back("rule '" + r.label + "': AC-rooted left-hand side has no extension-style "
                    "sibling rule; the theory may not be coherent modulo AC");
  }
  return out;
}

FrozenTheory freeze_vars(const Theory& th, const std::vector<Var>& vars) {
  FrozenTheory out;
  out.theory = th;
  int n = 0;
  for (const auto& v : vars) {
    if (v.frozen) continue;
    if (out.const_of_var.count(v)) continue;
    Symbol c;
    c.name = ".frz$" + std::to_string(n++) + "$" + v.name;
    c.result_sort = v.sort;
    c.frozen_marker = true;
    SymbolId id = out.theory.add_symbol(c);
    out.const_of_var[v] = id;
    out.var_of_const[id] = v;
  }
  return out;
}

}  // namespace vunify
