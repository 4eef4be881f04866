// Order-sorted terms in canonical form modulo the structural axioms B.
//
// Application nodes of an assoc(+comm) symbol are flattened into one n-ary
// layer; comm and AC layers keep their arguments sorted under a global total
// term order. Two terms are B-equal iff they are structurally identical, so
// B-equality is plain equality on this representation.
#ifndef VUNIFY_TERM_HPP
#define VUNIFY_TERM_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "vunify/sorts.hpp"

namespace vunify {

using SymbolId = int32_t;

struct Symbol {
  std::string name;
  std::vector<SortId> arg_sorts;
  SortId result_sort = -1;
  bool assoc = false;
  bool comm = false;
  /// Frozen constants are invisible stand-ins for variables (see match_EB).
  bool frozen_marker = false;

  int arity() const { return static_cast<int>(arg_sorts.size()); }
  bool ac() const { return assoc && comm; }
};

class Theory;  // forward; terms are built against a theory's signature

/// A sorted variable. Frozen variables behave like constants: they are never
/// bound by unification or matching and compare like atoms.
struct Var {
  std::string name;
  SortId sort = -1;
  bool frozen = false;

  bool operator==(const Var& o) const {
    return frozen == o.frozen && sort == o.sort && name == o.name;
  }
  bool operator<(const Var& o) const {
    if (frozen != o.frozen) return frozen < o.frozen;
    if (name != o.name) return name < o.name;
    return sort < o.sort;
  }
};

struct TermData;

/// Immutable shared term handle. Construct only through make_var / make_app
/// so every term is canonical by construction.
class Term {
 public:
  Term() = default;

  bool null() const { return !p_; }
  bool is_var() const;
  bool is_app() const;
  const Var& var() const;
  SymbolId sym() const;
  const std::string& sym_name() const;
  const std::vector<Term>& args() const;
  SortId least_sort() const;
  size_t hash() const;

  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }

  static Term make_var(const Var& v);
  /// Builds a canonical application: flattens assoc layers, sorts comm/AC
  /// arguments, computes the least sort. Throws SortError when an argument is
  /// outside the declared argument sort's connected component.
  static Term make_app(const Theory& th, SymbolId sym, std::vector<Term> args);

 private:
  explicit Term(std::shared_ptr<const TermData> p) : p_(std::move(p)) {}
  std::shared_ptr<const TermData> p_;
};

/// Global total order: variables before applications; variables by
/// (frozen, name, sort); applications lexicographically by
/// (symbol name, arity, arguments).
int compare(const Term& a, const Term& b);

/// Re-canonicalizes a term bottom-up (identity on terms built via make_app);
/// exposed so tests can state canonicalize(canonicalize(t)) == canonicalize(t).
Term canonicalize(const Term& t, const Theory& th);

void collect_vars(const Term& t, std::vector<Var>& out);
std::vector<Var> vars_of(const Term& t);
bool contains_var(const Term& t, const Var& v);

struct TermHash {
  size_t operator()(const Term& t) const { return t.hash(); }
};

}  // namespace vunify

#endif
