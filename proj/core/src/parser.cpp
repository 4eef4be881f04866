#include "vunify/parser.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "vunify/errors.hpp"
#include "vunify/printer.hpp"

namespace vunify {

namespace {

struct Token {
  std::string text;
  int line = 0;
  int col = 0;
};

bool is_special(char c) { return c == '(' || c == ')' || c == '[' || c == ']' || c == ',' || c == ':'; }

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    // line comments: *** or ---
    if ((c == '*' && text.compare(i, 3, "***") == 0) ||
        (c == '-' && text.compare(i, 3, "---") == 0)) {
      while (i < text.size() && text[i] != '\n') advance(text[i++]);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(c);
      ++i;
      continue;
    }
    if (is_special(c)) {
      out.push_back({std::string(1, c), line, col});
      advance(c);
      ++i;
      continue;
    }
    int tl = line, tc = col;
    std::string word;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
           !is_special(text[i])) {
      // don't swallow a comment start
      if ((text[i] == '*' && text.compare(i, 3, "***") == 0) ||
          (text[i] == '-' && text.compare(i, 3, "---") == 0))
        break;
      word += text[i];
      advance(text[i]);
      ++i;
    }
    if (!word.empty()) out.push_back({word, tl, tc});
  }
  return out;
}

struct Cursor {
  const std::vector<Token>* toks;
  size_t pos = 0;

  bool done() const { return pos >= toks->size(); }
  const Token& peek() const {
    if (done()) throw ParseError("unexpected end of input", last().line, last().col);
    return (*toks)[pos];
  }
  const Token& last() const {
    static Token eof{"", 0, 0};
    return toks->empty() ? eof : (*toks)[std::min(pos, toks->size() - 1)];
  }
  Token next() {
    const Token& t = peek();
    ++pos;
    return t;
  }
  bool accept(const std::string& s) {
    if (!done() && peek().text == s) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(const std::string& s) {
    if (done() || peek().text != s)
      throw ParseError("expected '" + s + "'" + (done() ? "" : ", found '" + peek().text + "'"),
                       last().line, last().col);
    ++pos;
  }
};

void check_user_name(const Token& t) {
  char c = t.text[0];
  if (c == '#' || c == '%' || c == '.' || c == '&')
    throw ParseError("identifier '" + t.text + "' uses a reserved prefix", t.line, t.col);
}

// sort reference: NAME or [NAME]; kinds resolve only after finalize
SortId parse_sort_ref(Cursor& cur, const Theory& th) {
  if (cur.accept("[")) {
    Token name = cur.next();
    cur.expect("]");
    auto s = th.sorts.find(name.text);
    if (!s) throw ParseError("unknown sort '" + name.text + "'", name.line, name.col);
    return th.sorts.kind_of(*s);
  }
  Token name = cur.next();
  auto s = th.sorts.find(name.text);
  if (!s) throw ParseError("unknown sort '" + name.text + "'", name.line, name.col);
  return *s;
}

struct TermParser {
  const Theory& th;
  Cursor& cur;

  bool infix_declared(const std::string& tok, SymbolId& out) const {
    auto id = th.find_symbol("_" + tok + "_");
    if (!id) return false;
    out = *id;
    return true;
  }
  bool prefix_declared(const std::string& tok, SymbolId& out) const {
    auto id = th.find_symbol(tok + "_");
    if (!id) return false;
    out = *id;
    return true;
  }

  Term parse() {
    Term t = primary();
    while (!cur.done()) {
      SymbolId op;
      if (!infix_declared(cur.peek().text, op)) break;
      cur.next();
      Term rhs = primary();
      t = Term::make_app(th, op, {t, rhs});
    }
    return t;
  }

  Term primary() {
    const Token& tok = cur.peek();
    SymbolId pre;
    if (prefix_declared(tok.text, pre)) {
      cur.next();
      Term arg = primary();
      return Term::make_app(th, pre, {arg});
    }
    if (cur.accept("(")) {
      Term t = parse();
      cur.expect(")");
      return t;
    }
    Token name = cur.next();
    if (!cur.done() && cur.peek().text == ":") {
      cur.next();
      SortId s = parse_sort_ref(cur, th);
      return Term::make_var(Var{name.text, s, false});
    }
    if (!cur.done() && cur.peek().text == "(") {
      cur.next();
      std::vector<Term> args;
      args.push_back(parse());
      while (cur.accept(",")) args.push_back(parse());
      cur.expect(")");
      auto id = th.find_symbol(name.text);
      if (!id)
        throw ParseError("unknown operator '" + name.text + "'", name.line, name.col);
      return Term::make_app(th, *id, std::move(args));
    }
    auto vd = th.var_decls().find(name.text);
    if (vd != th.var_decls().end())
      return Term::make_var(Var{name.text, vd->second, false});
    auto id = th.find_symbol(name.text);
    if (id && th.symbol(*id).arity() == 0) return Term::make_app(th, *id, {});
    throw ParseError("unknown identifier '" + name.text + "'", name.line, name.col);
  }
};

std::vector<std::string> parse_attrs(Cursor& cur) {
  std::vector<std::string> attrs;
  if (cur.accept("[")) {
    while (!cur.accept("]")) attrs.push_back(cur.next().text);
  }
  return attrs;
}

}  // namespace

ParseResult parse_theory(const std::string& text) {
  std::vector<Token> toks = tokenize(text);
  Cursor cur{&toks};
  ParseResult result;
  Theory& th = result.theory;

  cur.expect("fmod");
  th.name = cur.next().text;
  cur.expect("is");

  bool sorts_done = false;
  int eq_count = 0;
  auto finish_sorts = [&] {
    if (!sorts_done) {
      th.sorts.finalize();
      sorts_done = true;
    }
  };

  while (!cur.accept("endfm")) {
    Token head = cur.next();
    const std::string& kw = head.text;
    if (kw == "sort" || kw == "sorts") {
      if (sorts_done)
        throw ParseError("sorts must be declared before operators", head.line, head.col);
      while (cur.peek().text != ".") {
        Token n = cur.next();
        check_user_name(n);
        th.sorts.add_sort(n.text);
      }
      cur.expect(".");
    } else if (kw == "subsort" || kw == "subsorts") {
      if (sorts_done)
        throw ParseError("subsorts must be declared before operators", head.line, head.col);
      std::vector<std::vector<SortId>> groups(1);
      while (cur.peek().text != ".") {
        if (cur.accept("<")) {
          groups.emplace_back();
          continue;
        }
        Token n = cur.next();
        auto s = th.sorts.find(n.text);
        if (!s) throw ParseError("unknown sort '" + n.text + "'", n.line, n.col);
        groups.back().push_back(*s);
      }
      cur.expect(".");
      if (groups.size() < 2)
        throw ParseError("subsort declaration needs '<'", head.line, head.col);
      for (size_t g = 0; g + 1 < groups.size(); ++g)
        for (SortId lo : groups[g])
          for (SortId hi : groups[g + 1]) th.sorts.add_subsort(lo, hi);
    } else if (kw == "op" || kw == "ops") {
      finish_sorts();
      std::vector<Token> names;
      while (cur.peek().text != ":") {
        names.push_back(cur.next());
        check_user_name(names.back());
      }
      cur.expect(":");
      std::vector<SortId> arg_sorts;
      while (cur.peek().text != "->") arg_sorts.push_back(parse_sort_ref(cur, th));
      cur.expect("->");
      SortId result_sort = parse_sort_ref(cur, th);
      std::vector<std::string> attrs = parse_attrs(cur);
      cur.expect(".");
      bool is_assoc = false, is_comm = false;
      for (auto& a : attrs) {
        if (a == "assoc") is_assoc = true;
        else if (a == "comm") is_comm = true;
        else throw ParseError("unsupported operator attribute '" + a + "'", head.line, head.col);
      }
      for (auto& n : names) {
        Symbol s;
        s.name = n.text;
        s.arg_sorts = arg_sorts;
        s.result_sort = result_sort;
        s.assoc = is_assoc;
        s.comm = is_comm;
        // mixfix sanity: _op_ must be binary, op_ unary
        size_t underscores = std::count(s.name.begin(), s.name.end(), '_');
        if (underscores > 0 && underscores != arg_sorts.size())
          throw ParseError("mixfix name '" + s.name + "' does not match its arity",
                           n.line, n.col);
        th.add_symbol(s);
      }
    } else if (kw == "var" || kw == "vars") {
      finish_sorts();
      std::vector<Token> names;
      while (cur.peek().text != ":") {
        names.push_back(cur.next());
        check_user_name(names.back());
      }
      cur.expect(":");
      SortId s = parse_sort_ref(cur, th);
      cur.expect(".");
      for (auto& n : names) {
        if (th.find_symbol(n.text))
          throw ParseError("variable '" + n.text + "' clashes with an operator", n.line, n.col);
        th.var_decls()[n.text] = s;
      }
    } else if (kw == "eq") {
      finish_sorts();
      std::string label;
      if (cur.peek().text == "[") {
        cur.next();
        label = cur.next().text;
        cur.expect("]");
        cur.expect(":");
      }
      if (label.empty()) label = "eq" + std::to_string(++eq_count);
      // left-hand side: tokens up to '='
      TermParser tp{th, cur};
      Term lhs = tp.parse();
      cur.expect("=");
      Term rhs = tp.parse();
      std::vector<std::string> attrs = parse_attrs(cur);
      cur.expect(".");
      bool variant = false;
      for (auto& a : attrs) {
        if (a == "variant") variant = true;
        else throw ParseError("unsupported equation attribute '" + a + "'", head.line, head.col);
      }
      if (!variant) {
        result.warnings.push_back("equation '" + label +
                                  "' has no variant attribute and is ignored");
        continue;
      }
      th.add_rule({label, lhs, rhs});
    } else {
      throw ParseError("unexpected keyword '" + kw + "'", head.line, head.col);
    }
  }
  finish_sorts();
  th.validate();
  for (auto& w : th.coherence_warnings()) result.warnings.push_back(w);
  return result;
}

ParseResult parse_theory_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open theory file '" + path + "'", 0, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_theory(ss.str());
}

Term parse_term(const Theory& th, const std::string& text) {
  std::vector<Token> toks = tokenize(text);
  Cursor cur{&toks};
  TermParser tp{th, cur};
  Term t = tp.parse();
  if (!cur.done())
    throw ParseError("trailing input after term: '" + cur.peek().text + "'", cur.peek().line,
                     cur.peek().col);
  return t;
}

std::vector<std::pair<Term, Term>> parse_equations(const Theory& th, const std::string& text) {
  std::vector<Token> toks = tokenize(text);
  Cursor cur{&toks};
  std::vector<std::pair<Term, Term>> eqs;
  while (true) {
    TermParser tp{th, cur};
    Term l = tp.parse();
    cur.expect("=?");
    Term r = tp.parse();
    eqs.emplace_back(l, r);
    if (cur.done()) break;
    cur.expect("/\\");
  }
  return eqs;
}

std::string print_theory(const Theory& th) {
  std::ostringstream os;
  os << "fmod " << th.name << " is\n";
  auto user = th.sorts.user_sorts();
  if (!user.empty()) {
    os << "  sorts";
    for (SortId s : user) os << " " << th.sorts.name(s);
    os << " .\n";
  }
  for (auto& [lo, hi] : th.sorts.subsort_edges())
    os << "  subsort " << th.sorts.name(lo) << " < " << th.sorts.name(hi) << " .\n";
  for (int i = 0; i < th.symbol_count(); ++i) {
    const Symbol& s = th.symbol(i);
    if (s.frozen_marker || s.name[0] == '.') continue;
    os << "  op " << s.name << " :";
    for (SortId a : s.arg_sorts) os << " " << th.sorts.name(a);
    os << " -> " << th.sorts.name(s.result_sort);
    if (s.assoc || s.comm) {
      os << " [";
      if (s.assoc) os << "assoc";
      if (s.assoc && s.comm) os << " ";
      if (s.comm) os << "comm";
      os << "]";
    }
    os << " .\n";
  }
  for (auto& [name, sort] : th.var_decls())
    os << "  var " << name << " : " << th.sorts.name(sort) << " .\n";
  for (auto& r : th.rules())
    os << "  eq [" << r.label << "] : " << term_to_string(th, r.lhs) << " = "
       << term_to_string(th, r.rhs) << " [variant] .\n";
  os << "endfm\n";
  return os.str();
}

}  // namespace vunify
