// Parser for the Maude-like functional-module subset and for terms/equations.
#ifndef VUNIFY_PARSER_HPP
#define VUNIFY_PARSER_HPP

#include <string>
#include <vector>

#include "vunify/term.hpp"
#include "vunify/theory.hpp"

namespace vunify {

struct ParseResult {
  Theory theory;
  std::vector<std::string> warnings;  // dropped non-variant equations, coherence notes
};

/// Parses `fmod ... endfm` with sorts, subsorts, op/ops (attributes assoc,
/// comm), vars and variant equations. Only variant-tagged equations become
/// rules. Throws ParseError / TheoryError with positions.
ParseResult parse_theory(const std::string& text);
ParseResult parse_theory_file(const std::string& path);

/// Parses a term against a theory (declared vars, inline `X:Sort` and
/// `X:[Sort]` variables, declared infix `_op_` and prefix `op_` operators).
Term parse_term(const Theory& th, const std::string& text);

/// Parses "t1 =? t1' /\ t2 =? t2' ..." into equation pairs.
std::vector<std::pair<Term, Term>> parse_equations(const Theory& th, const std::string& text);

/// Prints a theory back into parseable surface syntax (round-trip).
std::string print_theory(const Theory& th);

}  // namespace vunify

#endif
