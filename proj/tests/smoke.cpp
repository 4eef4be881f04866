// Quick manual driver used during bring-up; superseded by the doctest suites.
#include <iostream>

#include "vunify/parser.hpp"
#include "vunify/printer.hpp"
#include "vunify/unifier.hpp"

using namespace vunify;

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : "theories";
  auto pr = parse_theory_file(dir + "/exclusive-or.vt");
  const Theory& th = pr.theory;
  for (auto& w : pr.warnings) std::cout << "warning: " << w << "\n";

  Engine engine(th);
  Term xy = parse_term(th, "X * Y");
  VariantTree tree = engine.variants(xy);
  std::cout << "variants of X * Y: " << tree.kept.size() << " closed=" << tree.closed << "\n";
  for (size_t i = 0; i < tree.kept.size(); ++i)
    std::cout << variant_block(th, tree, static_cast<int>(i)) << "\n";

  UnificationProblem p;
  p.equations = parse_equations(th, "X =? U * V");
  auto plain = engine.unify(p, UnifyModes{false, false, false});
  std::cout << "plain X =? U*V: " << plain.unifiers.size() << "\n";
  for (size_t i = 0; i < plain.unifiers.size(); ++i)
    std::cout << unifier_block(th, plain.unifiers[i], plain.problem_vars, static_cast<int>(i) + 1)
              << "\n";
  auto fast = engine.unify(p, UnifyModes{true, false, false});
  std::cout << "fast X =? U*V: " << fast.unifiers.size() << "\n";
  for (size_t i = 0; i < fast.unifiers.size(); ++i)
    std::cout << unifier_block(th, fast.unifiers[i], fast.problem_vars, static_cast<int>(i) + 1)
              << "\n";
  return 0;
}
