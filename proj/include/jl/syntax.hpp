// Concrete syntax for terms and formulas.
//
//   formula  ::= disj [ "->" formula ]            (right associative)
//   disj     ::= conj { "|" conj }
//   conj     ::= unary { "&" unary }
//   unary    ::= "~" unary | "[" term "]_" NUM unary | "(" formula ")"
//              | "p" NUM | "false" | "true" | "?A" NUM
//   term     ::= prod { "+" prod }                  (left associative)
//   prod     ::= bang { "." bang }                  (left associative)
//   bang     ::= "!" bang | "c" NUM | "x" NUM | "(" term ")" | "?T" NUM
//
// `~a` is a -> false, `true` is false -> false, `a | b` is (a -> false) -> b
// and `a & b` is (a -> (b -> false)) -> false. Metavariables (`?A1`, `?T1`)
// are only accepted when the caller asks for schemes.
// The printer emits only `->`, `false` and justification brackets, so its
// output re-parses to the identical formula.

#ifndef JL_SYNTAX_HPP_
#define JL_SYNTAX_HPP_

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jl/expr.hpp"

namespace jl {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t pos, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(pos) + ": " + msg), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

Formula parse_formula(std::string_view text, bool allow_meta = false);
Term parse_term(std::string_view text, bool allow_meta = false);

std::string print_formula(Formula f);
std::string print_term(Term t);
std::string print_star(const StarExpression& s);

// All subtrees of f including f itself, in first-visit order.
std::vector<Formula> subformulas(Formula f);
std::vector<Term> subterms(Term t);

// Max nesting of justification operators.
int modal_depth(Formula f);
std::set<int> atoms_of(Formula f);
std::set<int> agents_of(Formula f);

}  // namespace jl

#endif  // JL_SYNTAX_HPP_
