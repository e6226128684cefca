#include "jl/syntax.hpp"

#include <cctype>
#include <functional>
#include <unordered_set>

namespace jl {

namespace {

class Parser {
 public:
  Parser(std::string_view s, bool allow_meta) : s_(s), allow_meta_(allow_meta) {}

  Formula formula_all() {
    Formula f = formula();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return f;
  }

  Term term_all() {
    Term t = term();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  bool peek_keyword(std::string_view kw) {
    skip();
    if (s_.substr(pos_, kw.size()) != kw) return false;
    std::size_t end = pos_ + kw.size();
    return end >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[end]));
  }

  int number() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    if (pos_ - start > 6) fail("index too large");
    int v = std::stoi(std::string(s_.substr(start, pos_ - start)));
    if (v < 1) {
      pos_ = start;
      fail("indices start at 1");
    }
    return v;
  }

  Formula formula() {
    Formula lhs = disj();
    if (accept("->")) return Formula::implies(lhs, formula());
    return lhs;
  }

  Formula disj() {
    Formula f = conj();
    while (accept("|")) f = Formula::disj(f, conj());
    return f;
  }

  Formula conj() {
    Formula f = unary();
    while (accept("&")) f = Formula::conj(f, unary());
    return f;
  }

  Formula unary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (accept("~")) return Formula::neg(unary());
    if (accept("(")) {
      Formula f = formula();
      expect(")");
      return f;
    }
    if (accept("[")) {
      Term t = term();
      expect("]_");
      int agent = number();
      return Formula::just(t, agent, unary());
    }
    if (peek_keyword("false")) {
      pos_ += 5;
      return Formula::falsum();
    }
    if (peek_keyword("true")) {
      pos_ += 4;
      return Formula::neg(Formula::falsum());
    }
    if (s_[pos_] == 'p') {
      ++pos_;
      return Formula::atom(number());
    }
    if (allow_meta_ && s_.substr(pos_, 2) == "?A") {
      pos_ += 2;
      return Formula::meta(number());
    }
    fail("expected a formula");
  }

  Term term() {
    Term t = prod();
    while (accept("+")) t = Term::sum(t, prod());
    return t;
  }

  Term prod() {
    Term t = bang();
    while (accept(".")) t = Term::app(t, bang());
    return t;
  }

  Term bang() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (accept("!")) return Term::bang(bang());
    if (accept("(")) {
      Term t = term();
      expect(")");
      return t;
    }
    char c = s_[pos_];
    if (c == 'c') {
      ++pos_;
      return Term::constant(number());
    }
    if (c == 'x') {
      ++pos_;
      return Term::variable(number());
    }
    if (allow_meta_ && s_.substr(pos_, 2) == "?T") {
      pos_ += 2;
      return Term::meta(number());
    }
    fail("expected a term");
  }

  std::string_view s_;
  bool allow_meta_;
  std::size_t pos_ = 0;
};

void print_term_to(Term t, std::string& out, int ctx) {
  // ctx: 0 = any, 1 = operand of '+' right side / '.', 2 = operand of '!'
  switch (t.kind()) {
    case Kind::Const: out += "c" + std::to_string(t.index()); return;
    case Kind::Var: out += "x" + std::to_string(t.index()); return;
    case Kind::TermMeta: out += "?T" + std::to_string(t.index()); return;
    case Kind::Bang:
      out += "!";
      print_term_to(t.inner(), out, 3);
      return;
    case Kind::Sum: {
      bool paren = ctx >= 1;
      if (paren) out += "(";
      print_term_to(t.left(), out, 0);
      out += " + ";
      print_term_to(t.right(), out, 1);
      if (paren) out += ")";
      return;
    }
    case Kind::App: {
      bool paren = ctx >= 2;
      if (paren) out += "(";
      print_term_to(t.left(), out, 1);
      out += " . ";
      print_term_to(t.right(), out, 2);
      if (paren) out += ")";
      return;
    }
    default: out += "<?>"; return;
  }
}

void print_formula_to(Formula f, std::string& out, bool operand) {
  switch (f.kind()) {
    case Kind::Atom: out += "p" + std::to_string(f.index()); return;
    case Kind::Falsum: out += "false"; return;
    case Kind::FormulaMeta: out += "?A" + std::to_string(f.index()); return;
    case Kind::Implies:
      if (operand) out += "(";
      print_formula_to(f.ant(), out, true);
      out += " -> ";
      print_formula_to(f.cons(), out, false);
      if (operand) out += ")";
      return;
    case Kind::Just:
      out += "[";
      print_term_to(f.term(), out, 0);
      out += "]_";
      if (is_agent_meta(f.agent()))
        out += "?" + std::to_string(-f.agent());
      else
        out += std::to_string(f.agent());
      out += " ";
      print_formula_to(f.body(), out, true);
      return;
    default: out += "<?>"; return;
  }
}

}  // namespace

Formula parse_formula(std::string_view text, bool allow_meta) {
  return Parser(text, allow_meta).formula_all();
}

Term parse_term(std::string_view text, bool allow_meta) {
  return Parser(text, allow_meta).term_all();
}

std::string print_formula(Formula f) {
  std::string out;
  print_formula_to(f, out, false);
  return out;
}

std::string print_term(Term t) {
  std::string out;
  print_term_to(t, out, 0);
  return out;
}

std::string print_star(const StarExpression& s) {
  return "*_" + std::to_string(s.agent) + "(" + print_term(s.term) + ", " + print_formula(s.body) + ")";
}

std::vector<Formula> subformulas(Formula f) {
  std::vector<Formula> out;
  std::unordered_set<Formula> seen;
  std::function<void(Formula)> go = [&](Formula g) {
    if (!seen.insert(g).second) return;
    out.push_back(g);
    if (g.is_implies()) {
      go(g.ant());
      go(g.cons());
    } else if (g.is_just()) {
      go(g.body());
    }
  };
  go(f);
  return out;
}

std::vector<Term> subterms(Term t) {
  std::vector<Term> out;
  std::unordered_set<Term> seen;
  std::function<void(Term)> go = [&](Term s) {
    if (!seen.insert(s).second) return;
    out.push_back(s);
    switch (s.kind()) {
      case Kind::Sum:
      case Kind::App:
        go(s.left());
        go(s.right());
        break;
      case Kind::Bang: go(s.inner()); break;
      default: break;
    }
  };
  go(t);
  return out;
}

int modal_depth(Formula f) {
  switch (f.kind()) {
    case Kind::Implies: return std::max(modal_depth(f.ant()), modal_depth(f.cons()));
    case Kind::Just: return 1 + modal_depth(f.body());
    default: return 0;
  }
}

std::set<int> atoms_of(Formula f) {
  std::set<int> out;
  for (Formula g : subformulas(f))
    if (g.is_atom()) out.insert(g.index());
  return out;
}

std::set<int> agents_of(Formula f) {
  std::set<int> out;
  for (Formula g : subformulas(f))
    if (g.is_just() && !is_agent_meta(g.agent())) out.insert(g.agent());
  return out;
}

}  // namespace jl
