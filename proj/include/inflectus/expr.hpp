#pragma once

// Rational expressions in z: parsing, compilation to RationalFunction,
// direct evaluation and printing.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | atom ('^' int)?
//   atom   := number 'i'? | 'i' | 'z' | '(' expr ')'
//   int    := '-'? digits

#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "inflectus/error.hpp"
#include "inflectus/rational.hpp"

namespace inflectus {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Literal, Variable, Neg, Add, Sub, Mul, Div, Pow };
  Kind kind = Kind::Literal;
  cplx value;       // Literal
  int exponent = 0; // Pow
  ExprPtr lhs, rhs; // Neg and Pow use lhs only

  static ExprPtr literal(cplx v) { return std::make_shared<Expr>(Expr{Kind::Literal, v, 0, nullptr, nullptr}); }
  static ExprPtr variable() { return std::make_shared<Expr>(Expr{Kind::Variable, {}, 0, nullptr, nullptr}); }
  static ExprPtr unary(ExprPtr a) { return std::make_shared<Expr>(Expr{Kind::Neg, {}, 0, std::move(a), nullptr}); }
  static ExprPtr binary(Kind k, ExprPtr a, ExprPtr b) {
    return std::make_shared<Expr>(Expr{k, {}, 0, std::move(a), std::move(b)});
  }
  static ExprPtr power(ExprPtr a, int n) { return std::make_shared<Expr>(Expr{Kind::Pow, {}, n, std::move(a), nullptr}); }
};

namespace detail {

class Parser {
public:
  explicit Parser(std::string_view s) : s_(s) {}

  ExprPtr parse() {
    auto e = expr();
    skip();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'", {"+", "-", "*", "/", "^", "end of input"});
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) const {
    throw ParseError(what + " at offset " + std::to_string(pos_), pos_, std::move(expected));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr expr() {
    auto e = term();
    for (;;) {
      if (accept('+')) e = Expr::binary(Expr::Kind::Add, e, term());
      else if (accept('-')) e = Expr::binary(Expr::Kind::Sub, e, term());
      else return e;
    }
  }

  ExprPtr term() {
    auto e = factor();
    for (;;) {
      if (accept('*')) e = Expr::binary(Expr::Kind::Mul, e, factor());
      else if (accept('/')) e = Expr::binary(Expr::Kind::Div, e, factor());
      else return e;
    }
  }

  ExprPtr factor() {
    if (accept('-')) return Expr::unary(factor());
    auto a = atom();
    if (accept('^')) a = Expr::power(a, exponent());
    return a;
  }

  int exponent() {
    skip();
    const std::size_t start = pos_;
    bool neg = false;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    const std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      fail("expected an integer exponent", {"integer"});
    }
    if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E')) {
      pos_ = start;
      fail("non-integer exponent", {"integer"});
    }
    int n = 0;
    const auto [ptr, ec] = std::from_chars(s_.data() + digits, s_.data() + pos_, n);
    if (ec != std::errc{}) {
      pos_ = start;
      fail("exponent out of range", {"integer"});
    }
    return neg ? -n : n;
  }

  ExprPtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input", {"number", "i", "z", "(", "-"});
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const double v = number();
      skip();
      if (pos_ < s_.size() && s_[pos_] == 'i' && !identifierFollows(pos_ + 1)) {
        ++pos_;
        return Expr::literal({0.0, v});
      }
      return Expr::literal(v);
    }
    if (c == '(') {
      ++pos_;
      auto e = expr();
      if (!accept(')')) fail("unbalanced parenthesis", {")", "+", "-", "*", "/"});
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) ++end;
      const std::string_view name = s_.substr(pos_, end - pos_);
      if (name == "z") {
        pos_ = end;
        return Expr::variable();
      }
      if (name == "i") {
        pos_ = end;
        return Expr::literal({0.0, 1.0});
      }
      fail("unknown identifier '" + std::string(name) + "'; the only variable is z", {"number", "i", "z", "("});
    }
    fail("unexpected '" + std::string(1, c) + "'", {"number", "i", "z", "(", "-"});
  }

  bool identifierFollows(std::size_t p) const {
    return p < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p])) || s_[p] == '_');
  }

  double number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t b = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return pos_ - b;
    };
    std::size_t n = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) {
      pos_ = start;
      fail("malformed number", {"digit"});
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save; // not an exponent; leave for the caller
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc{} || ptr != s_.data() + pos_) {
      pos_ = start;
      fail("malformed number", {"number"});
    }
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

} // namespace detail

inline ExprPtr parseExpression(std::string_view text) { return detail::Parser(text).parse(); }

/// Numerator/denominator degree guard for compilation.
inline constexpr int kMaxCompiledDegree = 64;

inline RationalFunction compile(const Expr& e) {
  auto guard = [](RationalFunction r) {
    if (r.numeratorDegree() > kMaxCompiledDegree || r.denominatorDegree() > kMaxCompiledDegree)
      throw DomainError("expression degree exceeds " + std::to_string(kMaxCompiledDegree));
    return r;
  };
  switch (e.kind) {
  case Expr::Kind::Literal: return RationalFunction::constant(e.value);
  case Expr::Kind::Variable: return RationalFunction::polynomial(Poly{0.0, 1.0});
  case Expr::Kind::Neg: return -compile(*e.lhs);
  case Expr::Kind::Add: return guard(compile(*e.lhs) + compile(*e.rhs));
  case Expr::Kind::Sub: return guard(compile(*e.lhs) - compile(*e.rhs));
  case Expr::Kind::Mul: return guard(compile(*e.lhs) * compile(*e.rhs));
  case Expr::Kind::Div: {
    const auto den = compile(*e.rhs);
    if (den.isZero()) throw DegenerateInput("division by zero in expression");
    return guard(compile(*e.lhs) / den);
  }
  case Expr::Kind::Pow: {
    const auto base = compile(*e.lhs);
    const long deg = static_cast<long>(std::abs(e.exponent)) * std::max(base.numeratorDegree(), base.denominatorDegree());
    if (deg > kMaxCompiledDegree) throw DomainError("expression degree exceeds " + std::to_string(kMaxCompiledDegree));
    if (e.exponent < 0 && base.isZero()) throw DegenerateInput("negative power of zero in expression");
    // Reduce again: a power of a reduced function is reduced, but P must stay monic.
    return guard(pow(base, e.exponent));
  }
  }
  throw DomainError("unknown expression node");
}

inline RationalFunction compile(const ExprPtr& e) { return compile(*e); }
inline RationalFunction compileExpression(std::string_view text) { return compile(*parseExpression(text)); }

/// Direct interpretation of the tree at z (no polynomial arithmetic).
inline cplx evaluate(const Expr& e, cplx z) {
  switch (e.kind) {
  case Expr::Kind::Literal: return e.value;
  case Expr::Kind::Variable: return z;
  case Expr::Kind::Neg: return -evaluate(*e.lhs, z);
  case Expr::Kind::Add: return evaluate(*e.lhs, z) + evaluate(*e.rhs, z);
  case Expr::Kind::Sub: return evaluate(*e.lhs, z) - evaluate(*e.rhs, z);
  case Expr::Kind::Mul: return evaluate(*e.lhs, z) * evaluate(*e.rhs, z);
  case Expr::Kind::Div: return evaluate(*e.lhs, z) / evaluate(*e.rhs, z);
  case Expr::Kind::Pow: {
    const cplx b = evaluate(*e.lhs, z);
    cplx acc{1.0};
    for (int k = 0; k < std::abs(e.exponent); ++k) acc *= b;
    return e.exponent < 0 ? 1.0 / acc : acc;
  }
  }
  return {};
}

namespace detail {

inline std::string formatReal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string formatLiteral(cplx v) {
  if (v.imag() == 0.0) return "(" + formatReal(v.real()) + ")";
  if (v.real() == 0.0) return "(" + formatReal(v.imag()) + "i)";
  return "(" + formatReal(v.real()) + (v.imag() < 0 || std::signbit(v.imag()) ? "-" : "+") +
         formatReal(std::abs(v.imag())) + "i)";
}

} // namespace detail

/// Fully parenthesized text that parses back to an equivalent tree.
inline std::string prettyPrint(const Expr& e) {
  switch (e.kind) {
  case Expr::Kind::Literal: return detail::formatLiteral(e.value);
  case Expr::Kind::Variable: return "z";
  case Expr::Kind::Neg: return "(-" + prettyPrint(*e.lhs) + ")";
  case Expr::Kind::Add: return "(" + prettyPrint(*e.lhs) + " + " + prettyPrint(*e.rhs) + ")";
  case Expr::Kind::Sub: return "(" + prettyPrint(*e.lhs) + " - " + prettyPrint(*e.rhs) + ")";
  case Expr::Kind::Mul: return "(" + prettyPrint(*e.lhs) + " * " + prettyPrint(*e.rhs) + ")";
  case Expr::Kind::Div: return "(" + prettyPrint(*e.lhs) + " / " + prettyPrint(*e.rhs) + ")";
  case Expr::Kind::Pow: return "(" + prettyPrint(*e.lhs) + "^" + std::to_string(e.exponent) + ")";
  }
  return {};
}

inline std::string prettyPrint(const ExprPtr& e) { return prettyPrint(*e); }

} // namespace inflectus
