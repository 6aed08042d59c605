#pragma once

// Expression language for differential polynomials and superspace
// expressions.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*        division by numbers only
//   unary   := '-' unary | power
//   power   := primary ('^' INT)?
//   primary := NUMBER | '(' expr ')' | IDENT | IDENT '(' args ')'
//
// Identifiers are declared fields with an optional derivative suffix
// (u_x, u_2x, Pi_u_3x). Functions: Dx(e), Dx(e,k), Dinv(e), Tdot(e), and in
// superspace mode D(e), Dk(e,k), Phi, theta.

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include "skdv/core/dinv.hpp"
#include "skdv/core/field_table.hpp"
#include "skdv/superspace/superspace.hpp"

namespace skdv::dsl {

enum class Mode { Component, Super };

namespace detail {

struct Token {
  enum Kind { Number, Ident, Op, End } kind = End;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) return t;
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      t.kind = Token::Number;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
        t.text += advance();
      if (std::count(t.text.begin(), t.text.end(), '.') > 1 || t.text == ".")
        throw ParseError("malformed number '" + t.text + "'", t.line, t.col);
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      t.kind = Token::Ident;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        t.text += advance();
      return t;
    }
    if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
      t.kind = Token::Op;
      t.text = std::string(1, advance());
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.col);
  }

 private:
  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::string_view src, const FieldTable& table, Mode mode, const Superfield& sf)
      : lex_(src), table_(table), mode_(mode), sf_(sf) {
    tok_ = lex_.next();
  }

  SuperExpr parse() {
    SuperExpr e = expr();
    if (tok_.kind != Token::End) fail("unexpected '" + tok_.text + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, tok_.line, tok_.col); }
  [[noreturn]] void fail_at(const std::string& msg, const Token& t) const {
    throw ParseError(msg, t.line, t.col);
  }

  bool is_op(char c) const { return tok_.kind == Token::Op && tok_.text[0] == c; }
  void expect(char c) {
    if (!is_op(c)) fail(std::string("expected '") + c + "'");
    tok_ = lex_.next();
  }

  SuperExpr expr() {
    SuperExpr acc = term();
    while (is_op('+') || is_op('-')) {
      const bool minus = is_op('-');
      tok_ = lex_.next();
      SuperExpr rhs = term();
      if (minus) {
        acc -= rhs;
      } else {
        acc += rhs;
      }
    }
    return acc;
  }

  SuperExpr term() {
    SuperExpr acc = unary();
    while (is_op('*') || is_op('/')) {
      const bool divide = is_op('/');
      const Token at = tok_;
      tok_ = lex_.next();
      SuperExpr rhs = unary();
      if (divide) {
        if (!rhs.theta.is_zero() || !rhs.body.is_constant())
          fail_at("division is only defined by a number", at);
        const Rational d = rhs.body.constant_term();
        if (d == 0) fail_at("division by zero", at);
        acc = acc * Rational(1 / d);
      } else {
        acc = acc * rhs;
      }
    }
    return acc;
  }

  SuperExpr unary() {
    if (is_op('-')) {
      tok_ = lex_.next();
      return -unary();
    }
    return power();
  }

  SuperExpr power() {
    SuperExpr base = primary();
    if (!is_op('^')) return base;
    tok_ = lex_.next();
    if (tok_.kind != Token::Number || tok_.text.find('.') != std::string::npos)
      fail("exponent must be a nonnegative integer");
    const int k = std::stoi(tok_.text);
    tok_ = lex_.next();
    SuperExpr out{DiffPoly(1)};
    for (int i = 0; i < k; ++i) out = out * base;
    return out;
  }

  int integer_argument() {
    if (tok_.kind != Token::Number || tok_.text.find('.') != std::string::npos)
      fail("expected a nonnegative integer");
    const int k = std::stoi(tok_.text);
    tok_ = lex_.next();
    return k;
  }

  void require_super(const Token& at) const {
    if (mode_ != Mode::Super)
      fail_at("'" + at.text + "' is only allowed in superspace expressions", at);
  }

  DiffPoly component_only(const SuperExpr& e, const Token& at) const {
    if (!e.theta.is_zero() || variational::has_super_atoms(e.body))
      fail_at("'" + at.text + "' needs a component expression", at);
    return e.body;
  }

  SuperExpr primary() {
    const Token t = tok_;
    if (t.kind == Token::Number) {
      tok_ = lex_.next();
      return SuperExpr{DiffPoly(parse_rational(t.text))};
    }
    if (is_op('(')) {
      tok_ = lex_.next();
      SuperExpr e = expr();
      expect(')');
      return e;
    }
    if (t.kind != Token::Ident) {
      if (t.kind == Token::End) fail("unexpected end of input");
      fail("unexpected '" + t.text + "'");
    }
    tok_ = lex_.next();
    if (is_op('(')) return call(t);
    return identifier(t);
  }

  SuperExpr call(const Token& name) {
    expect('(');
    SuperExpr arg = expr();
    std::optional<int> k;
    if (is_op(',')) {
      tok_ = lex_.next();
      k = integer_argument();
    }
    expect(')');
    const std::string& f = name.text;
    if (f == "Dx") {
      const int n = k.value_or(1);
      return SuperExpr{skdv::dx(arg.body, n), skdv::dx(arg.theta, n)};
    }
    if (f == "Dk") {
      require_super(name);
      if (!k) fail_at("'Dk' needs an order argument", name);
      return super_d(arg, *k);
    }
    if (k) fail_at("'" + f + "' takes one argument", name);
    if (f == "Dinv") return SuperExpr{dinv(component_only(arg, name))};
    if (f == "Tdot") return SuperExpr{dt(arg.body), dt(arg.theta)};
    if (f == "D") {
      require_super(name);
      return super_d(arg);
    }
    fail_at("unknown function '" + f + "'", name);
  }

  SuperExpr identifier(const Token& t) {
    const std::string& s = t.text;
    if (s == "theta") {
      require_super(t);
      return theta_symbol();
    }
    if (s == sf_.name) {
      require_super(t);
      return SuperExpr{sf_.sd(0)};
    }
    if (table_.contains(s)) return SuperExpr{table_.var(s)};
    // Derivative suffix: base_x or base_<k>x.
    const auto us = s.rfind('_');
    if (us != std::string::npos && us > 0) {
      const std::string base = s.substr(0, us);
      const std::string suf = s.substr(us + 1);
      std::optional<int> order;
      if (suf == "x") {
        order = 1;
      } else if (suf.size() >= 2 && suf.back() == 'x' &&
                 std::all_of(suf.begin(), suf.end() - 1, [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        order = std::stoi(suf.substr(0, suf.size() - 1));
      }
      if (order && table_.contains(base)) {
        const FieldSpec& spec = table_.at(base);
        if (spec.kind == FieldKind::Parameter) fail_at("parameter '" + base + "' has no derivatives", t);
        return SuperExpr{table_.var(base, *order)};
      }
    }
    fail_at("unknown identifier '" + s + "'", t);
  }

  Lexer lex_;
  Token tok_;
  const FieldTable& table_;
  Mode mode_;
  Superfield sf_;
};

}  // namespace detail

/// Parses a superspace expression (theta, Phi, D, Dk allowed).
inline SuperExpr parse_super(std::string_view text, const FieldTable& table, const Superfield& sf = {}) {
  return detail::Parser(text, table, Mode::Super, sf).parse();
}

/// Parses a component expression into a normalized DiffPoly.
inline DiffPoly parse(std::string_view text, const FieldTable& table) {
  return detail::Parser(text, table, Mode::Component, Superfield{}).parse().body;
}

}  // namespace skdv::dsl
