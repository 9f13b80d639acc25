#pragma once

// Tokenizer and recursive-descent parser for polynomial expressions and the
// problem-file statements built on top of them.
//
//   expr   := term (("+" | "-") term)*
//   term   := unary (("*" | "/") unary)*      division only by constants
//   unary  := "-" unary | power
//   power  := atom ("^" INT)?
//   atom   := IDENT | INT | "(" expr ")"

#include "desing/error.hpp"
#include "desing/poly.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace desing {

struct Token {
  enum Kind { Ident, Integer, Punct, End } kind;
  std::string text;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void error(const std::string& msg) const {
    fail(Errc::ParseError,
         msg + " at line " + std::to_string(tok_.line) + ", column " + std::to_string(tok_.col));
  }

 private:
  void advance() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++pos_, ++line_;
        col_ = 1;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_, ++col_;
      } else {
        break;
      }
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_ = {Token::End, "", line_, col_};
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                    src_[pos_] == '_' || src_[pos_] == '-')) {
        // '-' continues an identifier only between letters (task names like
        // "check-ae"); otherwise it is an operator.
        if (src_[pos_] == '-') {
          if (pos_ + 1 >= src_.size() ||
              !std::isalpha(static_cast<unsigned char>(src_[pos_ + 1])))
            break;
        }
        ++pos_;
      }
      tok_.kind = Token::Ident;
      tok_.text = src_.substr(start, pos_ - start);
      col_ += static_cast<int>(pos_ - start);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      tok_.kind = Token::Integer;
      tok_.text = src_.substr(start, pos_ - start);
      col_ += static_cast<int>(pos_ - start);
    } else {
      tok_ = {Token::Punct, std::string(1, c), line_, col_};
      ++pos_, ++col_;
    }
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class PolyParser {
 public:
  PolyParser(Lexer& lex, Context ctx) : lex_(lex), ctx_(std::move(ctx)) {}

  Poly parse_expr() {
    Poly acc = parse_term();
    while (lex_.peek().kind == Token::Punct &&
           (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      bool minus = lex_.next().text == "-";
      Poly rhs = parse_term();
      acc = minus ? acc - rhs : acc + rhs;
    }
    return acc;
  }

 private:
  Poly parse_term() {
    Poly acc = parse_unary();
    while (lex_.peek().kind == Token::Punct &&
           (lex_.peek().text == "*" || lex_.peek().text == "/")) {
      bool div = lex_.next().text == "/";
      Poly rhs = parse_unary();
      if (div) {
        if (!rhs.is_constant() || rhs.is_zero()) lex_.error("division by a non-constant");
        acc = (Rat(1) / rhs.terms()[0].coeff) * acc;
      } else {
        acc = acc * rhs;
      }
    }
    return acc;
  }

  Poly parse_unary() {
    if (lex_.peek().kind == Token::Punct && lex_.peek().text == "-") {
      lex_.next();
      return -parse_unary();
    }
    return parse_power();
  }

  Poly parse_power() {
    Poly base = parse_atom();
    if (lex_.peek().kind == Token::Punct && lex_.peek().text == "^") {
      lex_.next();
      if (lex_.peek().kind != Token::Integer) lex_.error("expected integer exponent");
      int e = std::stoi(lex_.next().text);
      return base.pow(e);
    }
    return base;
  }

  Poly parse_atom() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Ident) {
      int idx = var_index(ctx_, t.text);
      if (idx < 0) lex_.error("undeclared identifier '" + t.text + "'");
      lex_.next();
      return Poly::variable(ctx_, idx);
    }
    if (t.kind == Token::Integer) {
      Rat c(Int(lex_.next().text));
      return Poly::constant(ctx_, c);
    }
    if (t.kind == Token::Punct && t.text == "(") {
      lex_.next();
      Poly inner = parse_expr();
      if (!(lex_.peek().kind == Token::Punct && lex_.peek().text == ")"))
        lex_.error("expected ')'");
      lex_.next();
      return inner;
    }
    lex_.error("expected polynomial atom");
  }

  Lexer& lex_;
  Context ctx_;
};

inline Poly parse_poly(const std::string& text, const Context& ctx) {
  Lexer lex(text);
  PolyParser p(lex, ctx);
  Poly result = p.parse_expr();
  if (lex.peek().kind != Token::End) lex.error("trailing input after polynomial");
  return result;
}

// Parses a rational literal, optionally signed: "-3/2".
inline Rat parse_rat_token(Lexer& lex) {
  bool neg = false;
  if (lex.peek().kind == Token::Punct && lex.peek().text == "-") {
    lex.next();
    neg = true;
  }
  if (lex.peek().kind != Token::Integer) lex.error("expected rational number");
  Int num(lex.next().text);
  Int den(1);
  if (lex.peek().kind == Token::Punct && lex.peek().text == "/") {
    lex.next();
    if (lex.peek().kind != Token::Integer) lex.error("expected denominator");
    den = Int(lex.next().text);
    if (den == 0) lex.error("zero denominator");
  }
  Rat r(num, den);
  return neg ? -r : r;
}

}  // namespace desing
