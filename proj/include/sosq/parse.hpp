#pragma once

#include <cctype>
#include <stdexcept>
#include <string>

#include "sosq/polynomial.hpp"

namespace sosq {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
  size_t position;
};

namespace detail {

/// Recursive-descent parser for the grammar:
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := atom ['^' nat]
///   atom   := number | variable | '(' expr ')'
/// Numbers are integer or rational literals (e.g. 231773/344000).
class PolyParser {
 public:
  PolyParser(const std::string& text, Ring ring) : text_(text), ring_(std::move(ring)) {}

  QPoly parse() {
    QPoly p = expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return p;
  }

 private:
  QPoly expr() {
    skip_ws();
    bool neg = false;
    if (peek() == '+' || peek() == '-') neg = (next() == '-');
    QPoly p = term();
    if (neg) p = -p;
    for (;;) {
      skip_ws();
      char c = peek();
      if (c == '+' || c == '-') {
        next();
        QPoly t = term();
        if (c == '-')
          p -= t;
        else
          p += t;
      } else {
        return p;
      }
    }
  }

  QPoly term() {
    QPoly p = factor();
    for (;;) {
      skip_ws();
      if (peek() == '*') {
        next();
        p = p * factor();
      } else {
        return p;
      }
    }
  }

  QPoly factor() {
    QPoly base = atom();
    skip_ws();
    if (peek() == '^') {
      next();
      skip_ws();
      size_t at = pos_;
      std::string digits = read_digits();
      if (digits.empty()) throw ParseError("exponent must be a nonnegative integer", at);
      long e = std::stol(digits);
      return base.pow(static_cast<int>(e));
    }
    return base;
  }

  QPoly atom() {
    skip_ws();
    size_t at = pos_;
    char c = peek();
    if (c == '(') {
      next();
      QPoly p = expr();
      skip_ws();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      next();
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = read_digits();
      if (peek() == '/') {
        size_t save = pos_;
        next();
        std::string den = read_digits();
        if (den.empty()) throw ParseError("expected digits after '/'", save + 1);
        if (Integer(den) == 0) throw ParseError("zero denominator", save + 1);
        return QPoly::constant(ring_, Rational(Integer(num), Integer(den)));
      }
      return QPoly::constant(ring_, Rational(Integer(num)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name = read_ident();
      int idx = ring_.index_of(name);
      if (idx < 0) throw ParseError("unknown variable '" + name + "'", at);
      return QPoly::variable(ring_, idx);
    }
    if (c == '\0') throw ParseError("unexpected end of input", pos_);
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char next() { return text_[pos_++]; }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  std::string read_digits() {
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }
  std::string read_ident() {
    size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return text_.substr(start, pos_ - start);
  }

  const std::string& text_;
  Ring ring_;
  size_t pos_ = 0;
};

}  // namespace detail

inline QPoly parse_polynomial(const std::string& text, const Ring& ring) {
  return detail::PolyParser(text, ring).parse();
}

}  // namespace sosq
