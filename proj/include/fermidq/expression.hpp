#pragma once

// Grassmann polynomial expressions.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := NUMBER | 'i' | PARAM | GENERATOR | '(' expr ')' | '-' factor
//
// PARAM is one of hbar, omega, c, d, C; GENERATOR is th<k> or pi<k> with k >= 1.
// '*' is the pointwise Grassmann product unless a star product is supplied.

#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fermidq/star.hpp"

namespace fermidq {

struct Expr {
  enum class Kind { Number, Imag, Param, Generator, Neg, Add, Sub, Mul };

  Kind kind = Kind::Number;
  double value = 0.0;
  std::string name;
  std::vector<Expr> args;

  bool operator==(const Expr&) const = default;
};

namespace detail {

inline bool is_param(std::string_view s) {
  return s == "hbar" || s == "omega" || s == "c" || s == "d" || s == "C";
}

inline bool is_generator(std::string_view s) {
  if (s.size() < 3 || !(s.starts_with("th") || s.starts_with("pi"))) return false;
  if (s[2] == '0') return false;
  for (std::size_t i = 2; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = expr();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_ + 1); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    Expr lhs = term();
    while (true) {
      if (accept('+')) {
        lhs = Expr{Expr::Kind::Add, 0.0, {}, {std::move(lhs), term()}};
      } else if (accept('-')) {
        lhs = Expr{Expr::Kind::Sub, 0.0, {}, {std::move(lhs), term()}};
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = factor();
    while (accept('*')) lhs = Expr{Expr::Kind::Mul, 0.0, {}, {std::move(lhs), factor()}};
    return lhs;
  }

  Expr factor() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char ch = text_[pos_];
    if (ch == '(') {
      ++pos_;
      Expr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (ch == '-') {
      ++pos_;
      return Expr{Expr::Kind::Neg, 0.0, {}, {factor()}};
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      const std::string_view word = text_.substr(start, pos_ - start);
      if (word == "i") return Expr{Expr::Kind::Imag, 0.0, {}, {}};
      if (is_param(word)) return Expr{Expr::Kind::Param, 0.0, std::string(word), {}};
      if (is_generator(word)) return Expr{Expr::Kind::Generator, 0.0, std::string(word), {}};
      pos_ = start;
      fail("unknown symbol '" + std::string(word) + "'");
    }
    if (ch == ')') fail("unbalanced ')'");
    fail("unexpected '" + std::string(1, ch) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent");
    }
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      fail("malformed number");
    }
    const std::string literal(text_.substr(start, pos_ - start));
    double v = 0.0;
    const auto res = std::from_chars(literal.data(), literal.data() + literal.size(), v);
    if (res.ec != std::errc{} || res.ptr != literal.data() + literal.size()) {
      pos_ = start;
      fail("malformed number");
    }
    return Expr{Expr::Kind::Number, v, {}, {}};
  }
};

inline bool is_sum(const Expr& e) { return e.kind == Expr::Kind::Add || e.kind == Expr::Kind::Sub; }

}  // namespace detail

inline Expr parse_expression(std::string_view text) { return detail::Parser(text).parse(); }

/// Prints an expression so that parsing the output gives back the same tree.
inline std::string to_string(const Expr& e) {
  using K = Expr::Kind;
  auto wrap = [](const std::string& s) { return "(" + s + ")"; };
  switch (e.kind) {
    case K::Number: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", e.value);
      return buf;
    }
    case K::Imag: return "i";
    case K::Param:
    case K::Generator: return e.name;
    case K::Neg: {
      const Expr& x = e.args[0];
      return "-" + (detail::is_sum(x) || x.kind == K::Mul ? wrap(to_string(x)) : to_string(x));
    }
    case K::Add:
    case K::Sub: {
      const std::string rhs = detail::is_sum(e.args[1]) ? wrap(to_string(e.args[1])) : to_string(e.args[1]);
      return to_string(e.args[0]) + (e.kind == K::Add ? " + " : " - ") + rhs;
    }
    case K::Mul: {
      const Expr& l = e.args[0];
      const Expr& r = e.args[1];
      const std::string ls = detail::is_sum(l) ? wrap(to_string(l)) : to_string(l);
      const std::string rs = detail::is_sum(r) || r.kind == K::Mul ? wrap(to_string(r)) : to_string(r);
      return ls + "*" + rs;
    }
  }
  return {};
}

struct Parameters {
  double hbar = 1.0;
  double omega = 1.0;
  double c = 0.0;
  double d = 0.0;

  /// Deformation of the pre-constraint bracket, C = 4c/hbar.
  [[nodiscard]] double big_c() const { return 4.0 * c / hbar; }
};

/// Largest generator index per family ("th", "pi") used in an expression.
inline std::map<std::string, int> generator_extent(const Expr& e) {
  std::map<std::string, int> out;
  if (e.kind == Expr::Kind::Generator) {
    out[e.name.substr(0, 2)] = std::stoi(e.name.substr(2));
    return out;
  }
  for (const auto& a : e.args) {
    for (const auto& [k, v] : generator_extent(a)) out[k] = std::max(out[k], v);
  }
  return out;
}

/// Evaluates on `algebra`; generators are looked up by label. With `product`
/// set, '*' between Grassmann-valued factors is the star product.
inline Element evaluate(const Expr& e, const Algebra& algebra, const Parameters& params,
                        const StarProduct* product = nullptr) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Number: return scalar(algebra, e.value);
    case K::Imag: return scalar(algebra, Complex(0.0, 1.0));
    case K::Param: {
      if (e.name == "hbar") return scalar(algebra, params.hbar);
      if (e.name == "omega") return scalar(algebra, params.omega);
      if (e.name == "c") return scalar(algebra, params.c);
      if (e.name == "d") return scalar(algebra, params.d);
      return scalar(algebra, params.big_c());
    }
    case K::Generator: {
      const auto idx = algebra->index_of(e.name);
      if (!idx) throw AlgebraError("generator '" + e.name + "' is not in the algebra");
      return generator(algebra, *idx);
    }
    case K::Neg: return -evaluate(e.args[0], algebra, params, product);
    case K::Add: return evaluate(e.args[0], algebra, params, product) + evaluate(e.args[1], algebra, params, product);
    case K::Sub: return evaluate(e.args[0], algebra, params, product) - evaluate(e.args[1], algebra, params, product);
    case K::Mul: {
      const Element l = evaluate(e.args[0], algebra, params, product);
      const Element r = evaluate(e.args[1], algebra, params, product);
      return product ? star(l, r, *product) : multiply(l, r);
    }
  }
  return Element(algebra);
}

}  // namespace fermidq
