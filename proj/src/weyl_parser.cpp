#include "cdh/weyl_parser.hpp"

#include <cctype>
#include <sstream>

#include "cdh/errors.hpp"

namespace cdh {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  WeylOperator parse() {
    WeylOperator r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "operator expression: " << what << " at position " << pos_;
    if (pos_ < s_.size()) msg << " ('" << s_[pos_] << "')";
    throw ArgumentError(msg.str());
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  static bool starts_primary(char c) {
    return c == 'z' || c == 'd' || c == 'A' || c == 'B' || c == 'C' || c == 'X' || c == 'Y' || c == '(' ||
           std::isdigit(static_cast<unsigned char>(c));
  }

  WeylOperator expr() {
    WeylOperator r;
    if (peek() == '-') {
      ++pos_;
      r = -term();
    } else {
      r = term();
    }
    for (char c = peek(); c == '+' || c == '-'; c = peek()) {
      ++pos_;
      const WeylOperator t = term();
      r = c == '+' ? r + t : r - t;
    }
    return r;
  }

  WeylOperator term() {
    WeylOperator r = factor();
    for (;;) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        r = r * factor();
      } else if (starts_primary(c)) {
        r = r * factor();
      } else {
        return r;
      }
    }
  }

  WeylOperator factor() {
    WeylOperator base = primary();
    if (peek() != '^') return base;
    ++pos_;
    skip();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected exponent");
    const std::string digits = number();
    if (digits.size() > 3) fail("exponent too large");
    return power(base, std::stoi(digits));
  }

  std::string number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  WeylOperator primary() {
    const char c = peek();
    switch (c) {
      case 'z': ++pos_; return WeylOperator::z();
      case 'd': ++pos_; return WeylOperator::d();
      case 'A': ++pos_; return WeylOperator::constant(MultiPoly::A());
      case 'B': ++pos_; return WeylOperator::constant(MultiPoly::B());
      case 'C': ++pos_; return WeylOperator::constant(MultiPoly::C());
      case 'X': ++pos_; return build_X();
      case 'Y': ++pos_; return build_Y();
      case '(': {
        ++pos_;
        WeylOperator r = expr();
        if (peek() != ')') fail("expected ')'");
        ++pos_;
        return r;
      }
      default: break;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) fail(c == '\0' ? "unexpected end of input" : "expected operand");
    std::string text = number();
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected denominator");
      const std::string den = number();
      text += "/" + den;
    }
    try {
      return WeylOperator::constant(MultiPoly(parse_rational(text)));
    } catch (const ArgumentError& e) {
      fail(e.what());
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

WeylOperator parse_weyl_expression(const std::string& text) { return Parser(text).parse(); }

}  // namespace cdh
