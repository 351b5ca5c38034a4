#include "cdh/multipoly.hpp"

#include <sstream>

#include "cdh/errors.hpp"

namespace cdh {

namespace {

Rational power(const Rational& base, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

MultiPoly::MultiPoly(const Rational& c) { add_term({0, 0, 0}, c); }

MultiPoly MultiPoly::variable(int index) {
  if (index < 0 || index > 2) throw ArgumentError("MultiPoly::variable: index must be 0, 1 or 2");
  MultiPoly p;
  Exponents e{0, 0, 0};
  e[index] = 1;
  p.add_term(e, 1);
  return p;
}

void MultiPoly::add_term(const Exponents& e, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  MultiPoly r = *this;
  r += o;
  return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
  MultiPoly r = *this;
  r -= o;
  return r;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  MultiPoly r;
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) {
      r.add_term({e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]}, c1 * c2);
    }
  }
  return r;
}

Rational MultiPoly::evaluate(const Rational& a, const Rational& b, const Rational& c) const {
  Rational acc = 0;
  for (const auto& [e, coeff] : terms_) acc += coeff * power(a, e[0]) * power(b, e[1]) * power(c, e[2]);
  return acc;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  static const char* names[] = {"A", "B", "C"};
  std::ostringstream out;
  bool first = true;
  // Highest total degree first, then lexicographic in (A, B, C).
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational mag = abs(c);
    if (first) {
      if (sgn(c) < 0) out << "-";
    } else {
      out << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    const bool constant = e[0] == 0 && e[1] == 0 && e[2] == 0;
    bool need_star = false;
    if (constant || mag != 1) {
      out << mag.get_str();
      need_star = true;
    }
    for (int v = 0; v < 3; ++v) {
      if (e[v] == 0) continue;
      if (need_star) out << "*";
      out << names[v];
      if (e[v] > 1) out << "^" << e[v];
      need_star = true;
    }
  }
  return out.str();
}

}  // namespace cdh
