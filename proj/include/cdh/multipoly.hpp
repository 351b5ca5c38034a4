#pragma once

#include <array>
#include <map>
#include <string>

#include "cdh/rational_matrix.hpp"

namespace cdh {

/// Sparse polynomial in A, B, C with exact rational coefficients. Terms are
/// keyed by exponent triples; zero coefficients are never stored.
class MultiPoly {
 public:
  using Exponents = std::array<int, 3>;

  MultiPoly() = default;
  MultiPoly(const Rational& c);  // NOLINT: constants convert implicitly
  MultiPoly(int c) : MultiPoly(Rational(c)) {}  // NOLINT

  static MultiPoly variable(int index);  // 0 -> A, 1 -> B, 2 -> C
  static MultiPoly A() { return variable(0); }
  static MultiPoly B() { return variable(1); }
  static MultiPoly C() { return variable(2); }

  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator-() const;
  MultiPoly operator*(const MultiPoly& o) const;
  bool operator==(const MultiPoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const MultiPoly& o) const { return !(*this == o); }

  Rational evaluate(const Rational& a, const Rational& b, const Rational& c) const;

  /// Deterministic text such as "2*A*C^2 - 1/2*B + 3"; "0" when empty.
  std::string to_string() const;

 private:
  void add_term(const Exponents& e, const Rational& c);

  std::map<Exponents, Rational> terms_;
};

}  // namespace cdh
