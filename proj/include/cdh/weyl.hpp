#pragma once

#include <map>
#include <string>
#include <utility>

#include "cdh/multipoly.hpp"
#include "cdh/rational_matrix.hpp"

namespace cdh {

/// Polynomial in z with MultiPoly coefficients, keyed by the power of z.
using ZPoly = std::map<int, MultiPoly>;

/// Element of the Weyl algebra in normal order: sum of c(A,B,C) z^m d^k
/// with every z to the left of every d. Zero coefficients are not stored.
class WeylOperator {
 public:
  using Key = std::pair<int, int>;  // (m, k)

  WeylOperator() = default;

  static WeylOperator identity() { return constant(MultiPoly(1)); }
  static WeylOperator constant(const MultiPoly& c);
  static WeylOperator z();
  static WeylOperator d();
  /// c z^m d^k.
  static WeylOperator monomial(int m, int k, const MultiPoly& c = MultiPoly(1));

  const std::map<Key, MultiPoly>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Coefficient of z^m d^k (zero polynomial when absent).
  MultiPoly coefficient(int m, int k) const;

  WeylOperator operator+(const WeylOperator& o) const;
  WeylOperator operator-(const WeylOperator& o) const;
  WeylOperator operator-() const;
  /// Composition f * g = f o g.
  WeylOperator operator*(const WeylOperator& o) const;
  bool operator==(const WeylOperator& o) const { return terms_ == o.terms_; }

  /// Terms in ascending (m, k), each "(coeff)*z^m*d^k" with unit powers
  /// shortened and zero powers dropped; "0" for the zero operator.
  std::string to_string() const;

 private:
  void add_term(const Key& key, const MultiPoly& c);

  std::map<Key, MultiPoly> terms_;
};

WeylOperator operator*(const MultiPoly& c, const WeylOperator& op);

WeylOperator compose(const WeylOperator& f, const WeylOperator& g);

/// op^e by repeated composition; identity for e = 0.
WeylOperator power(const WeylOperator& op, int e);

/// Normal form of d^k z^m as integer coefficients of z^a d^b, from the
/// single relation d z = 1 + z d (memoized per thread).
const std::map<WeylOperator::Key, Rational>& d_power_times_z_power(int k, int m);

/// 2(C + z d) + 2(A + C + z d)(B + C + z d) d. `constant_term` replaces the
/// leading 2C; used for mutation tests.
WeylOperator build_X(const MultiPoly& constant_term = MultiPoly(2) * MultiPoly::C());

/// z + (AB+AC+BC) + (2(A+B+C) - 1) z d + 2 (z d)^2 + (A+B+z d)(A+C+z d)(B+C+z d) d.
WeylOperator build_Y();

ZPoly apply_to_monomial(const WeylOperator& op, int n);

/// X Y - Y X - X^2/2 - 2Y in normal order.
WeylOperator commutator_defect(const WeylOperator& X, const WeylOperator& Y);

/// True iff commutator_defect(build_X(), build_Y()) is identically zero.
bool verify_commutator_symbolic();

/// K x K matrix whose column n holds the z-coefficients of op z^n with
/// (A, B, C) substituted.
RationalMatrix operator_matrix(const WeylOperator& op, int K, const Rational& a, const Rational& b,
                               const Rational& c);

}  // namespace cdh
