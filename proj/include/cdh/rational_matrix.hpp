#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

namespace cdh {

using Rational = mpq_class;

/// Dense matrix of exact rationals (sizes here are at most a few dozen).
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Rational& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  RationalMatrix operator+(const RationalMatrix& o) const;
  RationalMatrix operator-(const RationalMatrix& o) const;
  RationalMatrix operator*(const RationalMatrix& o) const;
  RationalMatrix operator*(const Rational& c) const;

  /// max |a_ij| over 0 <= i, j <= last.
  Rational max_abs_block(int last) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

inline RationalMatrix operator*(const Rational& c, const RationalMatrix& m) { return m * c; }

/// Parses "p", "p/q", or a decimal such as "-1.25" exactly.
Rational parse_rational(const std::string& text);

/// Exact rational value of a double.
Rational rational_from_double(double v);

}  // namespace cdh
