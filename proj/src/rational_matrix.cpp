#include "cdh/rational_matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "cdh/errors.hpp"

namespace cdh {

RationalMatrix::RationalMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {
  if (rows < 0 || cols < 0) throw ArgumentError("RationalMatrix: negative size");
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ArgumentError("RationalMatrix: size mismatch");
  RationalMatrix r(rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] + o.data_[k];
  return r;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ArgumentError("RationalMatrix: size mismatch");
  RationalMatrix r(rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] - o.data_[k];
  return r;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
  if (cols_ != o.rows_) throw ArgumentError("RationalMatrix: size mismatch");
  RationalMatrix r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (sgn(a) == 0) continue;
      for (int j = 0; j < o.cols_; ++j) {
        if (sgn(o(k, j)) != 0) r(i, j) += a * o(k, j);
      }
    }
  }
  return r;
}

RationalMatrix RationalMatrix::operator*(const Rational& c) const {
  RationalMatrix r(rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] * c;
  return r;
}

Rational RationalMatrix::max_abs_block(int last) const {
  Rational worst = 0;
  for (int i = 0; i <= last && i < rows_; ++i) {
    for (int j = 0; j <= last && j < cols_; ++j) {
      const Rational a = abs((*this)(i, j));
      if (a > worst) worst = a;
    }
  }
  return worst;
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ArgumentError("empty rational");
  const auto dot = text.find('.');
  try {
    if (dot == std::string::npos) {
      Rational r(text);
      if (r.get_den() == 0) throw ArgumentError("zero denominator in " + text);
      r.canonicalize();
      return r;
    }
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t frac_len = text.size() - dot - 1;
    mpz_class num(digits.empty() || digits == "-" || digits == "+" ? "0" : digits);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    Rational r(num, den);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ArgumentError("not a rational number: " + text);
  }
}

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw ArgumentError("rational_from_double: non-finite value");
  return Rational(v);
}

}  // namespace cdh
