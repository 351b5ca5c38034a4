#pragma once

#include <complex>

namespace cdh {

/// Parameters (A, B, C) of the Markov process. Either all real with
/// A + C > 0 (stored with B >= A), or B = conj(A) with Im A != 0 and C real.
class ProcessParams {
 public:
  /// Throws ArgumentError when A + C <= 0. A and B are swapped if B < A.
  static ProcessParams real(double A, double B, double C);
  /// A = re - i*im, B = re + i*im. Throws ArgumentError when im == 0.
  static ProcessParams conjugate(double re, double im, double C);

  bool is_conjugate() const { return im_ != 0.0; }
  std::complex<double> A() const { return {re_a_, -im_}; }
  std::complex<double> B() const { return {re_b_, im_}; }
  double C() const { return c_; }
  /// Real parts; for the conjugate case both equal Re A.
  double a_real() const { return re_a_; }
  double b_real() const { return re_b_; }
  /// |Im A| (0 for real parameters).
  double imag() const { return im_; }

  /// tau = -(A + B)/2, the start time.
  double tau() const { return -0.5 * (re_a_ + re_b_); }
  double sum_ab() const { return re_a_ + re_b_; }
  /// (A - B)^2, negative in the conjugate case.
  double diff_ab_sq() const;
  /// (A + C)(B + C) > 0.
  double ac_bc_product() const;
  /// The deterministic start -(A - B)^2 / 4.
  double start_location() const { return -0.25 * diff_ab_sq(); }

  /// E[T_t] = AB + AC + BC + 2Ct - t^2.
  double mean(double t) const;
  /// Var[T_t] = (A + C)(B + C)(A + B + 2t).
  double variance(double t) const;

 private:
  ProcessParams(double ra, double rb, double im, double c)
      : re_a_(ra), re_b_(rb), im_(im), c_(c) {}

  double re_a_;
  double re_b_;
  double im_;
  double c_;
};

}  // namespace cdh
