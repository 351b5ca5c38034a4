#include "cdh/process_params.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "cdh/errors.hpp"

namespace cdh {

ProcessParams ProcessParams::real(double A, double B, double C) {
  if (!std::isfinite(A) || !std::isfinite(B) || !std::isfinite(C)) {
    throw ArgumentError("ProcessParams: non-finite parameter");
  }
  if (B < A) std::swap(A, B);
  if (!(A + C > 0.0)) {
    std::ostringstream msg;
    msg << "ProcessParams: need A + C > 0, got A + C = " << A + C;
    throw ArgumentError(msg.str());
  }
  return ProcessParams(A, B, 0.0, C);
}

ProcessParams ProcessParams::conjugate(double re, double im, double C) {
  if (!std::isfinite(re) || !std::isfinite(im) || !std::isfinite(C)) {
    throw ArgumentError("ProcessParams: non-finite parameter");
  }
  if (im == 0.0) throw ArgumentError("ProcessParams: conjugate pair needs Im A != 0");
  return ProcessParams(re, re, std::abs(im), C);
}

double ProcessParams::diff_ab_sq() const {
  if (is_conjugate()) return -4.0 * im_ * im_;
  const double d = re_a_ - re_b_;
  return d * d;
}

double ProcessParams::ac_bc_product() const {
  if (is_conjugate()) {
    const double r = re_a_ + c_;
    return r * r + im_ * im_;
  }
  return (re_a_ + c_) * (re_b_ + c_);
}

double ProcessParams::mean(double t) const {
  // AB + AC + BC = AB + C(A + B); AB = |A|^2 in the conjugate case.
  const double ab = is_conjugate() ? re_a_ * re_a_ + im_ * im_ : re_a_ * re_b_;
  return ab + c_ * sum_ab() + 2.0 * c_ * t - t * t;
}

double ProcessParams::variance(double t) const {
  return ac_bc_product() * (sum_ab() + 2.0 * t);
}

}  // namespace cdh
