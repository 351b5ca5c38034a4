#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace cdh {

using Complex = std::complex<double>;

/// Principal branch of log Gamma(z) (cut along the non-positive real axis).
/// Lanczos approximation (g = 607/128, 15 terms) for Re z >= 1/2 and
/// upward recurrence below that. Throws PoleError at z = 0, -1, -2, ...
Complex log_gamma_complex(Complex z);

/// log|Gamma(x)| for real x; throws PoleError at non-positive integers.
double log_abs_gamma(double x);

/// log|Gamma(a + ib)|^2, evaluated without forming Gamma itself.
double log_abs_gamma_sq(double a, double b);

/// |Gamma(a + ib)|^2. Depends on b only through |b|.
double abs_gamma_sq(double a, double b);

/// log|Gamma(iy)|^2 = log(pi / (y sinh(pi y))) for y != 0, from the
/// reflection identity. Used where the density needs |Gamma(2i sqrt(x))|^2.
double log_abs_gamma_sq_imaginary(double y);

/// Rising factorial (a)_n = a (a+1) ... (a+n-1); (a)_0 = 1.
double pochhammer(double a, std::size_t n);

/// Product Gamma(a_1) Gamma(a_2) ... in log scale with its sign.
struct GammaProduct {
  double log_abs = 0.0;
  int sign = 1;

  double value() const;
};

/// Throws PoleError naming the offending argument.
GammaProduct gamma_product(std::span<const double> args);

/// True when x is 0, -1, -2, ... within `tol`.
bool is_gamma_pole(double x, double tol = 0.0);

}  // namespace cdh
