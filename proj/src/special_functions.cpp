#include "cdh/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cdh/errors.hpp"

namespace cdh {

namespace {

// Godfrey's coefficients for g = 607/128.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczosCoeffs = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4,
    0.15808870322491248884e-3,  -0.21026444172410488319e-3,
    0.21743961811521264320e-3,  -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4,
    0.36899182659531622704e-5};

constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;

Complex lanczos_sum(Complex z) {
  Complex s = kLanczosCoeffs[0];
  for (std::size_t k = 1; k < kLanczosCoeffs.size(); ++k) {
    s += kLanczosCoeffs[k] / (z + static_cast<double>(k - 1));
  }
  return s;
}

// Valid for Re z >= 1/2.
Complex log_gamma_lanczos(Complex z) {
  const Complex t = z + (kLanczosG - 0.5);
  return kHalfLog2Pi + (z - 0.5) * std::log(t) - t + std::log(lanczos_sum(z));
}

// Real part of log_gamma_lanczos with b >= 0, written out to avoid complex
// logs in the density hot path.
double re_log_gamma_lanczos(double a, double b) {
  double sr = kLanczosCoeffs[0];
  double si = 0.0;
  for (std::size_t k = 1; k < kLanczosCoeffs.size(); ++k) {
    const double re = a + static_cast<double>(k - 1);
    const double inv = kLanczosCoeffs[k] / (re * re + b * b);
    sr += re * inv;
    si -= b * inv;
  }
  const double tr = a + (kLanczosG - 0.5);
  const double log_abs_t = 0.5 * std::log(tr * tr + b * b);
  const double arg_t = std::atan2(b, tr);
  return kHalfLog2Pi + (a - 0.5) * log_abs_t - b * arg_t - tr +
         0.5 * std::log(sr * sr + si * si);
}

void throw_pole(double x) {
  std::ostringstream msg;
  msg << "Gamma has a pole at " << x;
  throw PoleError(msg.str());
}

}  // namespace

bool is_gamma_pole(double x, double tol) {
  if (x > tol) return false;
  return std::abs(x - std::round(x)) <= tol;
}

Complex log_gamma_complex(Complex z) {
  if (z.imag() == 0.0 && is_gamma_pole(z.real())) throw_pole(z.real());
  if (z.real() >= 0.5) return log_gamma_lanczos(z);
  // Shift up: log Gamma(z) = log Gamma(z + n) - sum_k log(z + k). Each
  // principal log has its cut on z <= -k, so the sum keeps the principal
  // branch of log Gamma.
  const int n = static_cast<int>(std::ceil(0.5 - z.real()));
  Complex shift = 0.0;
  for (int k = 0; k < n; ++k) shift += std::log(z + static_cast<double>(k));
  return log_gamma_lanczos(z + static_cast<double>(n)) - shift;
}

double log_abs_gamma(double x) {
  if (is_gamma_pole(x)) throw_pole(x);
  return log_abs_gamma_sq(x, 0.0) * 0.5;
}

double log_abs_gamma_sq(double a, double b) {
  b = std::abs(b);
  if (b == 0.0 && is_gamma_pole(a)) throw_pole(a);
  if (a >= 0.5) return 2.0 * re_log_gamma_lanczos(a, b);
  const int n = static_cast<int>(std::ceil(0.5 - a));
  double shift = 0.0;
  for (int k = 0; k < n; ++k) {
    const double re = a + k;
    shift += std::log(re * re + b * b);
  }
  return 2.0 * re_log_gamma_lanczos(a + n, b) - shift;
}

double abs_gamma_sq(double a, double b) { return std::exp(log_abs_gamma_sq(a, b)); }

double log_abs_gamma_sq_imaginary(double y) {
  y = std::abs(y);
  if (y == 0.0) throw_pole(0.0);
  const double py = std::numbers::pi * y;
  // log sinh(py) without overflow for large y.
  const double log_sinh =
      py > 20.0 ? py - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * py))
                : std::log(std::sinh(py));
  return std::log(std::numbers::pi / y) - log_sinh;
}

double pochhammer(double a, std::size_t n) {
  double p = 1.0;
  for (std::size_t k = 0; k < n; ++k) p *= a + static_cast<double>(k);
  return p;
}

double GammaProduct::value() const { return sign * std::exp(log_abs); }

GammaProduct gamma_product(std::span<const double> args) {
  GammaProduct out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const double x = args[i];
    if (is_gamma_pole(x)) {
      std::ostringstream msg;
      msg << "gamma_product: argument " << i << " (= " << x << ") is a pole";
      throw PoleError(msg.str());
    }
    out.log_abs += log_abs_gamma(x);
    // Gamma(x) < 0 exactly when x < 0 and floor(x) is odd.
    if (x < 0.0 && static_cast<long long>(std::floor(x)) % 2 != 0) out.sign = -out.sign;
  }
  return out;
}

}  // namespace cdh
