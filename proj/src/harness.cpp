#include "cdh/harness.hpp"

#include <cmath>
#include <sstream>

#include "cdh/errors.hpp"

namespace cdh {

Rational harness_alpha(const Rational& A, const Rational& B, const Rational& C, int n) {
  const Rational e2 = A * B + A * C + B * C;
  return e2 + (2 * (A + B + C) - 1) * n + Rational(2 * n * n);
}

Rational harness_beta(const Rational& C, int n) { return 2 * (C + n); }

Rational harness_gamma(const Rational& A, const Rational& B, const Rational& C, int n) {
  return n * (A + B + n - 1) * (A + C + n - 1) * (B + C + n - 1);
}

Rational harness_delta(const Rational& A, const Rational& B, const Rational& C, int n) {
  return 2 * n * (A + C + n - 1) * (B + C + n - 1);
}

JacobiTruncation jacobi_matrices(const Rational& A, const Rational& B, const Rational& C, int K) {
  if (K < 4) throw ArgumentError("jacobi_matrices needs K >= 4");
  JacobiTruncation jt{K, RationalMatrix(K, K), RationalMatrix(K, K)};
  for (int n = 0; n < K; ++n) {
    jt.X(n, n) = harness_beta(C, n);
    jt.Y(n, n) = harness_alpha(A, B, C, n);
    if (n + 1 < K) {
      jt.X(n, n + 1) = harness_delta(A, B, C, n + 1);
      jt.Y(n, n + 1) = harness_gamma(A, B, C, n + 1);
      jt.Y(n + 1, n) = 1;
    }
  }
  return jt;
}

RationalMatrix jacobi_at(const JacobiTruncation& jt, const Rational& t) { return jt.Y + t * jt.X; }

Rational commutator_residual(const JacobiTruncation& jt) {
  const RationalMatrix& X = jt.X;
  const RationalMatrix& Y = jt.Y;
  const RationalMatrix r = X * Y - Y * X - Rational(1, 2) * (X * X) - Rational(2) * Y;
  return r.max_abs_block(jt.K - 4);
}

Rational quadratic_variance_matrix_identity(const Rational& A, const Rational& B, const Rational& C,
                                            const Rational& s, const Rational& t, const Rational& u, int K) {
  if (!(s <= t && t <= u && s < u)) throw ArgumentError("quadratic_variance_matrix_identity needs s <= t <= u, s < u");
  if (K < 6) throw ArgumentError("quadratic_variance_matrix_identity needs K >= 6");
  const JacobiTruncation jt = jacobi_matrices(A, B, C, K);
  const RationalMatrix Js = jacobi_at(jt, s);
  const RationalMatrix Jt = jacobi_at(jt, t);
  const RationalMatrix Ju = jacobi_at(jt, u);
  const Rational D = (1 + 2 * u - 2 * s) * (u - s);
  const Rational c_ss = (1 + 2 * u - 2 * t) * (u - t) / D;
  const Rational c_uu = (1 + 2 * t - 2 * s) * (t - s) / D;
  const Rational c_su = 4 * (t - s) * (u - t) / D;
  const Rational c_s = 4 * u * (t - s) * (u - t) / D;
  const Rational c_u = 4 * s * (t - s) * (u - t) / D;
  const RationalMatrix rhs = c_ss * (Js * Js) + c_uu * (Ju * Ju) + c_su * (Js * Ju) + c_s * Js - c_u * Ju;
  return (Jt * Jt - rhs).max_abs_block(K - 6);
}

Rational harness_linearity_residual(const Rational& A, const Rational& B, const Rational& C,
                                    const Rational& s, const Rational& t, const Rational& u, int K) {
  if (!(s < u)) throw ArgumentError("harness_linearity_residual needs s < u");
  const JacobiTruncation jt = jacobi_matrices(A, B, C, K);
  const RationalMatrix lhs = jacobi_at(jt, t);
  const RationalMatrix rhs = ((u - t) / (u - s)) * jacobi_at(jt, s) + ((t - s) / (u - s)) * jacobi_at(jt, u);
  return (lhs - rhs).max_abs_block(K - 1);
}

bool shifted_recurrence_consistent(const Rational& A, const Rational& B, const Rational& C,
                                   const Rational& t, int n_max) {
  // CDH marginal parameters (C - t, A + t, B + t).
  const Rational alpha = C - t;
  const auto a_coeff = [&](int n) -> Rational { return (n + A + C) * (n + B + C); };
  const auto c_coeff = [&](int n) -> Rational { return n * (n - 1 + A + B + 2 * t); };
  for (int n = 0; n <= n_max; ++n) {
    const Rational b_shifted = a_coeff(n) + c_coeff(n) - alpha * alpha + t * t;
    if (b_shifted != harness_alpha(A, B, C, n) + harness_beta(C, n) * t) return false;
    if (n >= 1) {
      const Rational c_shifted = a_coeff(n - 1) * c_coeff(n);
      if (c_shifted != harness_gamma(A, B, C, n) + harness_delta(A, B, C, n) * t) return false;
    }
  }
  return true;
}

std::pair<std::complex<double>, std::complex<double>> harness_to_sums(const HarnessParams& hp) {
  if (!(hp.eta > 0.0)) throw DomainError("harness parameters need eta > 0");
  if (!(hp.theta > -2.0)) throw DomainError("harness parameters need theta > -2");
  const double d = hp.theta * hp.theta - 4.0;
  const double scale = 2.0 * hp.eta;
  if (hp.theta >= 2.0) {
    const double r = std::sqrt(d);
    return {(hp.theta - r) / scale, (hp.theta + r) / scale};
  }
  const double r = std::sqrt(-d);
  return {std::complex<double>(hp.theta, -r) / scale, std::complex<double>(hp.theta, r) / scale};
}

HarnessParams sums_to_harness(std::complex<double> ac, std::complex<double> bc) {
  const std::complex<double> prod = ac * bc;
  if (std::abs(prod.imag()) > 1e-12 * std::max(1.0, std::abs(prod)) || !(prod.real() > 0.0)) {
    throw DomainError("(A+C)(B+C) must be real and positive");
  }
  const double root = std::sqrt(prod.real());
  return {1.0 / root, (ac + bc).real() / root};
}

HarnessParams harness_params(const ProcessParams& pp) {
  const std::complex<double> C(pp.C(), 0.0);
  return sums_to_harness(pp.A() + C, pp.B() + C);
}

double conditional_variance_formula(double x_s, double x_u, double s, double t, double u,
                                    const HarnessParams& hp) {
  if (!(s < t && t < u)) throw ArgumentError("conditional_variance_formula needs s < t < u");
  const double w = u - s;
  const double bracket = 1.0 + hp.eta * (u * x_s - s * x_u) / w + hp.theta * (x_u - x_s) / w +
                         (x_u - x_s) * (x_u - x_s) / (w * w);
  return (u - t) * (t - s) / (1.0 + w) * bracket;
}

YConditional y_conditional_formulas(double y_s, double y_u, double s, double t, double u,
                                    const ProcessParams& /*pp*/) {
  if (!(s < t && t < u)) throw ArgumentError("y_conditional_formulas needs s < t < u");
  const double w = u - s;
  YConditional out;
  out.mean = ((u - t) * y_s + (t - s) * y_u) / w;
  out.variance = (u - t) * (t - s) / (1.0 + 2.0 * w) *
                 (4.0 * (u * y_s - s * y_u) / w + (y_u - y_s) * (y_u - y_s) / (w * w));
  const double D = (1.0 + 2.0 * u - 2.0 * s) * w;
  out.second_moment_expanded = (1.0 + 2.0 * u - 2.0 * t) * (u - t) / D * y_s * y_s +
                               (1.0 + 2.0 * t - 2.0 * s) * (t - s) / D * y_u * y_u +
                               4.0 * (t - s) * (u - t) / D * y_s * y_u +
                               4.0 * u * (t - s) * (u - t) / D * y_s -
                               4.0 * s * (t - s) * (u - t) / D * y_u;
  const double direct = out.mean * out.mean + out.variance;
  out.consistency_residual =
      std::abs(direct - out.second_moment_expanded) / std::max(1.0, std::abs(out.second_moment_expanded));
  return out;
}

}  // namespace cdh
