#pragma once

#include <complex>

#include "cdh/process_params.hpp"
#include "cdh/rational_matrix.hpp"

namespace cdh {

// Jacobi-matrix coefficients of the martingale polynomials of Y_t = T_t + t^2:
//   x q_n = q_{n+1} + (alpha_n + beta_n t) q_n + (gamma_n + delta_n t) q_{n-1}.
// alpha_n carries the 2n^2 term (see README).
Rational harness_alpha(const Rational& A, const Rational& B, const Rational& C, int n);
Rational harness_beta(const Rational& C, int n);
Rational harness_gamma(const Rational& A, const Rational& B, const Rational& C, int n);
Rational harness_delta(const Rational& A, const Rational& B, const Rational& C, int n);

struct JacobiTruncation {
  int K = 0;
  RationalMatrix X;  // diagonal beta_n, superdiagonal delta_{n+1}
  RationalMatrix Y;  // subdiagonal 1, diagonal alpha_n, superdiagonal gamma_{n+1}
};

/// K x K truncations; ArgumentError for K < 4.
JacobiTruncation jacobi_matrices(const Rational& A, const Rational& B, const Rational& C, int K);

/// J(t) = Y + t X.
RationalMatrix jacobi_at(const JacobiTruncation& jt, const Rational& t);

/// max |XY - YX - X^2/2 - 2Y| over the block [0, K-4]^2.
Rational commutator_residual(const JacobiTruncation& jt);

/// J(t)^2 minus the quadratic combination of J(s), J(u) from the proof of the
/// conditional-variance formula, on the block [0, K-6]^2. Needs s <= t <= u, s < u.
Rational quadratic_variance_matrix_identity(const Rational& A, const Rational& B, const Rational& C,
                                            const Rational& s, const Rational& t, const Rational& u, int K);

/// max |J(t) - ((u-t) J(s) + (t-s) J(u)) / (u-s)| over the whole truncation.
Rational harness_linearity_residual(const Rational& A, const Rational& B, const Rational& C,
                                    const Rational& s, const Rational& t, const Rational& u, int K);

/// The recurrence of Y_t obtained by shifting the CDH marginal recurrence by
/// t^2 matches (alpha_n + beta_n t, gamma_n + delta_n t) for n <= n_max.
bool shifted_recurrence_consistent(const Rational& A, const Rational& B, const Rational& C,
                                   const Rational& t, int n_max);

// --- Parameter maps ---------------------------------------------------------

struct HarnessParams {
  double eta;    // > 0
  double theta;  // > -2
};

/// (A + C, B + C); complex conjugates for |theta| < 2. DomainError unless
/// eta > 0 and theta > -2.
std::pair<std::complex<double>, std::complex<double>> harness_to_sums(const HarnessParams& hp);

/// eta = 1/sqrt((A+C)(B+C)), theta = (2C+A+B)/sqrt((A+C)(B+C)).
HarnessParams sums_to_harness(std::complex<double> ac, std::complex<double> bc);
HarnessParams harness_params(const ProcessParams& pp);

// --- Conditional-moment formulas ---------------------------------------------

/// Var[X_t | X_s = x_s, X_u = x_u] in standard form. ArgumentError unless s < t < u.
double conditional_variance_formula(double x_s, double x_u, double s, double t, double u,
                                    const HarnessParams& hp);

struct YConditional {
  double mean;
  double variance;
  /// E[Y_t^2 | Y_s, Y_u] from the expanded quadratic form.
  double second_moment_expanded;
  /// |mean^2 + variance - second_moment_expanded| / max(1, |second_moment_expanded|).
  double consistency_residual;
};

/// Conditional mean and variance of Y_t given Y_s, Y_u, with the expanded
/// second-moment form evaluated alongside. ArgumentError unless s < t < u.
YConditional y_conditional_formulas(double y_s, double y_u, double s, double t, double u,
                                    const ProcessParams& pp);

}  // namespace cdh
