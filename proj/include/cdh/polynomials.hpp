#pragma once

// Continuous dual Hahn polynomials p_n(x | alpha, beta, gamma): monic,
// defined by the three-term recurrence
//   x p_n = p_{n+1} + (A_n + C_n - alpha^2) p_n + A_{n-1} C_n p_{n-1},
//   A_n = (n + alpha + beta)(n + alpha + gamma),  C_n = n (n - 1 + beta + gamma).
// beta, gamma are both real or a complex-conjugate pair, so every
// coefficient is real.

#include <complex>
#include <cstddef>
#include <variant>
#include <vector>

namespace cdh {

class ProcessParams;

/// Highest degree accepted by the public evaluators; plain forward
/// recurrence in double precision is trusted up to here.
inline constexpr int kMaxPolyDegree = 30;

struct TwoReals {
  double beta;
  double gamma;
};

/// beta = re - i*im, gamma = re + i*im.
struct ConjugatePair {
  double re;
  double im;
};

class CdhParams {
 public:
  using Pair = std::variant<TwoReals, ConjugatePair>;

  static CdhParams real(double alpha, double beta, double gamma);
  /// Throws ArgumentError when im == 0 (use real()).
  static CdhParams conjugate(double alpha, double re, double im);

  double alpha() const { return alpha_; }
  const Pair& pair() const { return pair_; }
  bool is_conjugate() const { return std::holds_alternative<ConjugatePair>(pair_); }

  std::complex<double> beta() const;
  std::complex<double> gamma() const;
  /// beta + gamma and beta * gamma (both real).
  double pair_sum() const;
  double pair_product() const;

  /// A_n and C_n.
  double a_coeff(int n) const;
  double c_coeff(int n) const;
  /// Diagonal recurrence coefficient A_n + C_n - alpha^2.
  double diagonal(int n) const;
  /// Favard product factor A_{n-1} C_n (n >= 1).
  double offdiagonal(int n) const;
  /// True when A_{n-1} C_n vanishes (one of its linear factors is zero
  /// within a relative tolerance of 1e-12).
  bool offdiagonal_vanishes(int n) const;

  /// Real parameters among (alpha, beta, gamma), in that order.
  std::vector<double> real_parameters() const;

  /// The parameters with beta and gamma exchanged.
  CdhParams swapped() const;

 private:
  CdhParams(double alpha, Pair pair) : alpha_(alpha), pair_(pair) {}

  double alpha_;
  Pair pair_;
};

struct RecurrenceCoeffs {
  double a;  // A_n
  double c;  // C_n
};

RecurrenceCoeffs recurrence_coeffs(const CdhParams& p, int n);

/// p_n(x) by forward recurrence; n <= kMaxPolyDegree.
double eval_poly(const CdhParams& p, int n, double x);

/// All of p_0(x), ..., p_n(x).
std::vector<double> eval_poly_all(const CdhParams& p, int n, double x);

/// Closed form p_n(-alpha^2) = (-1)^n (alpha+beta, alpha+gamma)_n.
double eval_at_minus_alpha_sq(const CdhParams& p, int n);

/// Numerator polynomials: same recurrence, q_0 = 0, q_1 = 1.
double numerator_poly(const CdhParams& p, int n, double x);

/// Monic coefficients (ascending powers) of p_0 ... p_n.
std::vector<std::vector<double>> poly_coefficients(const CdhParams& p, int n);

// --- Favard classification ------------------------------------------------

struct InfiniteSupport {};
struct FiniteAtoms {
  int count;
};
struct NotOrthogonal {
  int first_bad_index;
};
using FavardClass = std::variant<InfiniteSupport, FiniteAtoms, NotOrthogonal>;

inline constexpr int kDefaultFavardScan = 200;

/// Scans beta_j = A_{j-1} C_j for j = 1..scan_limit.
FavardClass favard_classify(const CdhParams& p, int scan_limit = kDefaultFavardScan);

/// Norm^2 of p_n: product beta_1 ... beta_n.
double norm_squared(const CdhParams& p, int n);
/// log of the same product; throws DomainError when a factor is <= 0.
double log_norm_squared(const CdhParams& p, int n);

/// p_n(x) / sqrt(beta_1 ... beta_n). Throws DomainError on a non-positive
/// norm factor.
double normalized_eval(const CdhParams& p, int n, double x);

// --- Determinacy diagnostic -----------------------------------------------

struct DeterminacySums {
  std::vector<double> p_terms;  // |p~_n(-alpha^2)|^2, n = 0..n_max
  std::vector<double> q_terms;  // |q~_n(-alpha^2)|^2, n = 0..n_max
  std::vector<double> p_partial;
  std::vector<double> q_partial;
};

/// Uses the closed forms at x = -alpha^2, so n_max is not bounded by
/// kMaxPolyDegree. Requires beta_j > 0 for j <= n_max.
DeterminacySums determinacy_partial_sums(const CdhParams& p, int n_max);

/// Least-squares slope of log(terms[n]) against log(n) over [n_lo, n_hi].
double fit_growth_exponent(const std::vector<double>& terms, int n_lo, int n_hi);

// --- Connection coefficients ----------------------------------------------

/// Row m (0 <= m <= n) holds b_{m,k}(x,s), k = 0..m, with b_{m,m} = 1.
struct ConnectionCoeffs {
  int n = 0;
  std::vector<std::vector<double>> values;
};

/// Expands Q_m(.; x, t_probe, s) in the basis p_k(.; t_probe) for m <= n.
ConnectionCoeffs connection_coeffs(const ProcessParams& pp, double x, double s, int n,
                                   double t_probe);

// --- Parameter families ---------------------------------------------------

/// (C - t, t - s -+ sqrt(-x)), with +-sqrt(-x) = +-i sqrt(x) for x > 0.
CdhParams kernel_family(double C, double s, double t, double x);

/// (C - t, A + t, B + t).
CdhParams marginal_family(const ProcessParams& pp, double t);

}  // namespace cdh
