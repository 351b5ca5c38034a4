#pragma once

#include <limits>
#include <vector>

#include "cdh/measures.hpp"
#include "cdh/polynomials.hpp"
#include "cdh/process_params.hpp"

namespace cdh {

/// exact_degree of a rule that reproduces a finitely supported measure.
inline constexpr int kAllDegrees = std::numeric_limits<int>::max();

struct QuadratureRule {
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;  // positive
  int exact_degree = 0;

  double total_mass() const;
  /// sum_i w_i y_i^k for k = 0..k_max.
  std::vector<double> moments(int k_max) const;
};

/// Rule size used by the verification routines for polynomial degree d.
inline int default_rule_size(int degree) { return degree + 4; }

/// K-node Gauss rule from the symmetric Jacobi matrix (diagonal b_n,
/// off-diagonal sqrt(A_{n-1} C_n)). DomainError if some needed product is
/// not positive, i.e. K exceeds the support size.
QuadratureRule golub_welsch(const CdhParams& p, int K);

/// Degenerate and finite-atomic measures give their atoms; Mixed measures
/// give the K-node rule of their family. NotNormalized for entrance laws.
QuadratureRule rule_for(const MixedMeasure& m, int K);

/// Moments e0' J^k e0 of the (possibly non-positive) functional defined by
/// the recurrence, k = 0..k_max.
std::vector<double> moment_functional(const CdhParams& p, int k_max);

/// Worst |G_mn - delta_mn prod beta_j| / sqrt(N_m N_n) over m, n <= n_max.
/// For a finitely supported family with N atoms only m, n < N are compared.
double verify_orthogonality(const CdhParams& p, int n_max);

/// Worst scaled |int p_n(y;t) p_{s,t}(x,dy) - p_n(x;s)| over n <= n_max.
/// ArgumentError for x outside E_s or s >= t.
double verify_martingale(const ProcessParams& pp, double s, double t, double x, int n_max);

/// Worst scaled difference of moments of degree <= `degree` between
/// int p_{s,t}(x,dy) p_{t,u}(y,.) and p_{s,u}(x,.).
double verify_chapman_kolmogorov(double C, double s, double t, double u, double x, int degree);

/// Same for int p_s(dx) p_{s,t}(x,.) against p_t. ArgumentError for s < tau.
double verify_marginal_evolution(const ProcessParams& pp, double s, double t, int degree);

}  // namespace cdh
