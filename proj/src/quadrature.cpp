#include "cdh/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "cdh/errors.hpp"

namespace cdh {

namespace {

struct ScaledMax {
  double worst = 0.0;

  void add(double lhs, double rhs, double magnitude) {
    const double scale = std::max({1.0, std::abs(rhs), magnitude});
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
};

// Moments of the inner kernel family from y, with the magnitude
// sum |.| tracked by the caller.
std::vector<double> inner_moments(double C, double s, double t, double y, int degree) {
  return moment_functional(kernel_family(C, s, t, y), degree);
}

}  // namespace

double QuadratureRule::total_mass() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

std::vector<double> QuadratureRule::moments(int k_max) const {
  std::vector<double> m(k_max + 1, 0.0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double p = weights[i];
    for (int k = 0; k <= k_max; ++k) {
      m[k] += p;
      p *= nodes[i];
    }
  }
  return m;
}

QuadratureRule golub_welsch(const CdhParams& p, int K) {
  if (K < 1) throw ArgumentError("golub_welsch: K must be >= 1");
  Eigen::VectorXd diag(K);
  Eigen::VectorXd off(std::max(K - 1, 1));
  for (int n = 0; n < K; ++n) diag[n] = p.diagonal(n);
  for (int n = 1; n < K; ++n) {
    const double b = p.offdiagonal(n);
    if (p.offdiagonal_vanishes(n) || !(b > 0.0)) {
      std::ostringstream msg;
      msg << "golub_welsch: A_" << n - 1 << " C_" << n << " = " << b << " is not positive (K = " << K << ")";
      throw DomainError(msg.str());
    }
    off[n - 1] = std::sqrt(b);
  }
  QuadratureRule rule;
  if (K == 1) {
    rule.nodes = {diag[0]};
    rule.weights = {1.0};
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off.head(K - 1), Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw ConvergenceError("golub_welsch: eigensolver failed");
    for (int i = 0; i < K; ++i) {
      rule.nodes.push_back(es.eigenvalues()[i]);
      const double v = es.eigenvectors()(0, i);
      rule.weights.push_back(v * v);
    }
  }
  rule.exact_degree = p.offdiagonal_vanishes(K) ? kAllDegrees : 2 * K - 1;
  return rule;
}

QuadratureRule rule_for(const MixedMeasure& m, int K) {
  if (!m.normalized()) throw NotNormalized("rule_for: measure is not a probability measure");
  QuadratureRule rule;
  switch (m.kind()) {
    case MeasureKind::Degenerate:
    case MeasureKind::FiniteAtomic:
      for (const Atom& a : m.atoms()) {
        rule.nodes.push_back(a.location);
        rule.weights.push_back(a.mass);
      }
      rule.exact_degree = kAllDegrees;
      return rule;
    case MeasureKind::Mixed:
      if (!m.continuous()->family) throw DomainError("rule_for: mixed measure without a polynomial family");
      return golub_welsch(*m.continuous()->family, K);
  }
  return rule;
}

std::vector<double> moment_functional(const CdhParams& p, int k_max) {
  if (k_max < 0) throw ArgumentError("moment_functional: negative k_max");
  // v = J^k e0 with J[n][n] = b_n, J[n+1][n] = 1, J[n][n+1] = beta_{n+1};
  // J^k e0 is supported on indices 0..k.
  const int size = k_max + 2;
  std::vector<double> diag(size), up(size);
  for (int n = 0; n < size; ++n) {
    diag[n] = p.diagonal(n);
    up[n] = p.offdiagonal_vanishes(n + 1) ? 0.0 : p.offdiagonal(n + 1);
  }
  std::vector<double> v(size, 0.0), w(size, 0.0);
  v[0] = 1.0;
  std::vector<double> out;
  out.reserve(k_max + 1);
  for (int k = 0; k <= k_max; ++k) {
    out.push_back(v[0]);
    const int top = std::min(k + 1, size - 1);
    for (int n = 0; n <= top; ++n) {
      double acc = diag[n] * v[n];
      if (n + 1 < size) acc += up[n] * v[n + 1];
      if (n > 0) acc += v[n - 1];
      w[n] = acc;
    }
    std::swap(v, w);
  }
  return out;
}

double verify_orthogonality(const CdhParams& p, int n_max) {
  if (n_max < 0) throw ArgumentError("verify_orthogonality: negative n_max");
  const FavardClass cls = favard_classify(p);
  if (std::holds_alternative<NotOrthogonal>(cls)) {
    throw DomainError("verify_orthogonality: no positive orthogonality measure");
  }
  int n_top = n_max;
  int K = default_rule_size(n_max);
  if (const auto* fin = std::get_if<FiniteAtoms>(&cls)) {
    n_top = std::min(n_max, fin->count - 1);
    K = fin->count;
  }
  const QuadratureRule rule = golub_welsch(p, K);
  std::vector<std::vector<double>> values;  // values[i][n] = p_n(y_i)
  for (double y : rule.nodes) values.push_back(eval_poly_all(p, n_top, y));
  std::vector<double> norms(n_top + 1);
  for (int n = 0; n <= n_top; ++n) norms[n] = norm_squared(p, n);
  double worst = 0.0;
  for (int m = 0; m <= n_top; ++m) {
    for (int n = m; n <= n_top; ++n) {
      double g = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) g += rule.weights[i] * values[i][m] * values[i][n];
      const double expected = m == n ? norms[n] : 0.0;
      worst = std::max(worst, std::abs(g - expected) / std::sqrt(norms[m] * norms[n]));
    }
  }
  return worst;
}

double verify_martingale(const ProcessParams& pp, double s, double t, double x, int n_max) {
  if (!(s < t)) throw ArgumentError("verify_martingale needs s < t");
  if (!state_space_contains(pp.C(), s, x)) {
    std::ostringstream msg;
    msg << "verify_martingale: x = " << x << " is not in E_s (s = " << s << ", C = " << pp.C()
        << "); the martingale identity is only claimed on E_s";
    throw ArgumentError(msg.str());
  }
  const QuadratureRule rule = rule_for(transition_kernel(pp.C(), s, t, x), default_rule_size(n_max));
  const CdhParams at_t = marginal_family(pp, t);
  const std::vector<double> rhs = eval_poly_all(marginal_family(pp, s), n_max, x);
  std::vector<double> lhs(n_max + 1, 0.0), mag(n_max + 1, 0.0);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const std::vector<double> vals = eval_poly_all(at_t, n_max, rule.nodes[i]);
    for (int n = 0; n <= n_max; ++n) {
      lhs[n] += rule.weights[i] * vals[n];
      mag[n] += rule.weights[i] * std::abs(vals[n]);
    }
  }
  ScaledMax r;
  for (int n = 0; n <= n_max; ++n) r.add(lhs[n], rhs[n], mag[n]);
  return r.worst;
}

namespace {

double compare_nested(const QuadratureRule& outer, double C, double t_mid, double t_end,
                      const QuadratureRule& direct, int degree) {
  std::vector<double> lhs(degree + 1, 0.0), mag(degree + 1, 0.0);
  for (std::size_t i = 0; i < outer.nodes.size(); ++i) {
    const std::vector<double> inner = inner_moments(C, t_mid, t_end, outer.nodes[i], degree);
    for (int k = 0; k <= degree; ++k) {
      lhs[k] += outer.weights[i] * inner[k];
      mag[k] += outer.weights[i] * std::abs(inner[k]);
    }
  }
  const std::vector<double> rhs = direct.moments(degree);
  ScaledMax r;
  for (int k = 0; k <= degree; ++k) r.add(lhs[k], rhs[k], mag[k]);
  return r.worst;
}

}  // namespace

double verify_chapman_kolmogorov(double C, double s, double t, double u, double x, int degree) {
  if (!(s < t && t < u)) throw ArgumentError("verify_chapman_kolmogorov needs s < t < u");
  if (degree < 0) throw ArgumentError("verify_chapman_kolmogorov: negative degree");
  const int K = default_rule_size(degree);
  const QuadratureRule outer = rule_for(transition_kernel(C, s, t, x), K);
  const QuadratureRule direct = rule_for(transition_kernel(C, s, u, x), K);
  return compare_nested(outer, C, t, u, direct, degree);
}

double verify_marginal_evolution(const ProcessParams& pp, double s, double t, int degree) {
  if (s < pp.tau() - 1e-12) throw ArgumentError("verify_marginal_evolution needs s >= tau");
  if (!(s < t)) throw ArgumentError("verify_marginal_evolution needs s < t");
  if (degree < 0) throw ArgumentError("verify_marginal_evolution: negative degree");
  const int K = default_rule_size(degree);
  const QuadratureRule outer = rule_for(marginal_law(pp, s), K);
  const QuadratureRule direct = rule_for(marginal_law(pp, t), K);
  return compare_nested(outer, pp.C(), s, t, direct, degree);
}

}  // namespace cdh
