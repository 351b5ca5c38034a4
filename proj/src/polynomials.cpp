#include "cdh/polynomials.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cdh/errors.hpp"
#include "cdh/process_params.hpp"

namespace cdh {

namespace {

constexpr double kZeroTol = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_degree(int n) {
  if (n < 0 || n > kMaxPolyDegree) {
    std::ostringstream msg;
    msg << "polynomial degree " << n << " outside [0, " << kMaxPolyDegree << "]";
    throw ArgumentError(msg.str());
  }
}

bool near_zero(double v, double scale) { return std::abs(v) <= kZeroTol * std::max(1.0, scale); }

}  // namespace

CdhParams CdhParams::real(double alpha, double beta, double gamma) {
  return CdhParams(alpha, TwoReals{beta, gamma});
}

CdhParams CdhParams::conjugate(double alpha, double re, double im) {
  if (im == 0.0) throw ArgumentError("CdhParams::conjugate needs im != 0");
  return CdhParams(alpha, ConjugatePair{re, std::abs(im)});
}

std::complex<double> CdhParams::beta() const {
  return std::visit(overloaded{[](const TwoReals& r) { return std::complex<double>(r.beta, 0.0); },
                               [](const ConjugatePair& c) { return std::complex<double>(c.re, -c.im); }},
                    pair_);
}

std::complex<double> CdhParams::gamma() const {
  return std::visit(overloaded{[](const TwoReals& r) { return std::complex<double>(r.gamma, 0.0); },
                               [](const ConjugatePair& c) { return std::complex<double>(c.re, c.im); }},
                    pair_);
}

double CdhParams::pair_sum() const {
  return std::visit(overloaded{[](const TwoReals& r) { return r.beta + r.gamma; },
                               [](const ConjugatePair& c) { return 2.0 * c.re; }},
                    pair_);
}

double CdhParams::pair_product() const {
  return std::visit(overloaded{[](const TwoReals& r) { return r.beta * r.gamma; },
                               [](const ConjugatePair& c) { return c.re * c.re + c.im * c.im; }},
                    pair_);
}

double CdhParams::a_coeff(int n) const {
  const double shift = n + alpha_;
  return std::visit(overloaded{[&](const TwoReals& r) { return (shift + r.beta) * (shift + r.gamma); },
                               [&](const ConjugatePair& c) {
                                 const double re = shift + c.re;
                                 return re * re + c.im * c.im;
                               }},
                    pair_);
}

double CdhParams::c_coeff(int n) const { return n * (n - 1 + pair_sum()); }

double CdhParams::diagonal(int n) const { return a_coeff(n) + c_coeff(n) - alpha_ * alpha_; }

double CdhParams::offdiagonal(int n) const { return a_coeff(n - 1) * c_coeff(n); }

bool CdhParams::offdiagonal_vanishes(int n) const {
  if (n <= 0) return true;
  const double scale = std::abs(n) + std::abs(alpha_) + std::abs(beta()) + std::abs(gamma());
  if (near_zero(n - 1 + pair_sum(), scale)) return true;
  return std::visit(overloaded{[&](const TwoReals& r) {
                                 const double shift = n - 1 + alpha_;
                                 return near_zero(shift + r.beta, scale) ||
                                        near_zero(shift + r.gamma, scale);
                               },
                               [](const ConjugatePair&) { return false; }},
                    pair_);
}

std::vector<double> CdhParams::real_parameters() const {
  std::vector<double> out{alpha_};
  if (const auto* r = std::get_if<TwoReals>(&pair_)) {
    out.push_back(r->beta);
    out.push_back(r->gamma);
  }
  return out;
}

CdhParams CdhParams::swapped() const {
  return std::visit(overloaded{[&](const TwoReals& r) { return real(alpha_, r.gamma, r.beta); },
                               [&](const ConjugatePair& c) {
                                 return CdhParams(alpha_, ConjugatePair{c.re, -c.im});
                               }},
                    pair_);
}

RecurrenceCoeffs recurrence_coeffs(const CdhParams& p, int n) {
  if (n < 0) throw ArgumentError("recurrence_coeffs: negative index");
  return {p.a_coeff(n), p.c_coeff(n)};
}

std::vector<double> eval_poly_all(const CdhParams& p, int n, double x) {
  check_degree(n);
  std::vector<double> out(n + 1);
  out[0] = 1.0;
  double prev = 0.0;
  for (int k = 0; k < n; ++k) {
    const double next = (x - p.diagonal(k)) * out[k] - (k > 0 ? p.offdiagonal(k) * prev : 0.0);
    prev = out[k];
    out[k + 1] = next;
  }
  return out;
}

double eval_poly(const CdhParams& p, int n, double x) { return eval_poly_all(p, n, x).back(); }

double eval_at_minus_alpha_sq(const CdhParams& p, int n) {
  if (n < 0) throw ArgumentError("eval_at_minus_alpha_sq: negative degree");
  double v = 1.0;
  for (int k = 0; k < n; ++k) v *= -p.a_coeff(k);
  return v;
}

double numerator_poly(const CdhParams& p, int n, double x) {
  check_degree(n);
  if (n == 0) return 0.0;
  double prev = 0.0;
  double cur = 1.0;
  for (int k = 1; k < n; ++k) {
    const double next = (x - p.diagonal(k)) * cur - p.offdiagonal(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<std::vector<double>> poly_coefficients(const CdhParams& p, int n) {
  check_degree(n);
  std::vector<std::vector<double>> out;
  out.push_back({1.0});
  for (int k = 0; k < n; ++k) {
    const auto& cur = out[k];
    std::vector<double> next(k + 2, 0.0);
    for (int i = 0; i <= k; ++i) {
      next[i + 1] += cur[i];
      next[i] -= p.diagonal(k) * cur[i];
    }
    if (k > 0) {
      const double b = p.offdiagonal(k);
      for (int i = 0; i < k; ++i) next[i] -= b * out[k - 1][i];
    }
    out.push_back(std::move(next));
  }
  return out;
}

FavardClass favard_classify(const CdhParams& p, int scan_limit) {
  if (scan_limit < 1) throw ArgumentError("favard_classify: scan_limit must be >= 1");
  for (int j = 1; j <= scan_limit; ++j) {
    if (p.offdiagonal_vanishes(j)) return FiniteAtoms{j};
    if (p.offdiagonal(j) < 0.0) return NotOrthogonal{j};
  }
  return InfiniteSupport{};
}

double norm_squared(const CdhParams& p, int n) {
  double v = 1.0;
  for (int j = 1; j <= n; ++j) v *= p.offdiagonal(j);
  return v;
}

double log_norm_squared(const CdhParams& p, int n) {
  double v = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double b = p.offdiagonal(j);
    if (!(b > 0.0)) {
      std::ostringstream msg;
      msg << "norm factor A_" << j - 1 << " C_" << j << " = " << b << " is not positive";
      throw DomainError(msg.str());
    }
    v += std::log(b);
  }
  return v;
}

double normalized_eval(const CdhParams& p, int n, double x) {
  check_degree(n);
  const double log_norm = log_norm_squared(p, n);
  return eval_poly(p, n, x) * std::exp(-0.5 * log_norm);
}

DeterminacySums determinacy_partial_sums(const CdhParams& p, int n_max) {
  if (n_max < 0) throw ArgumentError("determinacy_partial_sums: negative n_max");
  DeterminacySums out;
  out.p_terms.reserve(n_max + 1);
  out.q_terms.reserve(n_max + 1);
  // r_n = |p~_n(-alpha^2)|^2 = prod_{k=1}^n A_{k-1} / C_k.
  double r = 1.0;
  // sum_{m=0}^{n-1} prod_{k=1}^m C_k / A_k
  double s = 0.0;
  double ratio_prod = 1.0;
  const double a0 = p.a_coeff(0);
  for (int n = 0; n <= n_max; ++n) {
    if (n >= 1) {
      const double beta = p.offdiagonal(n);
      if (!(beta > 0.0)) {
        std::ostringstream msg;
        msg << "determinacy diagnostic needs A_{j-1} C_j > 0; fails at j = " << n;
        throw DomainError(msg.str());
      }
      r *= p.a_coeff(n - 1) / p.c_coeff(n);
      if (n >= 2) ratio_prod *= p.c_coeff(n - 1) / p.a_coeff(n - 1);
      s += ratio_prod;
    }
    out.p_terms.push_back(r);
    out.q_terms.push_back(n == 0 ? 0.0 : s * s * r / (a0 * a0));
  }
  out.p_partial.resize(out.p_terms.size());
  out.q_partial.resize(out.q_terms.size());
  double acc_p = 0.0;
  double acc_q = 0.0;
  for (std::size_t i = 0; i < out.p_terms.size(); ++i) {
    acc_p += out.p_terms[i];
    acc_q += out.q_terms[i];
    out.p_partial[i] = acc_p;
    out.q_partial[i] = acc_q;
  }
  return out;
}

double fit_growth_exponent(const std::vector<double>& terms, int n_lo, int n_hi) {
  if (n_lo < 1 || n_hi <= n_lo || static_cast<std::size_t>(n_hi) >= terms.size()) {
    throw ArgumentError("fit_growth_exponent: bad range");
  }
  // Log-spaced sample points so every decade weighs the same.
  constexpr int kSamples = 200;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  int last = -1;
  for (int i = 0; i < kSamples; ++i) {
    const double f = static_cast<double>(i) / (kSamples - 1);
    const int n = static_cast<int>(std::lround(std::exp(std::log(n_lo) * (1 - f) + std::log(n_hi) * f)));
    if (n == last) continue;
    last = n;
    if (!(terms[n] > 0.0)) throw DomainError("fit_growth_exponent: non-positive term");
    const double x = std::log(static_cast<double>(n));
    const double y = std::log(terms[n]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

ConnectionCoeffs connection_coeffs(const ProcessParams& pp, double x, double s, int n,
                                   double t_probe) {
  if (n < 1) throw ArgumentError("connection_coeffs: n must be >= 1");
  const auto q = poly_coefficients(kernel_family(pp.C(), s, t_probe, x), n);
  const auto basis = poly_coefficients(marginal_family(pp, t_probe), n);
  ConnectionCoeffs out;
  out.n = n;
  for (int m = 0; m <= n; ++m) {
    std::vector<double> residual = q[m];
    std::vector<double> row(m + 1, 0.0);
    for (int k = m; k >= 0; --k) {
      row[k] = residual[k];
      for (int i = 0; i <= k; ++i) residual[i] -= row[k] * basis[k][i];
    }
    out.values.push_back(std::move(row));
  }
  return out;
}

CdhParams kernel_family(double C, double s, double t, double x) {
  const double alpha = C - t;
  const double d = t - s;
  if (x > 0.0) return CdhParams::conjugate(alpha, d, std::sqrt(x));
  const double v = std::sqrt(-x);
  return CdhParams::real(alpha, d - v, d + v);
}

CdhParams marginal_family(const ProcessParams& pp, double t) {
  const double alpha = pp.C() - t;
  if (pp.is_conjugate()) return CdhParams::conjugate(alpha, pp.a_real() + t, pp.imag());
  return CdhParams::real(alpha, pp.a_real() + t, pp.b_real() + t);
}

}  // namespace cdh
