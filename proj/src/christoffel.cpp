#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "cdh/errors.hpp"
#include "cdh/measures.hpp"

namespace cdh {

namespace {

constexpr int kRichardsonLevels = 6;
constexpr double kDoublingTolerance = 1e-8;

// At x = -(e + k)^2, with e a real parameter and e + k < 0, the 3F2
// representation terminates:
//   p_n(x) = (-1)^n (e+f, e+g)_n sum_{m<=k} (-n, 2e+k, -k)_m / ((e+f, e+g)_m m!),
// where f, g are the other two parameters. `q` is the family rewritten with e
// in the alpha slot, so A_j(q) = (j+e+f)(j+e+g) and C_j(q) = j(j-1+f+g).
struct ParameterAtom {
  CdhParams q;
  int k;
};

std::optional<ParameterAtom> parameter_atom(const CdhParams& p, double x) {
  const double w = std::sqrt(-x);
  std::vector<CdhParams> forms{p};
  if (const auto* r = std::get_if<TwoReals>(&p.pair())) {
    forms.push_back(CdhParams::real(r->beta, p.alpha(), r->gamma));
    forms.push_back(CdhParams::real(r->gamma, p.alpha(), r->beta));
  }
  for (const CdhParams& q : forms) {
    const double e = q.alpha();
    const double k = std::round(-e - w);
    if (k < 0 || std::abs(e + k + w) > 1e-9 * std::max(1.0, w)) continue;
    bool ok = true;
    for (int m = 0; m < k; ++m) ok = ok && q.a_coeff(m) != 0.0;
    if (ok) return ParameterAtom{q, static_cast<int>(k)};
  }
  return std::nullopt;
}

// Partial sums sum_{n < N} ptilde_n(x)^2 recorded at each N in `checkpoints`
// (ascending). Forward recurrence is unstable at an atom (ptilde_n is the
// recessive solution there), so parameter atoms use the terminating sum.
std::vector<double> christoffel_partial_sums(const CdhParams& p, double x,
                                             const std::vector<int>& checkpoints) {
  std::vector<double> out;
  out.reserve(checkpoints.size());
  double sum = 0.0;
  std::size_t next = 0;

  if (const auto pa = parameter_atom(p, x)) {
    const CdhParams& q = pa->q;
    const double e = q.alpha();
    const int k = pa->k;
    double ratio = 1.0;  // (e+f, e+g)_n / (n! (f+g)_n)
    for (int n = 0; next < checkpoints.size(); ++n) {
      double term = 1.0, s = 1.0;
      for (int m = 0; m < k; ++m) {
        term *= (m - n) * (2.0 * e + k + m) * (m - k) / (q.a_coeff(m) * (m + 1.0));
        s += term;
      }
      sum += ratio * s * s;
      if (n + 1 == checkpoints[next]) {
        out.push_back(sum);
        ++next;
      }
      const double c = q.c_coeff(n + 1);
      if (!(c > 0.0)) throw DomainError("Christoffel sum needs positive recurrence products");
      ratio *= q.a_coeff(n) / c;
    }
    return out;
  }

  double prev = 0.0;
  double cur = 1.0;
  double a_cur = 0.0;  // sqrt(beta_n)
  for (int n = 0; next < checkpoints.size(); ++n) {
    sum += cur * cur;
    if (n + 1 == checkpoints[next]) {
      out.push_back(sum);
      ++next;
    }
    const double beta_next = p.offdiagonal(n + 1);
    if (!(beta_next > 0.0)) throw DomainError("Christoffel sum needs positive recurrence products");
    const double a_next = std::sqrt(beta_next);
    const double nxt = ((x - p.diagonal(n)) * cur - a_cur * prev) / a_next;
    prev = cur;
    cur = nxt;
    a_cur = a_next;
  }
  return out;
}

// Eliminates tail terms N^{-(base + m)}, m = 0, 1, ..., from sums at N, 2N, 4N, ...
double richardson(std::vector<double> t, double base) {
  for (std::size_t m = 0; t.size() > 1; ++m) {
    const double f = std::pow(2.0, base + static_cast<double>(m));
    for (std::size_t i = 0; i + 1 < t.size(); ++i) t[i] = (f * t[i + 1] - t[i]) / (f - 1.0);
    t.pop_back();
  }
  return t.front();
}

}  // namespace

std::vector<double> atom_masses_christoffel(const CdhParams& p, const std::vector<double>& locations,
                                            int truncation) {
  if (truncation < 50) throw ArgumentError("atom_masses_christoffel: truncation must be >= 50");
  const FavardClass cls = favard_classify(p);
  if (std::holds_alternative<NotOrthogonal>(cls)) {
    throw DomainError("atom_masses_christoffel: parameters are not positive definite");
  }
  std::vector<double> masses;
  masses.reserve(locations.size());

  if (const auto* fin = std::get_if<FiniteAtoms>(&cls)) {
    for (double x : locations) {
      double prev = 0.0, cur = 1.0, a_cur = 0.0, sum = 0.0;
      for (int n = 0; n < fin->count; ++n) {
        sum += cur * cur;
        if (n + 1 == fin->count) break;
        const double a_next = std::sqrt(p.offdiagonal(n + 1));
        const double nxt = ((x - p.diagonal(n)) * cur - a_cur * prev) / a_next;
        prev = cur;
        cur = nxt;
        a_cur = a_next;
      }
      masses.push_back(1.0 / sum);
    }
    return masses;
  }

  // The tail expands in powers of |parameter|^2 / N, so start beyond that.
  const double scale = std::max({p.alpha() * p.alpha(), std::norm(p.beta()), std::norm(p.gamma())});
  const int start = std::max(truncation, static_cast<int>(std::min(4.0 * scale, 16384.0)));
  std::vector<int> checkpoints;
  for (int l = 0; l <= kRichardsonLevels + 1; ++l) checkpoints.push_back(start << l);
  for (double x : locations) {
    if (!(x < 0.0)) throw ArgumentError("atom_masses_christoffel: atoms of these families are negative");
    const double w = std::sqrt(-x);
    const std::vector<double> sums = christoffel_partial_sums(p, x, checkpoints);
    const std::vector<double> lo(sums.begin(), sums.end() - 1);
    const std::vector<double> hi(sums.begin() + 1, sums.end());
    const double m_lo = 1.0 / richardson(lo, 2.0 * w);
    const double m_hi = 1.0 / richardson(hi, 2.0 * w);
    if (!(std::abs(m_lo - m_hi) <= kDoublingTolerance * std::abs(m_hi))) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "Christoffel mass at x = " << x << " not converged: " << m_lo << " vs " << m_hi;
      throw ConvergenceError(msg.str());
    }
    masses.push_back(m_hi);
  }
  return masses;
}

}  // namespace cdh
