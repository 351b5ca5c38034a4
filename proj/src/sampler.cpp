#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "cdh/errors.hpp"
#include "cdh/markov.hpp"

namespace cdh {

namespace {

constexpr int kChebDegree = 10;

// sum_k a_k T_k(x) by Clenshaw.
double chebyshev_eval(const std::vector<double>& a, double x) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = a.size(); k-- > 1;) {
    const double b0 = 2.0 * x * b1 - b2 + a[k];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + a[0];
}

// SplitMix64 finalizer: decorrelates nearby (seed, stream) pairs.
std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SeededStream::SeededStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  engine_.seed(splitmix64(seed ^ splitmix64(stream_id + 0x632be59bd9b4e019ULL)));
}

double SeededStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

MeasureSampler::Panel MeasureSampler::build_panel(const ContinuousPart& c, double lo, double hi,
                                                  double log_scale) {
  constexpr int n_nodes = kChebDegree + 1;
  // cos(k theta_j) for the first-kind nodes theta_j = pi (j + 1/2) / n.
  static const std::array<std::array<double, n_nodes>, n_nodes> cos_table = [] {
    std::array<std::array<double, n_nodes>, n_nodes> t{};
    for (int k = 0; k < n_nodes; ++k) {
      for (int j = 0; j < n_nodes; ++j) t[k][j] = std::cos(k * std::numbers::pi * (j + 0.5) / n_nodes);
    }
    return t;
  }();
  const auto& cos_theta = cos_table[1];
  Panel panel;
  panel.lo = lo;
  panel.hi = hi;
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::array<double, n_nodes> f{};
  for (int j = 0; j < n_nodes; ++j) f[j] = std::exp(c.log_density_u(mid + half * cos_theta[j]) - log_scale);
  panel.density.assign(n_nodes, 0.0);
  for (int k = 0; k < n_nodes; ++k) {
    double s = 0.0;
    for (int j = 0; j < n_nodes; ++j) s += f[j] * cos_table[k][j];
    panel.density[k] = 2.0 * s / n_nodes;
  }
  // Antiderivative: C_k = (c_{k-1} - c_{k+1}) / 2k with the unhalved c_0,
  // then shift so that it vanishes at x = -1.
  panel.integral.assign(n_nodes + 1, 0.0);
  for (int k = 1; k <= n_nodes; ++k) {
    const double prev = panel.density[k - 1];
    const double next = k + 1 < n_nodes ? panel.density[k + 1] : 0.0;
    panel.integral[k] = (prev - next) / (2.0 * k);
  }
  double at_minus_one = 0.0;
  for (int k = 1; k <= n_nodes; ++k) at_minus_one += (k % 2 ? -1.0 : 1.0) * panel.integral[k];
  panel.integral[0] = -at_minus_one;
  panel.density[0] *= 0.5;
  for (double& v : panel.integral) v *= half;
  panel.mass = std::max(0.0, chebyshev_eval(panel.integral, 1.0));
  return panel;
}

MeasureSampler::MeasureSampler(const MixedMeasure& m) : atoms_(m.atoms()) {
  if (!m.normalized()) throw NotNormalized("cannot sample from a measure that is not normalized");
  double cum = 0.0;
  for (const Atom& a : atoms_) {
    cum += a.mass;
    atom_cdf_.push_back(cum);
  }
  atom_total_ = cum;
  if (!m.continuous()) {
    // Purely atomic: renormalize so rounding in the masses cannot leave a gap.
    for (double& c : atom_cdf_) c /= cum;
    atom_cdf_.back() = 1.0;
    atom_total_ = 1.0;
    return;
  }

  const ContinuousPart& c = *m.continuous();
  const ContinuousPart::PanelLayout layout = c.panel_layout();
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < layout.points.size(); ++p) {
    Panel panel = build_panel(c, layout.points[p], layout.points[p + 1], layout.peak_log);
    panel.cum_before = total;
    total += panel.mass;
    panels_.push_back(std::move(panel));
  }
  panel_total_ = total;
  if (!(panel_total_ > 0.0)) throw DomainError("continuous part has no numerical mass");
}

double MeasureSampler::invert_panel(const Panel& p, double target) {
  target = std::clamp(target, 0.0, p.mass);
  const double half = 0.5 * (p.hi - p.lo);
  const double mid = 0.5 * (p.hi + p.lo);
  double lo = -1.0, hi = 1.0;
  double x = p.mass > 0.0 ? -1.0 + 2.0 * target / p.mass : 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    const double g = chebyshev_eval(p.integral, x) - target;
    if (g < 0.0) lo = x; else hi = x;
    const double d = half * chebyshev_eval(p.density, x);
    double next = d > 0.0 ? x - g / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = half * std::abs(next - x);
    x = next;
    if (step <= 1e-12 * std::max(1.0, std::abs(mid + half * x)) || half * (hi - lo) <= 1e-10) break;
  }
  const double u = mid + half * x;
  return u * u;
}

double MeasureSampler::invert_continuous(double r) const {
  auto it = std::upper_bound(panels_.begin(), panels_.end(), r,
                             [](double v, const Panel& p) { return v < p.cum_before; });
  const Panel& p = *std::prev(it == panels_.begin() ? std::next(it) : it);
  return invert_panel(p, r - p.cum_before);
}

double MeasureSampler::quantile(double v) const {
  if (v < atom_total_ || panels_.empty()) {
    const auto it = std::upper_bound(atom_cdf_.begin(), atom_cdf_.end(), v);
    const std::size_t i = std::min<std::size_t>(it - atom_cdf_.begin(), atoms_.size() - 1);
    return atoms_[i].location;
  }
  const double share = 1.0 - atom_total_;
  const double frac = share > 0.0 ? (v - atom_total_) / share : 0.0;
  return invert_continuous(std::clamp(frac, 0.0, 1.0) * panel_total_);
}

double MeasureSampler::continuous_cdf(double x) const {
  if (panels_.empty() || x <= 0.0) return 0.0;
  const double u = std::sqrt(x);
  double acc = 0.0;
  for (const Panel& p : panels_) {
    if (u >= p.hi) {
      acc += p.mass;
      continue;
    }
    if (u > p.lo) {
      const double xi = (2.0 * u - p.lo - p.hi) / (p.hi - p.lo);
      acc += chebyshev_eval(p.integral, xi);
    }
    break;
  }
  return acc / panel_total_;
}

double sample_measure(const MixedMeasure& m, SeededStream& rng) {
  if (m.kind() == MeasureKind::Degenerate) return m.point();
  if (!m.normalized()) throw NotNormalized("cannot sample from a measure that is not normalized");
  if (!m.continuous()) return MeasureSampler(m).sample(rng);

  // One draw: atoms first, then build panels only until the target mass is
  // reached. The continuous mass is 1 - (atom mass) by normalization.
  const double v = rng.uniform();
  double cum = 0.0;
  for (const Atom& a : m.atoms()) {
    cum += a.mass;
    if (v < cum) return a.location;
  }
  const ContinuousPart& c = *m.continuous();
  const ContinuousPart::PanelLayout layout = c.panel_layout();
  const double target = (v - cum) * std::exp(-layout.peak_log);
  double before = 0.0;
  MeasureSampler::Panel last;
  for (std::size_t p = 0; p + 1 < layout.points.size(); ++p) {
    last = MeasureSampler::build_panel(c, layout.points[p], layout.points[p + 1], layout.peak_log);
    if (target < before + last.mass) break;
    before += last.mass;
  }
  return MeasureSampler::invert_panel(last, target - before);
}

}  // namespace cdh
