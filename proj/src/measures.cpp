#include "cdh/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cdh/errors.hpp"
#include "cdh/quadrature.hpp"

namespace cdh {

namespace {

const double kLog4Pi = std::log(4.0 * std::numbers::pi);

// How far below the peak (in log units) the density support is cut.
constexpr double kLogCutoff = 40.0;

double sq(double v) { return v * v; }

// Distance from a to the nearest pole of Gamma, capped at 1 and floored at
// 1e-6 (at a pole the density stays smooth: |Gamma(2iu)|^-2 cancels it).
double pole_scale(double a) {
  const double d = a > 0.0 ? a : std::abs(a - std::round(a));
  return std::clamp(d, 1e-6, 1.0);
}

ContinuousPart cdh_continuous_part(const CdhParams& p) {
  ContinuousPart c;
  const double alpha = p.alpha();
  c.gamma_args = {Complex(alpha, 0.0), p.beta(), p.gamma()};
  // Gamma(alpha+beta) Gamma(alpha+gamma) Gamma(beta+gamma)
  double log_norm = 0.0;
  if (p.is_conjugate()) {
    const auto& pair = std::get<ConjugatePair>(p.pair());
    log_norm = log_abs_gamma_sq(alpha + pair.re, pair.im) + log_abs_gamma(2.0 * pair.re);
    if (is_gamma_pole(2.0 * pair.re)) throw PoleError("density normalizer: Gamma(beta+gamma) at a pole");
  } else {
    const auto& pair = std::get<TwoReals>(p.pair());
    const double args[] = {alpha + pair.beta, alpha + pair.gamma, pair.beta + pair.gamma};
    const GammaProduct g = gamma_product(args);
    if (g.sign < 0) throw DomainError("density normalizer is negative");
    log_norm = g.log_abs;
  }
  c.log_normalizer = kLog4Pi + log_norm;
  c.family = p;
  return c;
}

std::vector<double> negative_parameter_atoms(const CdhParams& p) {
  std::vector<double> locs;
  for (double a : p.real_parameters()) {
    for (int k = 0; a + k < 0.0; ++k) locs.push_back(-sq(a + k));
  }
  std::sort(locs.begin(), locs.end());
  locs.erase(std::unique(locs.begin(), locs.end()), locs.end());
  return locs;
}

std::vector<Atom> christoffel_atoms(const CdhParams& p, const std::vector<double>& locs) {
  const std::vector<double> masses = atom_masses_christoffel(p, locs);
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < locs.size(); ++i) atoms.push_back({locs[i], masses[i]});
  return atoms;
}

// The classified orthogonality measure of a CDH family.
MixedMeasure measure_for_family(const CdhParams& p) {
  const FavardClass cls = favard_classify(p);
  if (const auto* bad = std::get_if<NotOrthogonal>(&cls)) {
    std::ostringstream msg;
    msg << "parameters admit no positive orthogonality measure (product sign fails at j = "
        << bad->first_bad_index << ")";
    throw DomainError(msg.str());
  }
  if (const auto* fin = std::get_if<FiniteAtoms>(&cls)) {
    if (fin->count == 1) return MixedMeasure::degenerate(p.diagonal(0));
    const QuadratureRule rule = golub_welsch(p, fin->count);
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) atoms.push_back({rule.nodes[i], rule.weights[i]});
    return MixedMeasure::finite_atomic(std::move(atoms));
  }
  return MixedMeasure::mixed(cdh_continuous_part(p), christoffel_atoms(p, negative_parameter_atoms(p)),
                             true);
}

// Sum of principal log Gamma over numerator minus denominator arguments.
Complex log_gamma_ratio(std::initializer_list<Complex> num, std::initializer_list<Complex> den) {
  Complex acc = 0.0;
  for (const Complex& z : num) acc += log_gamma_complex(z);
  for (const Complex& z : den) acc -= log_gamma_complex(z);
  return acc;
}

bool factor_vanishes(Complex v, double scale) {
  return std::abs(v) <= 1e-12 * std::max(1.0, scale);
}

// (a)_k in complex arithmetic; nullopt when a factor vanishes.
std::optional<Complex> pochhammer_c(Complex a, int k) {
  Complex v = 1.0;
  for (int j = 0; j < k; ++j) {
    const Complex f = a + static_cast<double>(j);
    if (factor_vanishes(f, std::abs(a) + j)) return std::nullopt;
    v *= f;
  }
  return v;
}

double factorial(int k) {
  double v = 1.0;
  for (int j = 2; j <= k; ++j) v *= j;
  return v;
}

ContinuousPart marginal_continuous_part(const ProcessParams& pp, double t) {
  return cdh_continuous_part(marginal_family(pp, t));
}

// Lower-incomplete integral of the density in u over [0, u_max].
double integrate_u(const ContinuousPart& c, double u_max) {
  using boost::math::quadrature::gauss_kronrod;
  const std::vector<double> bps = c.u_breakpoints();
  const auto f = [&c](double u) { return u > 0.0 ? std::exp(c.log_density_u(u)) : 0.0; };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < bps.size() && bps[i] < u_max; ++i) {
    const double hi = std::min(bps[i + 1], u_max);
    total += gauss_kronrod<double, 31>::integrate(f, bps[i], hi, 10, 1e-11);
  }
  return total;
}

}  // namespace

// --- State space ----------------------------------------------------------

std::vector<double> state_space_atoms(double C, double s) {
  std::vector<double> atoms;
  for (int n = 0; n < s - C; ++n) atoms.push_back(-sq(C - s + n));
  return atoms;
}

bool state_space_contains(double C, double s, double x) {
  if (s <= C) return x >= -sq(C - s) - kAtomTolerance;
  if (x >= -kAtomTolerance) return true;
  for (double a : state_space_atoms(C, s)) {
    if (std::abs(x - a) <= kAtomTolerance) return true;
  }
  return false;
}

// --- ContinuousPart -------------------------------------------------------

double ContinuousPart::log_density(double x) const {
  if (!(x > 0.0)) throw DomainError("density is defined for x > 0 only");
  const double u = std::sqrt(x);
  double acc = -log_normalizer - 0.5 * std::log(x) - log_abs_gamma_sq_imaginary(2.0 * u);
  for (const Complex& e : gamma_args) acc += log_abs_gamma_sq(e.real(), e.imag() + u);
  return acc;
}

double ContinuousPart::log_density_u(double u) const {
  return std::log(2.0 * u) + log_density(u * u);
}

ContinuousPart::PanelLayout ContinuousPart::panel_layout() const {
  std::vector<double> pts{0.0};
  double far = 1.0;
  for (const Complex& e : gamma_args) {
    const double center = -e.imag();
    if (center < 0.0) continue;
    far = std::max(far, center + 1.0);
    const double h = pole_scale(e.real());
    if (center > 0.0) pts.push_back(center);
    for (double d = h / 4.0; d < 1.0; d *= 2.0) {
      if (center - d > 0.0) pts.push_back(center - d);
      pts.push_back(center + d);
    }
  }
  const int n_far = static_cast<int>(std::ceil(far));
  for (int k = 1; k <= n_far; ++k) pts.push_back(k);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, b); }),
            pts.end());

  std::vector<double> logs(pts.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    logs[i] = pts[i] > 0.0 ? log_density_u(pts[i]) : -std::numeric_limits<double>::infinity();
    peak = std::max(peak, logs[i]);
  }
  // Extend to the right until the tail is negligible; panels widen once the
  // density is far enough below its peak that their share of mass is tiny.
  double u = pts.back();
  for (int guard = 0; guard < 100000; ++guard) {
    const double depth = peak - logs.back();
    if (depth > kLogCutoff) break;
    u += depth < 8.0 ? 1.0 : (depth < 20.0 ? 2.0 : 4.0);
    pts.push_back(u);
    logs.push_back(log_density_u(u));
    peak = std::max(peak, logs.back());
  }
  // Merge runs of panels on which the density is negligible.
  PanelLayout out;
  out.peak_log = peak;
  out.points.push_back(pts.front());
  const double floor = peak - kLogCutoff - 5.0;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    if (logs[i - 1] < floor && logs[i] < floor && logs[i + 1] < floor) continue;
    out.points.push_back(pts[i]);
  }
  out.points.push_back(pts.back());
  return out;
}

std::vector<double> ContinuousPart::u_breakpoints() const { return panel_layout().points; }

// --- MixedMeasure ---------------------------------------------------------

std::string to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::Degenerate: return "Degenerate";
    case MeasureKind::FiniteAtomic: return "FiniteAtomic";
    case MeasureKind::Mixed: return "Mixed";
  }
  return "?";
}

MixedMeasure::MixedMeasure(MeasureKind kind, std::vector<Atom> atoms, std::optional<ContinuousPart> c,
                           bool normalized)
    : kind_(kind), atoms_(std::move(atoms)), continuous_(std::move(c)), normalized_(normalized) {
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.location < b.location; });
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (!(atoms_[i].mass > 0.0)) {
      std::ostringstream msg;
      msg << "atom at " << atoms_[i].location << " has non-positive mass " << atoms_[i].mass;
      throw DomainError(msg.str());
    }
    if (i > 0 && !(atoms_[i].location > atoms_[i - 1].location)) {
      throw DomainError("atom locations must be distinct");
    }
  }
}

MixedMeasure MixedMeasure::degenerate(double point) {
  return MixedMeasure(MeasureKind::Degenerate, {{point, 1.0}}, std::nullopt, true);
}

MixedMeasure MixedMeasure::finite_atomic(std::vector<Atom> atoms) {
  if (atoms.empty()) throw ArgumentError("finite_atomic: no atoms");
  return MixedMeasure(MeasureKind::FiniteAtomic, std::move(atoms), std::nullopt, true);
}

MixedMeasure MixedMeasure::mixed(ContinuousPart density, std::vector<Atom> atoms, bool normalized) {
  return MixedMeasure(MeasureKind::Mixed, std::move(atoms), std::move(density), normalized);
}

double MixedMeasure::atom_mass() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.mass;
  return s;
}

double MixedMeasure::point() const {
  if (kind_ != MeasureKind::Degenerate) throw DomainError("point(): measure is not degenerate");
  return atoms_.front().location;
}

// --- Constructions --------------------------------------------------------

MixedMeasure transition_kernel(double C, double s, double t, double x) {
  if (!(s < t)) {
    std::ostringstream msg;
    msg << "transition_kernel needs s < t, got s = " << s << ", t = " << t;
    throw ArgumentError(msg.str());
  }
  const double parabola = -sq(C - t);
  if (!state_space_contains(C, s, x)) return MixedMeasure::degenerate(parabola);
  if (std::abs(x + sq(C - s)) <= kAtomTolerance) return MixedMeasure::degenerate(parabola);
  if (s > C) {
    if (x < 0.0 && x >= -kAtomTolerance) x = 0.0;
    for (double a : state_space_atoms(C, s)) {
      if (std::abs(x - a) <= kAtomTolerance) x = a;
    }
  }
  return measure_for_family(kernel_family(C, s, t, x));
}

MixedMeasure marginal_law(const ProcessParams& pp, double t) {
  const double tau = pp.tau();
  if (t < tau - 1e-12) {
    std::ostringstream msg;
    msg << "marginal_law needs t >= tau = " << tau << ", got t = " << t;
    throw ArgumentError(msg.str());
  }
  if (std::abs(t - tau) <= 1e-12) return MixedMeasure::degenerate(pp.start_location());
  const CdhParams p = marginal_family(pp, t);
  std::vector<Atom> atoms;
  if (auto closed = marginal_atoms_closed_form(pp, t)) {
    atoms = std::move(*closed);
  } else {
    atoms = christoffel_atoms(p, negative_parameter_atoms(p));
  }
  return MixedMeasure::mixed(cdh_continuous_part(p), std::move(atoms), true);
}

std::optional<std::vector<Atom>> marginal_atoms_closed_form(const ProcessParams& pp, double t) {
  const Complex A = pp.A();
  const Complex B = pp.B();
  const double C = pp.C();
  std::vector<Atom> atoms;
  const double scale = std::abs(A) + std::abs(B) + std::abs(C) + std::abs(t);

  if (!pp.is_conjugate() && pp.a_real() + t < 0.0) {
    const double a = pp.a_real() + t;
    const double Ar = pp.a_real();
    const double Br = pp.b_real();
    const double log_g = log_abs_gamma(-Ar + C - 2.0 * t) + log_abs_gamma(Br - Ar) -
                         log_abs_gamma(-2.0 * a) - log_abs_gamma(Br + C);
    for (int k = 0; a + k < 0.0; ++k) {
      const auto d1 = pochhammer_c(Ar - C + 2.0 * t + 1.0, k);
      const auto d2 = pochhammer_c(Ar - Br + 1.0, k);
      if (!d1 || !d2 || factor_vanishes(a, scale)) return std::nullopt;
      const double num = (a + k) * pochhammer(Ar + C, k) * pochhammer(2.0 * a, k) *
                         pochhammer(Ar + Br + 2.0 * t, k);
      const double den = factorial(k) * a * d1->real() * d2->real();
      const double mass = std::exp(log_g) * num / den * (k % 2 ? -1.0 : 1.0);
      atoms.push_back({-sq(a + k), mass});
    }
  }
  if (t > C) {
    const double c = C - t;
    const Complex log_g = log_gamma_ratio({A - C + 2.0 * t, B - C + 2.0 * t},
                                          {Complex(2.0 * (t - C)), A + B + 2.0 * t});
    for (int k = 0; c + k < 0.0; ++k) {
      const auto d1 = pochhammer_c(-A + C - 2.0 * t + 1.0, k);
      const auto d2 = pochhammer_c(-B + C - 2.0 * t + 1.0, k);
      if (!d1 || !d2) return std::nullopt;
      const Complex num = (c + k) * *pochhammer_c(A + C, k) * *pochhammer_c(B + C, k) *
                          pochhammer(2.0 * c, k);
      const Complex den = factorial(k) * c * *d1 * *d2;
      const Complex mass = std::exp(log_g) * num / den * (k % 2 ? -1.0 : 1.0);
      atoms.push_back({-sq(c + k), mass.real()});
    }
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.location < y.location; });
  return atoms;
}

MixedMeasure entrance_law(double A, double C, double t) {
  if (!(A + C > 0.0)) {
    std::ostringstream msg;
    msg << "entrance_law needs A + C > 0, got " << A + C;
    throw ArgumentError(msg.str());
  }
  ContinuousPart cont;
  cont.gamma_args = {Complex(C - t, 0.0), Complex(A + t, 0.0)};
  cont.log_normalizer = kLog4Pi;

  std::vector<Atom> atoms;
  const double a = A + t;
  if (a < 0.0) {
    const double log_g = log_abs_gamma(A + C) + log_abs_gamma(C - A - 2.0 * t) - log_abs_gamma(-2.0 * a);
    for (int j = 0; a + j < 0.0; ++j) {
      const auto d = pochhammer_c(A - C + 2.0 * t + 1.0, j);
      if (!d) throw DomainError("entrance-law atom mass m_j(t) is undefined at these parameters");
      const double v = std::exp(log_g) * (a + j) / (factorial(j) * a) * pochhammer(A + C, j) *
                       pochhammer(2.0 * a, j) / d->real();
      atoms.push_back({-sq(a + j), v});
    }
  }
  const double c = C - t;
  if (c < 0.0) {
    const double log_g = log_abs_gamma(A - C + 2.0 * t) + log_abs_gamma(A + C) - log_abs_gamma(-2.0 * c);
    for (int k = 0; c + k < 0.0; ++k) {
      const auto d = pochhammer_c(-A + C - 2.0 * t + 1.0, k);
      if (!d) throw DomainError("entrance-law atom mass M_k(t) is undefined at these parameters");
      const double v = std::exp(log_g) * (c + k) / (factorial(k) * c) * pochhammer(A + C, k) *
                       pochhammer(2.0 * c, k) / d->real();
      // Location -(C-t+k)^2; see README on the printed -(C-t+k+t)^2.
      atoms.push_back({-sq(c + k), v});
    }
  }
  return MixedMeasure::mixed(std::move(cont), std::move(atoms), false);
}

double density_eval(const MixedMeasure& m, double x) {
  if (!m.continuous()) throw DomainError("measure has no continuous part");
  if (!(x > 0.0)) throw DomainError("density_eval needs x > 0");
  return std::exp(m.continuous()->log_density(x));
}

double continuous_mass(const MixedMeasure& m) {
  if (!m.continuous()) throw DomainError("measure has no continuous part");
  return integrate_u(*m.continuous(), std::numeric_limits<double>::infinity());
}

double continuous_mass_below(const MixedMeasure& m, double x_max) {
  if (!m.continuous()) throw DomainError("measure has no continuous part");
  if (!(x_max > 0.0)) return 0.0;
  return integrate_u(*m.continuous(), std::sqrt(x_max));
}

EntranceComparison entrance_limit_compare(double A, double C, double t, double B, double x) {
  if (B < A) throw ArgumentError("entrance_limit_compare needs B >= A");
  const ProcessParams pp = ProcessParams::real(A, B, C);
  if (!(t > pp.tau())) throw ArgumentError("entrance_limit_compare needs t > -(A+B)/2");
  if (!(x > 0.0)) throw ArgumentError("entrance_limit_compare needs x > 0");
  const ContinuousPart marg = marginal_continuous_part(pp, t);
  const double log_scale = log_abs_gamma(A + C) + log_abs_gamma(B + C) + log_abs_gamma(A + B + 2.0 * t) -
                           2.0 * log_abs_gamma(B + t);
  const MixedMeasure ent = entrance_law(A, C, t);
  return {std::exp(marg.log_density(x) + log_scale), density_eval(ent, x)};
}

nlohmann::json measure_to_json(const MixedMeasure& m) {
  nlohmann::json j;
  j["kind"] = to_string(m.kind());
  if (const auto& c = m.continuous()) {
    nlohmann::json dp;
    dp["alpha"] = c->gamma_args.at(0).real();
    dp["beta_re"] = c->gamma_args.at(1).real();
    dp["beta_im"] = c->gamma_args.at(1).imag();
    if (c->gamma_args.size() > 2) {
      dp["gamma_re"] = c->gamma_args[2].real();
      dp["gamma_im"] = c->gamma_args[2].imag();
    } else {
      dp["gamma_re"] = nullptr;
      dp["gamma_im"] = nullptr;
    }
    j["density_params"] = dp;
    j["log_normalizer"] = c->log_normalizer;
  } else {
    j["density_params"] = nullptr;
    j["log_normalizer"] = nullptr;
  }
  j["atoms"] = nlohmann::json::array();
  for (const Atom& a : m.atoms()) j["atoms"].push_back({{"location", a.location}, {"mass", a.mass}});
  if (m.kind() == MeasureKind::Degenerate) j["point"] = m.point();
  j["normalized"] = m.normalized();
  return j;
}

}  // namespace cdh
