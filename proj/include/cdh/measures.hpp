#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cdh/polynomials.hpp"
#include "cdh/process_params.hpp"
#include "cdh/special_functions.hpp"

namespace cdh {

// --- State space E_s ------------------------------------------------------

inline constexpr double kAtomTolerance = 1e-9;

/// E_s = [-(C-s)^2, inf) for s <= C, and {-(C-s+N)^2 : 0 <= N < s-C} u [0, inf)
/// for s > C. Atom membership uses absolute tolerance kAtomTolerance.
bool state_space_contains(double C, double s, double x);

/// The negative atoms of E_s in ascending order (empty for s <= C).
std::vector<double> state_space_atoms(double C, double s);

// --- Measures -------------------------------------------------------------

struct Atom {
  double location;
  double mass;
};

/// Density on (0, inf) of the form
///   prod_j |Gamma(e_j + i sqrt(x))|^2 / (sqrt(x) |Gamma(2 i sqrt(x))|^2) * exp(-log_normalizer).
/// Three factors for a CDH measure, two for an entrance law.
struct ContinuousPart {
  std::vector<Complex> gamma_args;
  double log_normalizer = 0.0;
  /// The orthogonal family, when the measure is a CDH orthogonality measure.
  std::optional<CdhParams> family;

  double log_density(double x) const;
  /// The same density in u = sqrt(x): 2u w(u^2).
  double log_density_u(double u) const;
  struct PanelLayout {
    std::vector<double> points;  // panel breakpoints in u, starting at 0
    double peak_log;             // largest log_density_u seen at a breakpoint
  };

  /// Panel breakpoints in u: graded towards near-singular points and
  /// extended until the density is 40 log units below its peak.
  PanelLayout panel_layout() const;
  std::vector<double> u_breakpoints() const;
};

enum class MeasureKind { Degenerate, FiniteAtomic, Mixed };

std::string to_string(MeasureKind kind);

class MixedMeasure {
 public:
  static MixedMeasure degenerate(double point);
  /// Atoms are sorted; all masses must be positive.
  static MixedMeasure finite_atomic(std::vector<Atom> atoms);
  static MixedMeasure mixed(ContinuousPart density, std::vector<Atom> atoms, bool normalized);

  MeasureKind kind() const { return kind_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::optional<ContinuousPart>& continuous() const { return continuous_; }
  bool normalized() const { return normalized_; }
  double atom_mass() const;
  /// Location of a Degenerate measure.
  double point() const;

 private:
  MixedMeasure(MeasureKind kind, std::vector<Atom> atoms, std::optional<ContinuousPart> c,
               bool normalized);

  MeasureKind kind_;
  std::vector<Atom> atoms_;
  std::optional<ContinuousPart> continuous_;
  bool normalized_;
};

/// Transition probability p_{s,t}(x, dy). Throws ArgumentError unless s < t.
MixedMeasure transition_kernel(double C, double s, double t, double x);

/// Marginal law of T_t. Throws ArgumentError for t < tau.
MixedMeasure marginal_law(const ProcessParams& pp, double t);

/// Sigma-finite entrance law; normalized() is false.
MixedMeasure entrance_law(double A, double C, double t);

/// Pointwise density of the continuous part. DomainError for x <= 0 or a
/// measure without density.
double density_eval(const MixedMeasure& m, double x);

/// Integral of the density over (0, inf) by adaptive Gauss-Kronrod on the
/// panels of u_breakpoints(). DomainError without a continuous part.
double continuous_mass(const MixedMeasure& m);

/// Integral of the density over (0, x_max].
double continuous_mass_below(const MixedMeasure& m, double x_max);

/// Closed-form marginal atoms; std::nullopt where a Pochhammer denominator
/// vanishes and the formula is undefined.
std::optional<std::vector<Atom>> marginal_atoms_closed_form(const ProcessParams& pp, double t);

/// Atom masses 1 / sum_n ptilde_n(x_j)^2. Finite sums for finitely supported
/// families; otherwise Richardson-extrapolated partial sums at truncation,
/// 2*truncation, ..., checked by doubling. ConvergenceError when the doubled
/// estimate differs by more than 1e-8 (relative).
std::vector<double> atom_masses_christoffel(const CdhParams& p, const std::vector<double>& locations,
                                            int truncation = 64);

struct EntranceComparison {
  double scaled_marginal;
  double entrance;
};

/// Marginal density of (A, B, C) at time t, multiplied by
/// Gamma(A+C) Gamma(B+C) Gamma(A+B+2t) / Gamma(B+t)^2, next to the entrance
/// density of (A, C) at the same point.
EntranceComparison entrance_limit_compare(double A, double C, double t, double B, double x);

/// {kind, density_params, log_normalizer, atoms, normalized}, plus `point`
/// for a Degenerate measure.
nlohmann::json measure_to_json(const MixedMeasure& m);

}  // namespace cdh
