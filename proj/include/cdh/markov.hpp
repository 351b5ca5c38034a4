#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "cdh/measures.hpp"
#include "cdh/process_params.hpp"

namespace cdh {

/// Reproducible uniform stream keyed by (seed, stream_id). Every replicate
/// of an ensemble owns one, so results do not depend on scheduling.
class SeededStream {
 public:
  SeededStream(std::uint64_t seed, std::uint64_t stream_id);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// Inverse-CDF sampler. Atoms take consecutive half-open slices of [0, 1) in
/// ascending order; the rest maps to the continuous part through a
/// piecewise Chebyshev model of its CDF in u = sqrt(x).
class MeasureSampler {
 public:
  /// NotNormalized for entrance laws.
  explicit MeasureSampler(const MixedMeasure& m);

  double quantile(double v) const;
  double sample(SeededStream& rng) const { return quantile(rng.uniform()); }

  /// Model of the continuous CDF, normalized to the continuous mass.
  double continuous_cdf(double x) const;

  struct Panel {
    double lo = 0.0;
    double hi = 0.0;
    double cum_before = 0.0;
    double mass = 0.0;
    std::vector<double> density;   // Chebyshev coefficients on [lo, hi]
    std::vector<double> integral;  // of the antiderivative, zero at lo
  };

  /// Degree-10 Chebyshev model of exp(log_density_u - log_scale) on [lo, hi].
  static Panel build_panel(const ContinuousPart& c, double lo, double hi, double log_scale);
  /// u^2 where the panel's antiderivative reaches `target`.
  static double invert_panel(const Panel& p, double target);

 private:
  double invert_continuous(double r) const;

  std::vector<Atom> atoms_;
  std::vector<double> atom_cdf_;
  double atom_total_ = 0.0;
  std::vector<Panel> panels_;
  double panel_total_ = 0.0;
};

/// One draw from a single uniform. Builds only the panels below the drawn
/// quantile, so it is cheaper than a MeasureSampler for one-off kernels.
double sample_measure(const MixedMeasure& m, SeededStream& rng);

struct Trajectory {
  std::vector<double> times;
  std::vector<double> states;
};

/// First state from the marginal at times[0], then kernel steps.
/// ArgumentError on unordered times or times[0] < tau.
Trajectory sample_trajectory(const ProcessParams& pp, std::span<const double> times, SeededStream& rng);

enum class Execution { Serial, Parallel };

/// Replicate r uses SeededStream(seed, r); Serial and Parallel agree bitwise.
std::vector<Trajectory> sample_ensemble(const ProcessParams& pp, std::span<const double> times,
                                        std::size_t replicates, std::uint64_t seed,
                                        Execution mode = Execution::Parallel);

/// E[T_t | T_s = x] = x + 2C(t-s) - (t^2 - s^2). ArgumentError for t < s or
/// x outside E_s.
double conditional_mean_exact(double C, double s, double t, double x);

/// Standard form on the clock r = 2(t - tau):
///   X_r = (T_t + (r^2 - 2(A + B + 2C) r + (A - B)^2) / 4) / sqrt((A+C)(B+C)).
/// ArgumentError for times before tau.
Trajectory standard_form_transform(const ProcessParams& pp, const Trajectory& traj);

struct MomentStats {
  std::size_t replicates = 0;
  std::vector<double> times;
  std::vector<double> mean, mean_se;
  std::vector<double> variance, variance_se;
  /// Row-major (i, j) over the time grid: E[Z_i Z_j] (raw second moments),
  /// sample covariance, and standard errors of each.
  std::vector<double> product_mean, product_se;
  std::vector<double> covariance, covariance_se;

  double product(std::size_t i, std::size_t j) const { return product_mean[i * times.size() + j]; }
  double product_error(std::size_t i, std::size_t j) const { return product_se[i * times.size() + j]; }
  double cov(std::size_t i, std::size_t j) const { return covariance[i * times.size() + j]; }
  double cov_error(std::size_t i, std::size_t j) const { return covariance_se[i * times.size() + j]; }
};

/// ArgumentError when the ensemble is empty or time grids differ.
MomentStats empirical_moments(const std::vector<Trajectory>& ensemble);

/// `replicate,time,state` with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const std::vector<Trajectory>& ensemble);

/// Threads allowed by CDH_THREADS (unset or invalid: OpenMP's default).
int thread_cap();

}  // namespace cdh
