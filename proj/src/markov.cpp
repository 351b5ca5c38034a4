#include "cdh/markov.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <memory>
#include <ostream>
#include <sstream>

#include <omp.h>

#include "cdh/errors.hpp"

namespace cdh {

namespace {

constexpr double kTimeTolerance = 1e-12;

void check_times(const ProcessParams& pp, std::span<const double> times) {
  if (times.empty()) throw ArgumentError("time grid is empty");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw ArgumentError("times must be strictly increasing");
  }
  if (times[0] < pp.tau() - kTimeTolerance) {
    std::ostringstream msg;
    msg << "first time " << times[0] << " precedes tau = " << pp.tau();
    throw ArgumentError(msg.str());
  }
}

// Sampler of the law at times[0]; null when it is the deterministic start.
std::unique_ptr<MeasureSampler> initial_sampler(const ProcessParams& pp, double t0) {
  if (std::abs(t0 - pp.tau()) <= kTimeTolerance) return nullptr;
  return std::make_unique<MeasureSampler>(marginal_law(pp, t0));
}

Trajectory run_chain(const ProcessParams& pp, std::span<const double> times, const MeasureSampler* first,
                     SeededStream& rng) {
  Trajectory traj;
  traj.times.assign(times.begin(), times.end());
  traj.states.reserve(times.size());
  double x = first ? first->sample(rng) : pp.start_location();
  traj.states.push_back(x);
  for (std::size_t i = 1; i < times.size(); ++i) {
    const MixedMeasure k = transition_kernel(pp.C(), times[i - 1], times[i], x);
    x = sample_measure(k, rng);
    traj.states.push_back(x);
  }
  return traj;
}

}  // namespace

int thread_cap() {
  const int available = omp_get_max_threads();
  if (const char* env = std::getenv("CDH_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, available));
  }
  return available;
}

Trajectory sample_trajectory(const ProcessParams& pp, std::span<const double> times, SeededStream& rng) {
  check_times(pp, times);
  const auto first = initial_sampler(pp, times[0]);
  return run_chain(pp, times, first.get(), rng);
}

std::vector<Trajectory> sample_ensemble(const ProcessParams& pp, std::span<const double> times,
                                        std::size_t replicates, std::uint64_t seed, Execution mode) {
  check_times(pp, times);
  const auto first = initial_sampler(pp, times[0]);
  std::vector<Trajectory> out(replicates);
  if (mode == Execution::Serial) {
    for (std::size_t r = 0; r < replicates; ++r) {
      SeededStream rng(seed, r);
      out[r] = run_chain(pp, times, first.get(), rng);
    }
    return out;
  }
  std::exception_ptr failure;
  const long n = static_cast<long>(replicates);
#pragma omp parallel for schedule(dynamic, 64) num_threads(thread_cap())
  for (long r = 0; r < n; ++r) {
    try {
      SeededStream rng(seed, static_cast<std::uint64_t>(r));
      out[r] = run_chain(pp, times, first.get(), rng);
    } catch (...) {
#pragma omp critical(cdh_ensemble_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

double conditional_mean_exact(double C, double s, double t, double x) {
  if (t < s) throw ArgumentError("conditional_mean_exact needs s <= t");
  if (!state_space_contains(C, s, x)) throw ArgumentError("conditional_mean_exact: x is not in E_s");
  return x + 2.0 * C * (t - s) - (t * t - s * s);
}

Trajectory standard_form_transform(const ProcessParams& pp, const Trajectory& traj) {
  const double sigma = std::sqrt(pp.ac_bc_product());
  const double lin = pp.sum_ab() + 2.0 * pp.C();
  Trajectory out;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    double t = 2.0 * (traj.times[i] - pp.tau());
    if (t < -kTimeTolerance) {
      std::ostringstream msg;
      msg << "time " << traj.times[i] << " precedes tau = " << pp.tau() << " and has no standard-clock image";
      throw ArgumentError(msg.str());
    }
    t = std::max(t, 0.0);
    out.times.push_back(t);
    out.states.push_back((traj.states[i] + (t * t - 2.0 * lin * t + pp.diff_ab_sq()) / 4.0) / sigma);
  }
  return out;
}

MomentStats empirical_moments(const std::vector<Trajectory>& ensemble) {
  if (ensemble.empty()) throw ArgumentError("empirical_moments: empty ensemble");
  MomentStats st;
  st.times = ensemble.front().times;
  const std::size_t m = st.times.size();
  const std::size_t n = ensemble.size();
  for (const Trajectory& tr : ensemble) {
    if (tr.times != st.times || tr.states.size() != m) {
      throw ArgumentError("empirical_moments: trajectories are on different time grids");
    }
  }
  st.replicates = n;
  const double dn = static_cast<double>(n);
  const double dof = n > 1 ? dn - 1.0 : 1.0;

  st.mean.assign(m, 0.0);
  for (const Trajectory& tr : ensemble) {
    for (std::size_t i = 0; i < m; ++i) st.mean[i] += tr.states[i];
  }
  for (double& v : st.mean) v /= dn;

  st.variance.assign(m, 0.0);
  std::vector<double> m4(m, 0.0);
  st.product_mean.assign(m * m, 0.0);
  st.covariance.assign(m * m, 0.0);
  std::vector<double> prod_sq(m * m, 0.0), cov_sq(m * m, 0.0);
  for (const Trajectory& tr : ensemble) {
    for (std::size_t i = 0; i < m; ++i) {
      const double di = tr.states[i] - st.mean[i];
      st.variance[i] += di * di;
      m4[i] += di * di * di * di;
      for (std::size_t j = 0; j < m; ++j) {
        const double dj = tr.states[j] - st.mean[j];
        const double p = tr.states[i] * tr.states[j];
        st.product_mean[i * m + j] += p;
        prod_sq[i * m + j] += p * p;
        st.covariance[i * m + j] += di * dj;
        cov_sq[i * m + j] += di * dj * di * dj;
      }
    }
  }
  st.mean_se.resize(m);
  st.variance_se.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double biased = st.variance[i] / dn;
    st.variance[i] /= dof;
    st.mean_se[i] = std::sqrt(st.variance[i] / dn);
    st.variance_se[i] = std::sqrt(std::max(0.0, m4[i] / dn - biased * biased) / dn);
  }
  st.product_se.resize(m * m);
  st.covariance_se.resize(m * m);
  for (std::size_t k = 0; k < m * m; ++k) {
    const double pm = st.product_mean[k] / dn;
    st.product_mean[k] = pm;
    st.product_se[k] = std::sqrt(std::max(0.0, prod_sq[k] / dn - pm * pm) / dn);
    const double cm = st.covariance[k] / dn;
    st.covariance[k] /= dof;
    st.covariance_se[k] = std::sqrt(std::max(0.0, cov_sq[k] / dn - cm * cm) / dn);
  }
  return st;
}

void write_trajectory_csv(std::ostream& out, const std::vector<Trajectory>& ensemble) {
  out << "replicate,time,state\n";
  char buf[96];
  for (std::size_t r = 0; r < ensemble.size(); ++r) {
    const Trajectory& tr = ensemble[r];
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", r, tr.times[i], tr.states[i]);
      out << buf;
    }
  }
}

}  // namespace cdh
