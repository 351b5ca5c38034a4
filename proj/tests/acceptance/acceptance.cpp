// One PASS/FAIL line per acceptance criterion. A criterion passes when its
// checks succeed and it finishes within its runtime budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cdh/markov.hpp"
#include "cdh/measures.hpp"
#include "cdh/verification.hpp"
#include "cdh/weyl.hpp"

using namespace cdh;
using nlohmann::json;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

json grid;

std::vector<VerificationReport> suite(const std::string& name) {
  VerifyOptions o;
  return run_suite(name, grid, o);
}

double worst(const std::vector<VerificationReport>& rs, const std::string& check) {
  double w = 0.0;
  for (const auto& r : rs)
    if (r.check == check) w = std::max(w, r.residual);
  return w;
}

std::size_t count(const std::vector<VerificationReport>& rs, const std::string& check) {
  std::size_t n = 0;
  for (const auto& r : rs) n += r.check == check;
  return n;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome orthogonality() {
  auto rs = suite("orthogonality");
  std::size_t real = 0, conj = 0;
  for (const auto& r : rs) (r.params.contains("pair_re") ? conj : real)++;
  bool ok = all_pass(rs) && rs.size() >= 12 && real > 0 && conj > 0;
  return {ok, fmt("%zu sets (%zu real, %zu conjugate), worst residual %.2e < 1e-9", rs.size(), real, conj,
                  worst(rs, "orthogonality"))};
}

Outcome chapman() {
  auto rs = suite("chapman");
  std::size_t finite = 0, boundary = 0, outside = 0;
  for (const auto& r : rs) {
    double C = r.params["C"], s = r.params["s"], x = r.params["x"];
    if (!state_space_contains(C, s, x)) ++outside;
    else if (std::abs(x + (C - s) * (C - s)) < 1e-12) ++boundary;
    else if (s > C && x < 0) ++finite;
  }
  bool ok = all_pass(rs) && rs.size() >= 20 && finite > 0 && boundary > 0 && outside > 0;
  return {ok, fmt("%zu tuples (finite-atomic %zu, boundary %zu, outside E_s %zu), worst residual %.2e < 1e-8",
                  rs.size(), finite, boundary, outside, worst(rs, "chapman"))};
}

Outcome marginal_evolution() {
  auto rs = suite("marginal-evolution");
  std::size_t at_tau = 0;
  for (const auto& r : rs) at_tau += r.params.value("s_is_tau", false);
  bool ok = all_pass(rs) && rs.size() >= 10 && at_tau > 0;
  return {ok, fmt("%zu tuples (%zu with s = tau), worst residual %.2e < 1e-8", rs.size(), at_tau,
                  worst(rs, "marginal-evolution"))};
}

Outcome martingale() {
  auto rs = suite("martingale");
  std::size_t plain = count(rs, "martingale"), rejected = count(rs, "martingale-reject");
  bool ok = all_pass(rs) && plain > 0 && rejected > 0;
  return {ok, fmt("%zu points, worst residual %.2e < 1e-8; %zu off-E_s points rejected", plain,
                  worst(rs, "martingale"), rejected)};
}

Outcome normalization() {
  auto rs = suite("normalization");
  std::size_t masses = count(rs, "normalization"), atoms = count(rs, "christoffel-atoms");
  bool ok = all_pass(rs) && masses > 0 && atoms > 0;
  return {ok, fmt("%zu marginals, worst |mass - 1| %.2e < 1e-6; %zu atom sets, worst relative gap %.2e < 1e-8",
                  masses, worst(rs, "normalization"), atoms, worst(rs, "christoffel-atoms"))};
}

Outcome entrance_limit() {
  auto rs = suite("entrance-limit");
  bool ok = all_pass(rs) && rs.size() >= 27;
  return {ok, fmt("%zu (A, C, t, x) points x 3 values of B, worst violation %.2e", rs.size(),
                  worst(rs, "entrance-limit"))};
}

Outcome commutator() {
  bool symbolic = verify_commutator_symbolic();
  auto rs = suite("commutator");
  bool ok = symbolic && all_pass(rs) && rs.size() >= 100 && worst(rs, "commutator") == 0.0;
  return {ok, fmt("symbolic identity %s; %zu random rational triples, K = %d, max interior entry %g",
                  symbolic ? "zero" : "NONZERO", rs.size(), grid["commutator"].value("K", 16),
                  worst(rs, "commutator"))};
}

Outcome qvar() {
  auto rs = suite("qvar-matrix");
  bool ok = all_pass(rs) && rs.size() >= 50 && worst(rs, "qvar-matrix") == 0.0;
  return {ok, fmt("%zu random tuples, K = %d, max interior entry (identity and linearity) %g", rs.size(),
                  grid["qvar_matrix"].value("K", 14), worst(rs, "qvar-matrix"))};
}

Outcome monte_carlo() {
  auto pp = ProcessParams::real(1, 1, 2);
  // X-clock 2(T - tau) with tau = -1.
  const std::vector<double> x_times{0.5, 1.0, 2.0, 4.0};
  std::vector<double> t_times;
  for (double s : x_times) t_times.push_back(s / 2 + pp.tau());
  const std::size_t n = 100000;
  auto ens = sample_ensemble(pp, t_times, n, 20240611);

  std::vector<Trajectory> xs;
  xs.reserve(n);
  for (const auto& tr : ens) xs.push_back(standard_form_transform(pp, tr));
  auto sx = empirical_moments(xs);
  auto st = empirical_moments(ens);

  double worst_z = 0.0;
  for (std::size_t i = 0; i < x_times.size(); ++i) {
    worst_z = std::max(worst_z, std::abs(sx.mean[i]) / sx.mean_se[i]);
    for (std::size_t j = 0; j < x_times.size(); ++j) {
      double want = std::min(x_times[i], x_times[j]);
      worst_z = std::max(worst_z, std::abs(sx.product(i, j) - want) / sx.product_error(i, j));
    }
  }
  double worst_var_z = 0.0;
  for (std::size_t i = 0; i < t_times.size(); ++i) {
    double shift = t_times[i] + 0.5 * pp.sum_ab();
    double want = 2 * shift * pp.ac_bc_product();
    worst_var_z = std::max(worst_var_z, std::abs(st.variance[i] - want) / st.variance_se[i]);
  }
  bool ok = worst_z <= 3.0 && worst_var_z <= 3.0;
  return {ok, fmt("%zu replicates; E[X_t], E[X_s X_t] worst |z| = %.2f; Var[T] worst |z| = %.2f (limit 3)", n,
                  worst_z, worst_var_z)};
}

Outcome determinacy() {
  auto rs = suite("determinacy");
  bool ok = all_pass(rs) && rs.size() >= 3;
  return {ok, fmt("%zu values of alpha, worst |slope - (2 alpha - 1)| = %.4f < 0.1", rs.size(),
                  worst(rs, "determinacy"))};
}

}  // namespace

int main() {
  grid = load_grid("default");
  const std::vector<Criterion> criteria = {
      {1, "orthogonality", 5, orthogonality},
      {2, "Chapman-Kolmogorov", 30, chapman},
      {3, "marginal evolution", 20, marginal_evolution},
      {4, "martingale polynomials", 10, martingale},
      {5, "normalization and atom masses", 30, normalization},
      {6, "entrance-law limit", 10, entrance_limit},
      {7, "commutator", 10, commutator},
      {8, "quadratic-variance matrix identity", 20, qvar},
      {9, "Monte Carlo moments", 60, monte_carlo},
      {10, "determinacy diagnostic", 10, determinacy},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs < c.budget_s;
    bool pass = o.ok && in_time;
    failed += !pass;
    std::printf("%s  [%2d] %s: %s; runtime %.2f s (budget %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", EXCEEDED");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
