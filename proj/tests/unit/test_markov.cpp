#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "cdh/errors.hpp"
#include "cdh/markov.hpp"
#include "cdh/quadrature.hpp"

using namespace cdh;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("seeded streams are reproducible and distinct", "[markov]") {
  SeededStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 100; ++i) {
    double va = a.uniform();
    CHECK(va == b.uniform());
    CHECK(va >= 0.0);
    CHECK(va < 1.0);
    differs_c |= va != c.uniform();
    differs_d |= va != d.uniform();
  }
  CHECK(differs_c);
  CHECK(differs_d);
}

TEST_CASE("sampling degenerate and atomic measures", "[markov]") {
  SeededStream rng(1, 0);
  auto deg = MixedMeasure::degenerate(-1.0);
  for (int i = 0; i < 10; ++i) CHECK(sample_measure(deg, rng) == -1.0);

  auto fin = transition_kernel(0, 2, 3, -1);  // masses 2/5 at -9, 3/5 at -4
  const int n = 100000;
  int low = 0;
  MeasureSampler sampler(fin);
  for (int i = 0; i < n; ++i) {
    double y = sampler.sample(rng);
    REQUIRE((y == fin.atoms()[0].location || y == fin.atoms()[1].location));
    low += y == fin.atoms()[0].location;
  }
  double w = 0.4;
  CHECK(std::abs(static_cast<double>(low) / n - w) < 3 * std::sqrt(w * (1 - w) / n));
  CHECK_THROWS_AS(sample_measure(entrance_law(1, 1, 0), rng), NotNormalized);
  CHECK_THROWS_AS(MeasureSampler(entrance_law(1, 1, 0)), NotNormalized);
}

TEST_CASE("sampler CDF model matches the integrated density", "[markov]") {
  for (auto m : {marginal_law(ProcessParams::real(1, 2, 3), 0), marginal_law(ProcessParams::real(-0.5, 2, 1), 0),
                 transition_kernel(1, 0, 2, 0.5), marginal_law(ProcessParams::conjugate(0.2, 1.5, 2), 1.0)}) {
    MeasureSampler s(m);
    double total = continuous_mass(m);
    for (double x : {0.05, 0.5, 2.0, 10.0, 40.0, 200.0}) {
      INFO("x = " << x);
      CHECK_THAT(s.continuous_cdf(x), WithinAbs(continuous_mass_below(m, x) / total, 1e-8));
    }
  }
}

TEST_CASE("quantiles invert the CDF", "[markov]") {
  auto m = marginal_law(ProcessParams::real(-0.5, 2, 1), 0);
  MeasureSampler s(m);
  double atom = m.atom_mass();
  CHECK(s.quantile(0.0) == -0.25);
  CHECK(s.quantile(atom * 0.999) == -0.25);
  for (double v : {0.7, 0.8, 0.95, 0.999}) {
    double x = s.quantile(v);
    REQUIRE(x > 0.0);
    double cdf = atom + (1 - atom) * s.continuous_cdf(x);
    CHECK_THAT(cdf, WithinAbs(v, 1e-10));
  }
}

TEST_CASE("one-shot and cached samplers agree", "[markov]") {
  auto m = marginal_law(ProcessParams::real(-0.5, 1.2, 2), 3);
  MeasureSampler s(m);
  for (int i = 0; i < 200; ++i) {
    SeededStream a(99, i), b(99, i);
    double x = sample_measure(m, a);
    double y = s.sample(b);
    CHECK_THAT(x, WithinAbs(y, 1e-8 * std::max(1.0, std::abs(y))));
  }
}

TEST_CASE("marginal sample mean", "[markov]") {
  auto m = marginal_law(ProcessParams::real(1, 2, 3), 0);
  MeasureSampler s(m);
  SeededStream rng(2024, 0);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += s.sample(rng);
  CHECK(std::abs(sum / n - 11.0) < 3 * std::sqrt(60.0 / n));
}

TEST_CASE("trajectories", "[markov]") {
  auto pp = ProcessParams::real(1, 3, 2);
  SeededStream rng(5, 0);
  std::vector<double> tau_only{pp.tau()};
  auto t0 = sample_trajectory(pp, tau_only, rng);
  REQUIRE(t0.states.size() == 1);
  CHECK(t0.states[0] == -1.0);

  std::vector<double> bad{0.0, -0.5};
  CHECK_THROWS_AS(sample_trajectory(pp, bad, rng), ArgumentError);
  std::vector<double> early{-3.0, 0.0};
  CHECK_THROWS_AS(sample_trajectory(pp, early, rng), ArgumentError);
}

TEST_CASE("sampled states lie in the state space", "[markov][property]") {
  std::vector<std::pair<ProcessParams, std::vector<double>>> cases = {
      {ProcessParams::real(1, 2, 3), {-1.5, -1.0, 0.0, 2.0, 4.0, 6.0}},
      {ProcessParams::real(-0.5, 1.2, 1.0), {-0.35, 0.2, 1.0, 2.5, 3.5}},
      {ProcessParams::real(0.5, 1.0, 0.0), {-0.75, 0.5, 1.5, 3.0}},
      {ProcessParams::conjugate(0.5, 1.0, 1.0), {-0.5, 0.0, 1.0, 2.5}},
  };
  for (const auto& [pp, times] : cases) {
    for (std::uint64_t r = 0; r < 400; ++r) {
      SeededStream rng(11, r);
      auto tr = sample_trajectory(pp, times, rng);
      for (std::size_t i = 0; i < times.size(); ++i) {
        INFO("t = " << times[i] << ", state = " << tr.states[i]);
        REQUIRE(state_space_contains(pp.C(), times[i], tr.states[i]));
      }
    }
  }
}

TEST_CASE("serial and parallel ensembles agree bitwise", "[markov]") {
  auto pp = ProcessParams::real(1, 2, 3);
  std::vector<double> times{-1.5, 0.0, 1.0, 2.5};
  auto a = sample_ensemble(pp, times, 300, 42, Execution::Serial);
  auto b = sample_ensemble(pp, times, 300, 42, Execution::Parallel);
  auto c = sample_ensemble(pp, times, 300, 42, Execution::Serial);
  REQUIRE(a.size() == 300);
  for (std::size_t r = 0; r < a.size(); ++r) {
    CHECK(a[r].states == b[r].states);
    CHECK(a[r].states == c[r].states);
  }
  auto d = sample_ensemble(pp, times, 300, 43, Execution::Serial);
  CHECK(a[0].states != d[0].states);
}

TEST_CASE("ensemble moments", "[markov]") {
  auto pp = ProcessParams::real(1, 2, 3);
  std::vector<double> times{-1.0, 0.0, 1.5};
  auto ens = sample_ensemble(pp, times, 20000, 77);
  auto st = empirical_moments(ens);
  for (std::size_t i = 0; i < times.size(); ++i) {
    INFO("t = " << times[i]);
    CHECK(std::abs(st.mean[i] - pp.mean(times[i])) < 4 * st.mean_se[i]);
    CHECK(std::abs(st.variance[i] - pp.variance(times[i])) < 4 * st.variance_se[i]);
    for (std::size_t j = 0; j < times.size(); ++j) {
      double want = pp.variance(std::min(times[i], times[j]));
      CHECK(std::abs(st.cov(i, j) - want) < 4 * st.cov_error(i, j));
    }
  }
}

TEST_CASE("conditional mean", "[markov]") {
  CHECK(conditional_mean_exact(3, 0, 0, 1.25) == 1.25);
  CHECK(conditional_mean_exact(3, 0, 1, 0) == 5.0);
  for (double C : {0.0, 1.0, 2.5})
    for (double x : {-0.5, 0.0, 2.0})
      for (double t : {0.5, 1.7}) {
        if (!state_space_contains(C, 0.0, x)) continue;
        auto rule = rule_for(transition_kernel(C, 0.0, t, x), 4);
        CHECK_THAT(rule.moments(1)[1], WithinAbs(conditional_mean_exact(C, 0.0, t, x), 1e-10 * std::max(1.0, std::abs(x) + 10)));
      }
  CHECK_THROWS_AS(conditional_mean_exact(1, 0, 1, -5), ArgumentError);
  CHECK_THROWS_AS(conditional_mean_exact(1, 1, 0, 0), ArgumentError);
}

TEST_CASE("standard form", "[markov]") {
  auto pp = ProcessParams::real(1, 3, 2);
  Trajectory tr{{pp.tau(), 0.0}, {-1.0, 4.0}};
  auto x = standard_form_transform(pp, tr);
  CHECK(x.times[0] == 0.0);
  CHECK_THAT(x.states[0], WithinAbs(0.0, 1e-15));
  CHECK_THAT(x.times[1], WithinAbs(4.0, 1e-15));
  Trajectory early{{-3.0}, {0.0}};
  CHECK_THROWS_AS(standard_form_transform(pp, early), ArgumentError);
}

TEST_CASE("empirical moments input handling", "[markov]") {
  std::vector<Trajectory> one{{{0.0, 1.0}, {2.0, 2.0}}};
  auto st = empirical_moments(one);
  CHECK(st.variance[0] == 0.0);
  CHECK(st.mean[1] == 2.0);
  CHECK_THROWS_AS(empirical_moments({}), ArgumentError);
  std::vector<Trajectory> mixed{{{0.0}, {1.0}}, {{1.0}, {1.0}}};
  CHECK_THROWS_AS(empirical_moments(mixed), ArgumentError);
}

TEST_CASE("trajectory CSV", "[markov]") {
  std::vector<Trajectory> ens{{{0.0, 0.5}, {1.0, 1.0 / 3.0}}};
  std::ostringstream out;
  write_trajectory_csv(out, ens);
  CHECK(out.str() == "replicate,time,state\n0,0,1\n0,0.5,0.33333333333333331\n");
}
