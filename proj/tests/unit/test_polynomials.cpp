#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "cdh/errors.hpp"
#include "cdh/polynomials.hpp"
#include "cdh/process_params.hpp"
#include "cdh/special_functions.hpp"

using namespace cdh;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("recurrence coefficients", "[poly]") {
  auto p = CdhParams::real(1, 2, 3);
  auto r0 = recurrence_coeffs(p, 0);
  CHECK(r0.a == 12.0);
  CHECK(r0.c == 0.0);
  auto r1 = recurrence_coeffs(p, 1);
  CHECK(r1.a == 20.0);
  CHECK(r1.c == 5.0);
  auto q = CdhParams::conjugate(0, 1, 2);
  CHECK_THAT(q.a_coeff(1), WithinAbs(8.0, 1e-14));
  CHECK_THAT(q.c_coeff(1), WithinAbs(2.0, 1e-14));
  CHECK(q.beta() == std::complex<double>(1, -2));
  CHECK(q.gamma() == std::complex<double>(1, 2));
  CHECK_THROWS_AS(CdhParams::conjugate(0, 1, 0), ArgumentError);
}

TEST_CASE("eval_poly small cases", "[poly]") {
  auto p = CdhParams::real(1, 2, 3);
  CHECK(eval_poly(p, 1, 0.0) == -11.0);
  CHECK(eval_poly(p, 0, 123.4) == 1.0);
  CHECK(eval_poly(p, 2, -1.0) == 240.0);
  CHECK(eval_at_minus_alpha_sq(p, 2) == 240.0);
  CHECK(eval_at_minus_alpha_sq(p, 1) == -12.0);
  CHECK(eval_at_minus_alpha_sq(p, 0) == 1.0);
}

TEST_CASE("eval_poly against the 3F2 representation", "[poly]") {
  // (-1)^n (a+b)_n (a+c)_n 3F2(-n, a+i sqrt x, a-i sqrt x; a+b, a+c; 1), mpmath.
  struct Ref {
    CdhParams p;
    int n;
    double x;
    double value;
  };
  std::vector<Ref> refs = {
      {CdhParams::real(1, 2, 3), 5, 2.5, -3359495.78125},
      {CdhParams::real(-0.3, 1, 2), 8, 7.0, 9011124024.10774446603514594227},
      {CdhParams::conjugate(0.5, 1, 2), 6, -0.3, 41310831.3623589997035914006507},
      {CdhParams::conjugate(2, 0.25, 3), 10, 40.0, -6586637191402613.26129303122343},
      {CdhParams::real(-1.5, 2, 3), 4, -1.7, -1481.00390000000012620624545434},
  };
  for (const auto& r : refs) {
    INFO("n = " << r.n << ", x = " << r.x);
    CHECK_THAT(eval_poly(r.p, r.n, r.x), WithinRel(r.value, 1e-11));
  }
}

TEST_CASE("oracle equivalence at -alpha^2", "[poly][property]") {
  std::vector<CdhParams> grid = {
      CdhParams::real(1, 2, 3),   CdhParams::real(-0.4, 1.1, 2.5), CdhParams::real(0.7, -0.2, 1.3),
      CdhParams::real(2.5, 0.5, 0.5), CdhParams::conjugate(0.5, 1, 2), CdhParams::conjugate(1.5, -0.5, 0.8),
      CdhParams::conjugate(0.2, 2, 5),
  };
  for (const auto& p : grid) {
    for (int n = 0; n <= 20; ++n) {
      double a2 = p.alpha() * p.alpha();
      double closed = eval_at_minus_alpha_sq(p, n);
      double rec = eval_poly(p, n, -a2);
      INFO("alpha = " << p.alpha() << ", n = " << n);
      CHECK(std::abs(rec - closed) <= 1e-10 * std::max(1.0, std::abs(closed)));
    }
  }
}

TEST_CASE("eval_poly_all and coefficients agree with eval_poly", "[poly]") {
  auto p = CdhParams::conjugate(0.5, 1, 2);
  auto all = eval_poly_all(p, 9, 3.25);
  auto coeffs = poly_coefficients(p, 9);
  for (int n = 0; n <= 9; ++n) {
    CHECK(all[n] == eval_poly(p, n, 3.25));
    double horner = 0.0;
    for (int k = n; k >= 0; --k) horner = horner * 3.25 + coeffs[n][k];
    CHECK_THAT(horner, WithinRel(all[n], 1e-10));
    CHECK(coeffs[n][n] == 1.0);
  }
}

TEST_CASE("Favard classification", "[poly]") {
  CHECK(std::holds_alternative<InfiniteSupport>(favard_classify(CdhParams::real(1, 2, 3))));
  CHECK(std::holds_alternative<InfiniteSupport>(favard_classify(CdhParams::conjugate(0.5, 1, 2))));

  auto boundary = favard_classify(kernel_family(2, 0, 1, -4));
  REQUIRE(std::holds_alternative<FiniteAtoms>(boundary));
  CHECK(std::get<FiniteAtoms>(boundary).count == 1);

  auto two = favard_classify(kernel_family(0, 2, 3, -1));
  REQUIRE(std::holds_alternative<FiniteAtoms>(two));
  CHECK(std::get<FiniteAtoms>(two).count == 2);

  // beta_1 = 0.65 * 1.2 > 0, beta_2 = (0.5)(-0.3) * 2(2.2) < 0
  auto bad = favard_classify(CdhParams::real(-1.5, 1, 0.2));
  REQUIRE(std::holds_alternative<NotOrthogonal>(bad));
  CHECK(std::get<NotOrthogonal>(bad).first_bad_index == 2);
}

TEST_CASE("numerator polynomials", "[poly]") {
  auto p = CdhParams::real(1, 2, 3);
  CHECK(numerator_poly(p, 1, 17.0) == 1.0);
  CHECK(numerator_poly(p, 1, -3.0) == 1.0);
  CHECK(numerator_poly(p, 2, -1.0) == -25.0);
  for (int n = 1; n <= 8; ++n) {
    double prod_a = 1.0;
    for (int k = 1; k <= n - 1; ++k) prod_a *= p.a_coeff(k);
    double sum = 0.0, ratio = 1.0;
    for (int m = 0; m <= n - 1; ++m) {
      if (m > 0) ratio *= p.c_coeff(m) / p.a_coeff(m);
      sum += ratio;
    }
    double closed = ((n - 1) % 2 == 0 ? 1.0 : -1.0) * prod_a * sum;
    INFO("n = " << n);
    CHECK_THAT(numerator_poly(p, n, -1.0), WithinRel(closed, 1e-12));
  }
}

TEST_CASE("normalization", "[poly]") {
  auto p = CdhParams::real(1, 2, 3);
  CHECK(normalized_eval(p, 0, 5.0) == 1.0);
  CHECK_THAT(normalized_eval(p, 1, -1.0), WithinRel(-12.0 / std::sqrt(60.0), 1e-14));
  for (int n = 0; n <= 10; ++n) {
    double closed = std::tgamma(n + 1.0) * pochhammer(3, n) * pochhammer(4, n) * pochhammer(5, n);
    CHECK_THAT(norm_squared(p, n), WithinRel(closed, 1e-12));
    CHECK_THAT(log_norm_squared(p, n), WithinRel(std::log(closed), 1e-12));
  }
  CHECK_THROWS_AS(normalized_eval(kernel_family(0, 2, 3, -1), 3, 0.5), DomainError);
  CHECK_THROWS_AS(log_norm_squared(CdhParams::real(-1.5, 1, 0.2), 2), DomainError);
}

TEST_CASE("determinacy partial sums", "[poly]") {
  auto p = CdhParams::real(0, 1, 1);
  auto sums = determinacy_partial_sums(p, 50);
  for (int n = 0; n <= 50; ++n) CHECK_THAT(sums.p_terms[n], WithinRel(1.0 / (n + 1), 1e-12));
  for (int n = 1; n <= 50; ++n) {
    CHECK(sums.p_partial[n] > sums.p_partial[n - 1]);
    CHECK(sums.q_partial[n] >= sums.q_partial[n - 1]);
  }
  for (double alpha : {-0.5, 0.0, 0.5}) {
    auto s = determinacy_partial_sums(CdhParams::real(alpha, 1, 1), 10000);
    double slope = fit_growth_exponent(s.p_terms, 100, 10000);
    INFO("alpha = " << alpha);
    CHECK(std::abs(slope - (2 * alpha - 1)) < 0.1);
  }
}

TEST_CASE("connection coefficients", "[poly]") {
  auto pp = ProcessParams::real(1, 2, 3);
  for (double x : {-2.0, 0.0, 0.7, 4.0}) {
    auto cc = connection_coeffs(pp, x, 0.0, 1, 1.0);
    CHECK(cc.values[1][1] == 1.0);
    CHECK_THAT(cc.values[1][0], WithinAbs(11.0 - x, 1e-12));
  }
  auto c1 = connection_coeffs(pp, 2.5, 0.5, 6, 1.0);
  auto c2 = connection_coeffs(pp, 2.5, 0.5, 6, 2.0);
  for (int m = 0; m <= 6; ++m) {
    CHECK(c1.values[m][m] == 1.0);
    for (int k = 0; k <= m; ++k) {
      double scale = std::max(1.0, std::abs(c1.values[m][k]));
      CHECK(std::abs(c1.values[m][k] - c2.values[m][k]) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("kernel polynomials vanish at the starting point", "[poly][property]") {
  double worst = 0.0;
  for (double C : {0.0, 1.5, 3.0}) {
    for (double s : {-1.0, 0.0, 2.0}) {
      for (double x : {-0.25, 0.0, 0.5, 3.0, 12.0}) {
        auto fam = kernel_family(C, s, s, x);
        auto coeffs = poly_coefficients(fam, 10);
        for (int n = 1; n <= 10; ++n) {
          double scale = 0.0;
          for (int k = 0; k <= n; ++k) scale += std::abs(coeffs[n][k]) * std::pow(std::abs(x), k);
          worst = std::max(worst, std::abs(eval_poly(fam, n, x)) / std::max(1.0, scale));
        }
      }
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("swapping beta and gamma leaves the family unchanged", "[poly][property]") {
  for (auto p : {CdhParams::real(0.3, 1.7, 4.1), CdhParams::conjugate(1.2, 0.4, 2.2)}) {
    auto q = p.swapped();
    for (int n = 0; n <= 12; ++n) CHECK_THAT(eval_poly(q, n, 1.9), WithinRel(eval_poly(p, n, 1.9), 1e-12));
  }
}

TEST_CASE("parameter families", "[poly]") {
  auto m = marginal_family(ProcessParams::real(1, 2, 3), 0.5);
  CHECK(m.alpha() == 2.5);
  CHECK(m.beta().real() == 1.5);
  CHECK(m.gamma().real() == 2.5);
  auto k = kernel_family(2, 0, 1, 4);
  CHECK(k.is_conjugate());
  CHECK(k.beta() == std::complex<double>(1, -2));
  auto r = kernel_family(2, 0, 1, -4);
  CHECK_FALSE(r.is_conjugate());
  CHECK(r.pair_sum() == 2.0);
  CHECK(r.pair_product() == -3.0);
}
