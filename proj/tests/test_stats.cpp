#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "groupsync/error.hpp"
#include "groupsync/stats.hpp"
#include "oracles.hpp"

using namespace groupsync;

TEST_CASE("describe uses the n-1 denominator") {
  const std::vector<double> x{1, 2, 3, 4};
  const Description d = describe(x);
  CHECK(d.mean == doctest::Approx(2.5));
  CHECK(d.std == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(d.count == 4);
  CHECK(describe(std::vector<double>{7}).std == 0.0);
  CHECK_THROWS(describe(std::vector<double>{}));
}

TEST_CASE("F upper tail against quadrature") {
  for (auto [d1, d2] : {std::pair{3.0, 10.0}, {6.0, 42.0}, {2.0, 20.0}, {3.0, 24.0}, {6.0, 18.4}}) {
    for (double f : {0.1, 0.5, 1.0, 2.5, 6.0}) {
      CAPTURE(d1);
      CAPTURE(d2);
      CAPTURE(f);
      CHECK(std::abs(f_upper_tail(f, d1, d2) - oracle::f_upper_tail(f, d1, d2)) < 1e-6);
    }
  }
  CHECK(f_upper_tail(0.0, 3, 10) == 1.0);
  CHECK(f_upper_tail(INFINITY, 3, 10) == 0.0);
  CHECK(f_upper_tail(109.345, 3, 10) < 0.001);
}

TEST_CASE("incomplete beta closed forms") {
  for (double x : {0.1, 0.37, 0.8}) {
    CHECK(incomplete_beta(1, 1, x) == doctest::Approx(x));
    CHECK(incomplete_beta(2, 1, x) == doctest::Approx(x * x));
    CHECK(incomplete_beta(1, 3, x) == doctest::Approx(1 - std::pow(1 - x, 3)));
    CHECK(incomplete_beta(2.5, 1.5, x) + incomplete_beta(1.5, 2.5, 1 - x) == doctest::Approx(1.0));
  }
}

TEST_CASE("t two-sided tail known values") {
  CHECK(t_two_sided(0.0, 5) == doctest::Approx(1.0));
  CHECK(t_two_sided(2.228138852, 10) == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(t_two_sided(-2.228138852, 10) == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(t_two_sided(1.0, 1) == doctest::Approx(0.5));  // Cauchy
}

TEST_CASE("one-way ANOVA hand fixture") {
  // Means 2, 3, 7; grand mean 4; SS_between = 3 (4 + 1 + 9) = 42; SS_within = 6.
  const AnovaResult r = one_way_anova({{1, 2, 3}, {2, 3, 4}, {6, 7, 8}});
  CHECK(r.df1 == 2);
  CHECK(r.df2 == 6);
  CHECK(r.F == doctest::Approx(21.0));
  CHECK(r.eta_sq == doctest::Approx(42.0 / 48.0));
  CHECK(r.p == doctest::Approx(std::pow(1.0 + 2.0 * 21.0 / 6.0, -3.0)));  // F(2, d2) closed form
}

TEST_CASE("two-group ANOVA equals the squared Student t") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0, 1);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> a(8), b(11);
    for (double& v : a) v = n(rng);
    for (double& v : b) v = n(rng) + 0.5;
    const AnovaResult f = one_way_anova({a, b});
    const TTestResult t = student_t(a, b);
    CHECK(f.F == doctest::Approx(t.t * t.t).epsilon(1e-10));
    CHECK(f.p == doctest::Approx(t.p).epsilon(1e-8));
  }
}

TEST_CASE("ANOVA degenerate cases") {
  const AnovaResult same = one_way_anova({{1, 2, 3}, {1, 2, 3}});
  CHECK(same.F == 0.0);
  CHECK(same.p == 1.0);
  const AnovaResult exact = one_way_anova({{1, 1}, {2, 2}});
  CHECK(std::isinf(exact.F));
  CHECK(exact.p == 0.0);
  CHECK_THROWS(one_way_anova({{1, 2, 3}}));
  CHECK_THROWS(one_way_anova({{1, 2, 3}, {4}}));
  CHECK_THROWS_AS(welch_anova({{1, 1}, {2, 3}}), DegenerateInput);
}

TEST_CASE("Welch ANOVA hand computation") {
  // Fixture with unequal variances; weights n / s^2 computed by hand below.
  const std::vector<std::vector<double>> g{{1, 2, 3, 4}, {2, 4, 6, 8, 10}, {5, 5.5, 6}};
  double W = 0, wm = 0;
  std::vector<double> w, m, n;
  for (const auto& x : g) {
    const Description d = describe(x);
    w.push_back(d.count / (d.std * d.std));
    m.push_back(d.mean);
    n.push_back(d.count);
    W += w.back();
    wm += w.back() * d.mean;
  }
  wm /= W;
  double A = 0, lam = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    A += w[i] * (m[i] - wm) * (m[i] - wm) / 2.0;
    lam += (1 - w[i] / W) * (1 - w[i] / W) / (n[i] - 1);
  }
  const double F = A / (1 + 2.0 * 1.0 * lam / 8.0);
  const double df2 = 8.0 / (3.0 * lam);
  const AnovaResult r = welch_anova(g);
  CHECK(r.F == doctest::Approx(F).epsilon(1e-12));
  CHECK(r.df2 == doctest::Approx(df2).epsilon(1e-12));
  CHECK(r.p == doctest::Approx(oracle::f_upper_tail(F, 2, df2)).epsilon(1e-6));
}

TEST_CASE("Welch t test") {
  const std::vector<double> a{1, 2, 3, 4, 5}, b{2, 4, 6, 8, 10, 12};
  const TTestResult r = welch_t(a, b);
  const double va = 2.5 / 5, vb = 14.0 / 6;
  CHECK(r.t == doctest::Approx((3.0 - 7.0) / std::sqrt(va + vb)));
  CHECK(r.df == doctest::Approx((va + vb) * (va + vb) / (va * va / 4 + vb * vb / 5)));
  CHECK(r.p > 0.0);
  CHECK(r.p < 0.05);
  CHECK(welch_t(b, a).t == doctest::Approx(-r.t));
  const TTestResult flat = welch_t(std::vector<double>{1, 1}, std::vector<double>{2, 2});
  CHECK(std::isinf(flat.t));
  CHECK(flat.p == 0.0);
}
