#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "groupsync/dynamics.hpp"
#include "groupsync/metrics.hpp"

using namespace groupsync;
constexpr double kPi = std::numbers::pi;

namespace {

FrequencyProfile constant_profile(const Eigen::VectorXd& mu) {
  return FrequencyProfile(mu, Eigen::VectorXd::Zero(mu.size()));
}

TrialConfig config(double c, double T = 30.0, double dt = 0.01) {
  TrialConfig cfg;
  cfg.coupling = c;
  cfg.duration = T;
  cfg.dt = dt;
  return cfg;
}

}  // namespace

TEST_CASE("rhs hand evaluations") {
  const Eigen::Vector2d omega(0.3, -0.2);
  CHECK(kuramoto_rhs(Eigen::Vector2d(0.4, 1.9), omega, 0.0, complete(2)) == omega);
  CHECK(kuramoto_rhs(Eigen::Vector2d(1.1, 1.1), omega, 3.0, complete(2)).isApprox(omega));
  const Eigen::Vector2d v = kuramoto_rhs(Eigen::Vector2d(0, kPi / 2), Eigen::Vector2d::Zero(), 2.0, complete(2));
  CHECK(v(0) == doctest::Approx(1.0));
  CHECK(v(1) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(kuramoto_rhs(Eigen::Vector3d::Zero(), omega, 1.0, complete(2)), ShapeError);
}

TEST_CASE("rhs divides by the total player count, not the degree") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  const AdjacencyMatrix a = star(7, 3);
  Eigen::VectorXd th(7), om(7);
  for (Eigen::Index k = 0; k < 7; ++k) {
    th(k) = u(rng);
    om(k) = u(rng);
  }
  const Eigen::VectorXd v = kuramoto_rhs(th, om, 1.7, a);
  for (Eigen::Index k = 0; k < 7; ++k) {
    double s = 0;
    for (Eigen::Index h = 0; h < 7; ++h) s += a.matrix()(k, h) * std::sin(th(h) - th(k));
    CHECK(v(k) == doctest::Approx(om(k) + 1.7 / 7.0 * s).epsilon(1e-13));
  }
}

TEST_CASE("config validation") {
  const AdjacencyMatrix a = complete(2);
  const FrequencyProfile p = constant_profile(Eigen::Vector2d(3, 4));
  CHECK_THROWS_AS(integrate_trial(config(-1.0), a, p), ConfigError);
  CHECK_THROWS_AS(integrate_trial(config(1.0, 30.0, 0.007), a, p), ConfigError);
  CHECK_THROWS_AS(integrate_trial(config(1.0, 0.0), a, p), ConfigError);
  CHECK_THROWS_AS(integrate_trial(config(1.0), complete(3), p), ConfigError);
  TrialConfig bad = config(1.0);
  bad.theta0 = Eigen::Vector3d::Zero();
  CHECK_THROWS_AS(integrate_trial(bad, a, p), ConfigError);
  CHECK(config(1.0).steps() == 3000);
}

TEST_CASE("single oscillator drifts at its frequency") {
  const PhaseTrajectory tr = integrate_trial(config(2.0), complete(1), constant_profile(Eigen::VectorXd::Constant(1, 3.7)));
  CHECK(tr.samples() == 3000);
  CHECK(tr.start_time() == doctest::Approx(0.01));
  for (Eigen::Index i : {0, 1, 999, 2999}) CHECK(tr.theta()(0, i) == doctest::Approx(kPi / 2 + 3.7 * tr.time(i)).epsilon(1e-12));
}

TEST_CASE("two-node locking against the analytic criterion") {
  // Reduced dynamics: d(theta1 - theta2)/dt = (w1 - w2) - c sin(theta1 - theta2).
  for (double dw : {0.25, 0.5, 1.0, 1.5}) {
    for (double c : {0.2, 0.6, 1.2, 1.6, 2.5, 4.0}) {
      if (std::abs(std::abs(dw) - c) < 0.05) continue;  // critical slowing near the boundary
      const FrequencyProfile p = constant_profile(Eigen::Vector2d(3.0, 3.0 + dw));
      const PhaseTrajectory tr = integrate_trial(config(c, 120.0), complete(2), p);
      const Eigen::Index n = tr.samples();
      const double late = tr.theta()(0, n - 1) - tr.theta()(1, n - 1);
      const double earlier = tr.theta()(0, n - 1001) - tr.theta()(1, n - 1001);
      const bool locked = std::abs(late - earlier) < 1e-6;
      CAPTURE(dw);
      CAPTURE(c);
      CHECK(locked == (dw <= c));
      if (locked) CHECK(std::abs(wrap_phase(late) - std::asin(-dw / c)) < 1e-3);
    }
  }
}

TEST_CASE("paper two-node fixture") {
  const FrequencyProfile p = constant_profile(Eigen::Vector2d(3, 4));
  const PhaseTrajectory locked = integrate_trial(config(1.5), complete(2), p);
  const Eigen::Index n = locked.samples() - 1;
  CHECK(wrap_phase(locked.theta()(0, n) - locked.theta()(1, n)) == doctest::Approx(-0.7297).epsilon(1e-3));
  const PhaseTrajectory drifting = integrate_trial(config(0.5), complete(2), p);
  const double slope = ((drifting.theta()(1, n) - drifting.theta()(0, n)) - (drifting.theta()(1, 0) - drifting.theta()(0, 0))) / (30.0 - 0.01);
  CHECK(slope > 0.5);
}

TEST_CASE("halving dt on a frozen signal converges") {
  const FrequencyProfile g1 = builtin_profile("group1");
  const FrequencySignal omega = sample_frequencies(g1, 30.0, 0.01, 123);
  for (const AdjacencyMatrix& a : {complete(7), ring(7), star(7, 3)}) {
    TrialConfig coarse = config(4.4);
    coarse.tau_omega = 0.01;
    TrialConfig fine = coarse;
    fine.dt = 0.005;
    const PhaseTrajectory x = integrate_trial(coarse, a, omega);
    const PhaseTrajectory y = integrate_trial(fine, a, omega);
    double worst = 0;
    for (Eigen::Index i = 0; i < x.samples(); ++i) {
      worst = std::max(worst, (x.theta().col(i) - y.theta().col(2 * i + 1)).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("global rotation shifts every phase by the same constant") {
  const FrequencyProfile g2 = builtin_profile("group2");
  TrialConfig a = config(1.25);
  a.seed = 8;
  TrialConfig b = a;
  b.theta0 = Eigen::VectorXd::Constant(7, kPi / 2 + 0.9);
  const PhaseTrajectory x = integrate_trial(a, ring(7), g2);
  const PhaseTrajectory y = integrate_trial(b, ring(7), g2);
  CHECK(((y.theta().array() - x.theta().array()) - 0.9).abs().maxCoeff() < 1e-9);
  CHECK(std::abs(group_sync(x) - group_sync(y)) < 1e-9);
}

TEST_CASE("relabeling players permutes the trajectory") {
  const FrequencyProfile g1 = builtin_profile("group1");
  const FrequencySignal omega = sample_frequencies(g1, 30.0, 0.01, 4);
  std::vector<Eigen::Index> perm{3, 0, 6, 2, 5, 1, 4};
  Eigen::MatrixXd permuted_values(7, omega.segments());
  for (Eigen::Index i = 0; i < 7; ++i) permuted_values.row(i) = omega.values().row(perm[i]);
  const FrequencySignal omega_p(permuted_values, omega.duration(), omega.tau());
  const AdjacencyMatrix a = star(7, 3);
  const PhaseTrajectory x = integrate_trial(config(1.25), a, omega);
  const PhaseTrajectory y = integrate_trial(config(1.25), a.permuted(perm), omega_p);
  for (Eigen::Index i = 0; i < 7; ++i) CHECK((y.theta().row(i) - x.theta().row(perm[i])).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("synchronised manifold is invariant") {
  const FrequencyProfile p = constant_profile(Eigen::VectorXd::Constant(7, 4.0));
  for (const AdjacencyMatrix& a : {complete(7), ring(7), ring_minus_edge(7, 7), star(7, 3)}) {
    const PhaseTrajectory tr = integrate_trial(config(2.0), a, p);
    for (Eigen::Index k = 1; k < 7; ++k) CHECK(tr.theta().row(k) == tr.theta().row(0));
  }
}

TEST_CASE("per-step increments stay below pi") {
  const PhaseTrajectory tr = integrate_trial(config(4.4), star(7, 3), builtin_profile("group1"));
  const Eigen::MatrixXd d = tr.theta().rightCols(tr.samples() - 1) - tr.theta().leftCols(tr.samples() - 1);
  CHECK(d.cwiseAbs().maxCoeff() < kPi);
  CHECK(tr.theta().allFinite());
}

TEST_CASE("synthesized positions") {
  const PhaseTrajectory still(Eigen::MatrixXd::Constant(2, 50, kPi / 2), 0.01);
  const Eigen::MatrixXd x = synth_positions(still, Eigen::Vector2d(3.0, 5.0));
  CHECK((x.row(0).array() - 3.0).abs().maxCoeff() < 1e-12);
  CHECK((x.row(1).array() - 5.0).abs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(synth_positions(still, Eigen::Vector3d::Ones()), ShapeError);
}
