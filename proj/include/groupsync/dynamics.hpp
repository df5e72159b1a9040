#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>

#include <Eigen/Dense>

#include "groupsync/ensemble.hpp"
#include "groupsync/error.hpp"
#include "groupsync/graphs.hpp"

namespace groupsync {

struct TrialConfig {
  double duration = 30.0;  ///< T, s
  double dt = 0.01;        ///< integration and sampling step, s
  double coupling = 0.0;   ///< c
  /// Initial phases; empty means pi/2 for every player.
  Eigen::VectorXd theta0;
  std::uint64_t seed = 0;
  /// Frequency resample interval; unset means one draw per step (tau = dt).
  std::optional<double> tau_omega;

  double resample_interval() const { return tau_omega.value_or(dt); }

  /// N_T = round(T / dt). Throws ConfigError on invariant violations.
  Eigen::Index steps() const;

  void validate(Eigen::Index players) const;

  Eigen::VectorXd initial_phases(Eigen::Index players) const;
};

/// Unwrapped phases theta_k[t_i], N x N_T, sampled every dt starting at
/// `start_time`.
class PhaseTrajectory {
 public:
  PhaseTrajectory(Eigen::MatrixXd theta, double dt, double start_time = 0.0);

  Eigen::Index players() const noexcept { return theta_.rows(); }
  Eigen::Index samples() const noexcept { return theta_.cols(); }
  double dt() const noexcept { return dt_; }
  double start_time() const noexcept { return start_time_; }
  double time(Eigen::Index i) const noexcept { return start_time_ + static_cast<double>(i) * dt_; }

  const Eigen::MatrixXd& theta() const noexcept { return theta_; }

 private:
  Eigen::MatrixXd theta_;
  double dt_;
  double start_time_;
};

/// omega_k + (c/N) sum_h a_kh sin(theta_h - theta_k), with N the total player
/// count for every topology.
///
/// Evaluated as omega + (c/N) (cos(theta) .* A sin(theta) - sin(theta) .* A cos(theta)).
template <typename DerivedTheta, typename DerivedOmega>
Eigen::Matrix<typename DerivedTheta::Scalar, Eigen::Dynamic, 1> kuramoto_rhs(
    const Eigen::MatrixBase<DerivedTheta>& theta, const Eigen::MatrixBase<DerivedOmega>& omega,
    typename DerivedTheta::Scalar coupling, const AdjacencyMatrix& adjacency) {
  using Scalar = typename DerivedTheta::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = adjacency.size();
  if (theta.size() != n || omega.size() != n) {
    throw ShapeError("kuramoto_rhs: theta, omega and adjacency sizes differ");
  }
  const Vector s = theta.array().sin().matrix();
  const Vector c = theta.array().cos().matrix();
  const auto a = adjacency.matrix().template cast<Scalar>();
  const Scalar gain = coupling / static_cast<Scalar>(n);
  return omega + gain * (c.cwiseProduct(a * s) - s.cwiseProduct(a * c));
}

/// Classical RK4 at fixed dt against a frozen frequency signal. Phases are
/// kept unwrapped. Sample i holds the state at t = (i + 1) dt.
PhaseTrajectory integrate_trial(const TrialConfig& config, const AdjacencyMatrix& adjacency,
                                const FrequencySignal& omega);

/// Samples the frequency signal from `profile` with `config.seed`, then integrates.
PhaseTrajectory integrate_trial(const TrialConfig& config, const AdjacencyMatrix& adjacency,
                                const FrequencyProfile& profile);

/// x_k[t_i] = amplitude_k sin(theta_k[t_i]).
Eigen::MatrixXd synth_positions(const PhaseTrajectory& trajectory,
                                const Eigen::Ref<const Eigen::VectorXd>& amplitude);

}  // namespace groupsync
