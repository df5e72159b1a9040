#include "groupsync/dynamics.hpp"

#include <string>

namespace groupsync {

Eigen::Index TrialConfig::steps() const {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ConfigError("T", "duration must be positive and finite");
  }
  if (!(dt > 0.0) || dt > duration) throw ConfigError("dt", "need 0 < dt <= T");
  const double ratio = duration / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * rounded) {
    throw ConfigError("dt", "T / dt must be an integer");
  }
  return static_cast<Eigen::Index>(rounded);
}

void TrialConfig::validate(Eigen::Index players) const {
  steps();
  if (!(coupling >= 0.0) || !std::isfinite(coupling)) {
    throw ConfigError("c", "coupling must be finite and >= 0");
  }
  if (theta0.size() != 0 && theta0.size() != players) {
    throw ConfigError("theta0", "length must equal player count " + std::to_string(players));
  }
  if (theta0.size() != 0 && !theta0.allFinite()) {
    throw ConfigError("theta0", "initial phases must be finite");
  }
  if (tau_omega && !(*tau_omega > 0.0)) {
    throw ConfigError("tau_omega", "resample interval must be positive");
  }
}

Eigen::VectorXd TrialConfig::initial_phases(Eigen::Index players) const {
  if (theta0.size() == 0) return Eigen::VectorXd::Constant(players, std::numbers::pi / 2.0);
  return theta0;
}

PhaseTrajectory::PhaseTrajectory(Eigen::MatrixXd theta, double dt, double start_time)
    : theta_(std::move(theta)), dt_(dt), start_time_(start_time) {
  if (theta_.rows() < 1) throw ShapeError("trajectory needs at least one player");
  if (!(dt_ > 0.0)) throw InvalidArgument("trajectory dt must be positive");
  if (!theta_.allFinite()) throw InvalidArgument("trajectory phases must be finite");
}

PhaseTrajectory integrate_trial(const TrialConfig& config, const AdjacencyMatrix& adjacency,
                                const FrequencySignal& omega) {
  const Eigen::Index n = adjacency.size();
  config.validate(n);
  if (omega.players() != n) {
    throw ShapeError("integrate_trial: frequency signal and adjacency sizes differ");
  }
  const Eigen::Index steps = config.steps();
  const double dt = config.dt;
  const double c = config.coupling;

  Eigen::MatrixXd out(n, steps);
  Eigen::VectorXd theta = config.initial_phases(n);
  const auto& w = omega.values();
  for (Eigen::Index i = 0; i < steps; ++i) {
    const double t0 = static_cast<double>(i) * dt;
    const double mid = t0 + 0.5 * dt;
    const Eigen::Index s0 = omega.stage_segment(t0, mid);
    const Eigen::Index sm = omega.stage_segment(mid, mid);
    const Eigen::Index s1 = omega.stage_segment(t0 + dt, mid);

    const Eigen::VectorXd k1 = kuramoto_rhs(theta, w.col(s0), c, adjacency);
    const Eigen::VectorXd k2 = kuramoto_rhs(theta + 0.5 * dt * k1, w.col(sm), c, adjacency);
    const Eigen::VectorXd k3 = kuramoto_rhs(theta + 0.5 * dt * k2, w.col(sm), c, adjacency);
    const Eigen::VectorXd k4 = kuramoto_rhs(theta + dt * k3, w.col(s1), c, adjacency);
    theta += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.col(i) = theta;
  }
  return PhaseTrajectory(std::move(out), dt, dt);
}

PhaseTrajectory integrate_trial(const TrialConfig& config, const AdjacencyMatrix& adjacency,
                                const FrequencyProfile& profile) {
  if (profile.size() != adjacency.size()) {
    throw ConfigError("profile", "player count differs from topology size");
  }
  config.validate(adjacency.size());
  const FrequencySignal omega =
      sample_frequencies(profile, config.duration, config.resample_interval(), config.seed);
  return integrate_trial(config, adjacency, omega);
}

Eigen::MatrixXd synth_positions(const PhaseTrajectory& trajectory,
                                const Eigen::Ref<const Eigen::VectorXd>& amplitude) {
  if (amplitude.size() != trajectory.players()) {
    throw ShapeError("synth_positions: one amplitude per player required");
  }
  if ((amplitude.array() <= 0.0).any()) {
    throw InvalidArgument("synth_positions: amplitudes must be positive");
  }
  return amplitude.asDiagonal() * trajectory.theta().array().sin().matrix();
}

}  // namespace groupsync
