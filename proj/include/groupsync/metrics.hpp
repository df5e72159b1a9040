#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>

#include <Eigen/Dense>

#include "groupsync/dynamics.hpp"
#include "groupsync/error.hpp"

namespace groupsync {

/// Maps an angle to (-pi, pi].
inline double wrap_phase(double x) {
  double w = std::remainder(x, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

struct ClusterPhase {
  std::complex<double> order;  ///< q' = mean of e^{j theta_k}
  double phase;                ///< q = atan2(Im q', Re q')
};

template <typename Derived>
ClusterPhase cluster_phase(const Eigen::MatrixBase<Derived>& theta) {
  if (theta.size() == 0) throw InvalidArgument("cluster_phase: empty phase vector");
  std::complex<double> sum{0.0, 0.0};
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    const double v = static_cast<double>(theta(k));
    sum += std::complex<double>(std::cos(v), std::sin(v));
  }
  const std::complex<double> order = sum / static_cast<double>(theta.size());
  return {order, std::atan2(order.imag(), order.real())};
}

struct IndividualSync {
  Eigen::VectorXd rho;      ///< rho_k
  Eigen::VectorXd phi_bar;  ///< time-averaged relative phase, rad
};

IndividualSync individual_sync(const PhaseTrajectory& trajectory);

/// rho_g(t_i), using phi_bar from the whole window.
Eigen::VectorXd group_sync_t(const PhaseTrajectory& trajectory);

/// Arithmetic mean of rho_g(t_i).
double group_sync(const PhaseTrajectory& trajectory);

/// |mean_t e^{j(theta_h - theta_k)}|, 0-based players. h == k gives 1.
double dyadic_sync(const PhaseTrajectory& trajectory, Eigen::Index h, Eigen::Index k);

/// All pairs of one trial; unit diagonal.
Eigen::MatrixXd dyadic_matrix(const PhaseTrajectory& trajectory);

struct DyadicTable {
  Eigen::MatrixXd mu;     ///< mean over trials, unit diagonal
  Eigen::MatrixXd sigma;  ///< population std over trials, zero diagonal
};

DyadicTable dyadic_table(std::span<const PhaseTrajectory> trials);

/// Metrics of one trial (or an aggregate of several, see harness).
struct SyncReport {
  Eigen::VectorXd rho_k;
  Eigen::VectorXd phi_bar;
  Eigen::VectorXd rho_g_t;
  double rho_g = 0.0;
  Eigen::MatrixXd dyad_mu;
  Eigen::MatrixXd dyad_sigma;
  double trace_start = 0.0;  ///< time of rho_g_t[0], s
  double trace_dt = 0.0;
};

SyncReport sync_report(const PhaseTrajectory& trajectory);

}  // namespace groupsync
