#include "groupsync/metrics.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace groupsync {
namespace {

using Complex = std::complex<double>;

// e^{j phi_k[t_i]} for every player and sample, phi_k = wrap(theta_k - q).
Eigen::MatrixXcd relative_phasors(const PhaseTrajectory& trajectory) {
  const Eigen::MatrixXd& theta = trajectory.theta();
  Eigen::MatrixXcd rel(theta.rows(), theta.cols());
  for (Eigen::Index i = 0; i < theta.cols(); ++i) {
    const double q = cluster_phase(theta.col(i)).phase;
    for (Eigen::Index k = 0; k < theta.rows(); ++k) {
      const double phi = wrap_phase(theta(k, i) - q);
      rel(k, i) = Complex(std::cos(phi), std::sin(phi));
    }
  }
  return rel;
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

void check_nonempty(const PhaseTrajectory& trajectory) {
  if (trajectory.samples() < 1) throw ShapeError("trajectory has no samples");
}

}  // namespace

IndividualSync individual_sync(const PhaseTrajectory& trajectory) {
  check_nonempty(trajectory);
  const Eigen::VectorXcd mean = relative_phasors(trajectory).rowwise().mean();
  IndividualSync out{Eigen::VectorXd(mean.size()), Eigen::VectorXd(mean.size())};
  for (Eigen::Index k = 0; k < mean.size(); ++k) {
    out.rho(k) = clamp_unit(std::abs(mean(k)));
    out.phi_bar(k) = std::atan2(mean(k).imag(), mean(k).real());
  }
  return out;
}

Eigen::VectorXd group_sync_t(const PhaseTrajectory& trajectory) {
  check_nonempty(trajectory);
  const Eigen::MatrixXcd rel = relative_phasors(trajectory);
  const Eigen::VectorXcd mean = rel.rowwise().mean();
  Eigen::VectorXcd unrotate(mean.size());
  for (Eigen::Index k = 0; k < mean.size(); ++k) {
    const double phi_bar = std::atan2(mean(k).imag(), mean(k).real());
    unrotate(k) = Complex(std::cos(phi_bar), -std::sin(phi_bar));
  }
  const Eigen::RowVectorXcd sum = unrotate.transpose() * rel;
  const double n = static_cast<double>(trajectory.players());
  return sum.cwiseAbs().transpose().unaryExpr([n](double v) { return clamp_unit(v / n); });
}

double group_sync(const PhaseTrajectory& trajectory) { return group_sync_t(trajectory).mean(); }

double dyadic_sync(const PhaseTrajectory& trajectory, Eigen::Index h, Eigen::Index k) {
  check_nonempty(trajectory);
  const Eigen::Index n = trajectory.players();
  if (h < 0 || h >= n || k < 0 || k >= n) {
    throw std::out_of_range("dyadic_sync: player index out of range");
  }
  if (h == k) return 1.0;
  const Eigen::MatrixXd& theta = trajectory.theta();
  Complex sum{0.0, 0.0};
  for (Eigen::Index i = 0; i < theta.cols(); ++i) {
    const double d = theta(h, i) - theta(k, i);
    sum += Complex(std::cos(d), std::sin(d));
  }
  return clamp_unit(std::abs(sum) / static_cast<double>(theta.cols()));
}

Eigen::MatrixXd dyadic_matrix(const PhaseTrajectory& trajectory) {
  check_nonempty(trajectory);
  const Eigen::MatrixXd& theta = trajectory.theta();
  Eigen::MatrixXcd z(theta.rows(), theta.cols());
  z.real() = theta.array().cos().matrix();
  z.imag() = theta.array().sin().matrix();
  // (Z Z^H)_{hk} = sum_t e^{j(theta_h - theta_k)}
  const Eigen::MatrixXcd gram = z * z.adjoint();
  Eigen::MatrixXd out =
      (gram.cwiseAbs() / static_cast<double>(theta.cols())).unaryExpr(&clamp_unit);
  out.diagonal().setOnes();
  return out;
}

DyadicTable dyadic_table(std::span<const PhaseTrajectory> trials) {
  if (trials.empty()) throw InvalidArgument("dyadic_table: no trials");
  const Eigen::Index n = trials.front().players();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(n, n);
  std::vector<Eigen::MatrixXd> per_trial;
  per_trial.reserve(trials.size());
  for (const PhaseTrajectory& trial : trials) {
    if (trial.players() != n) throw ShapeError("dyadic_table: inconsistent player counts");
    per_trial.push_back(dyadic_matrix(trial));
    sum += per_trial.back();
  }
  const double count = static_cast<double>(trials.size());
  DyadicTable out{sum / count, Eigen::MatrixXd::Zero(n, n)};
  for (const Eigen::MatrixXd& d : per_trial) sum_sq += (d - out.mu).cwiseAbs2();
  out.sigma = (sum_sq / count).cwiseSqrt();
  out.mu.diagonal().setOnes();
  out.sigma.diagonal().setZero();
  return out;
}

SyncReport sync_report(const PhaseTrajectory& trajectory) {
  IndividualSync ind = individual_sync(trajectory);
  SyncReport report;
  report.rho_k = std::move(ind.rho);
  report.phi_bar = std::move(ind.phi_bar);
  report.rho_g_t = group_sync_t(trajectory);
  report.rho_g = report.rho_g_t.mean();
  report.dyad_mu = dyadic_matrix(trajectory);
  report.dyad_sigma = Eigen::MatrixXd::Zero(trajectory.players(), trajectory.players());
  report.trace_start = trajectory.start_time();
  report.trace_dt = trajectory.dt();
  return report;
}

}  // namespace groupsync
