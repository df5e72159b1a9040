#pragma once

#include <cstdint>
#include <limits>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace groupsync {

/// Per-player natural-frequency statistics, rad/s.
class FrequencyProfile {
 public:
  FrequencyProfile(Eigen::VectorXd mu, Eigen::VectorXd sigma);

  Eigen::Index size() const noexcept { return mu_.size(); }
  const Eigen::VectorXd& mu() const noexcept { return mu_; }
  const Eigen::VectorXd& sigma() const noexcept { return sigma_; }

  /// Players relabeled: new player i is old player perm[i].
  FrequencyProfile permuted(const std::vector<Eigen::Index>& perm) const;

 private:
  Eigen::VectorXd mu_;
  Eigen::VectorXd sigma_;
};

/// Resample interval meaning "one draw per trial".
inline constexpr double kPerTrialConstant = std::numeric_limits<double>::infinity();

/// Piecewise-constant omega_k(t) on [0, T]: segment s covers
/// [s*tau, min((s+1)*tau, T)).
class FrequencySignal {
 public:
  FrequencySignal(Eigen::MatrixXd values, double duration, double tau);

  Eigen::Index players() const noexcept { return values_.rows(); }
  Eigen::Index segments() const noexcept { return values_.cols(); }
  double duration() const noexcept { return duration_; }
  double tau() const noexcept { return tau_; }

  /// N x segments, column s holds every player's frequency on segment s.
  const Eigen::MatrixXd& values() const noexcept { return values_; }

  Eigen::Index segment_index(double t) const;

  /// Segment for an integrator stage at time t belonging to a step whose
  /// midpoint is `step_mid`. A stage time sitting on a segment boundary takes
  /// the segment on the midpoint's side.
  Eigen::Index stage_segment(double t, double step_mid) const;

  auto at(double t) const { return values_.col(segment_index(t)); }

 private:
  Eigen::MatrixXd values_;
  double duration_;
  double tau_;
};

/// Group 1 and Group 2 natural-frequency profiles of the seven-player experiments.
std::pair<FrequencyProfile, FrequencyProfile> builtin_profiles();

/// "group1" or "group2"; throws InvalidArgument otherwise.
FrequencyProfile builtin_profile(std::string_view name);

/// Independent N(mu_k, sigma_k^2) draws held on windows of length tau. Draws
/// are taken segment by segment, player by player. Non-positive draws are
/// redrawn.
FrequencySignal sample_frequencies(const FrequencyProfile& profile, double duration,
                                   double tau, std::uint64_t seed);

/// Sample standard deviation (n-1) over mean.
double coefficient_of_variation(const Eigen::Ref<const Eigen::VectorXd>& means);

/// sigma_k / mu_k for 0-based player k.
double individual_cv(const FrequencyProfile& profile, Eigen::Index k);

/// n players with mu_k = base_mean * (1 + cv * z_k), sigma_k = sigma for all k,
/// where z is n equally spaced values standardized to mean 0 and unit sample
/// standard deviation. coefficient_of_variation(mu) == cv exactly.
FrequencyProfile dispersion_profile(double cv, double sigma, Eigen::Index n = 7,
                                    double base_mean = 4.0);

/// Deterministic per-trial seed derived from (master seed, stream, trial).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t trial);

}  // namespace groupsync
