#include "groupsync/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "groupsync/error.hpp"

namespace groupsync {

FrequencyProfile::FrequencyProfile(Eigen::VectorXd mu, Eigen::VectorXd sigma)
    : mu_(std::move(mu)), sigma_(std::move(sigma)) {
  if (mu_.size() == 0) throw InvalidArgument("frequency profile must be nonempty");
  if (mu_.size() != sigma_.size()) {
    throw ShapeError("mu and sigma must have the same length");
  }
  if (!mu_.allFinite() || !sigma_.allFinite() || (mu_.array() <= 0.0).any() ||
      (sigma_.array() < 0.0).any()) {
    throw InvalidArgument("profile needs finite mu > 0 and sigma >= 0");
  }
}

FrequencyProfile FrequencyProfile::permuted(const std::vector<Eigen::Index>& perm) const {
  if (static_cast<Eigen::Index>(perm.size()) != size()) {
    throw ShapeError("permutation length must equal player count");
  }
  Eigen::VectorXd mu(size()), sigma(size());
  for (Eigen::Index i = 0; i < size(); ++i) {
    mu(i) = mu_(perm[i]);
    sigma(i) = sigma_(perm[i]);
  }
  return FrequencyProfile(std::move(mu), std::move(sigma));
}

FrequencySignal::FrequencySignal(Eigen::MatrixXd values, double duration, double tau)
    : values_(std::move(values)), duration_(duration), tau_(tau) {
  if (!(duration_ > 0.0) || !(tau_ > 0.0)) {
    throw InvalidArgument("frequency signal needs T > 0 and tau > 0");
  }
  if (values_.cols() < 1 || !values_.allFinite()) {
    throw InvalidArgument("frequency signal needs at least one finite segment");
  }
}

Eigen::Index FrequencySignal::segment_index(double t) const {
  if (std::isinf(tau_)) return 0;
  const auto s = static_cast<Eigen::Index>(std::floor(t / tau_));
  return std::clamp<Eigen::Index>(s, 0, segments() - 1);
}

Eigen::Index FrequencySignal::stage_segment(double t, double step_mid) const {
  if (std::isinf(tau_)) return 0;
  const double boundary = std::round(t / tau_) * tau_;
  if (std::abs(t - boundary) <= 1e-9 * tau_) {
    const auto b = static_cast<Eigen::Index>(std::llround(t / tau_));
    const Eigen::Index s = step_mid >= boundary ? b : b - 1;
    return std::clamp<Eigen::Index>(s, 0, segments() - 1);
  }
  return segment_index(t);
}

std::pair<FrequencyProfile, FrequencyProfile> builtin_profiles() {
  Eigen::VectorXd mu1(7), sd1(7), mu2(7), sd2(7);
  mu1 << 4.2568, 4.3143, 4.6691, 4.2951, 4.3623, 2.9433, 4.2184;
  sd1 << 0.3941, 0.3492, 0.3999, 0.3543, 0.3406, 0.6609, 0.3314;
  mu2 << 2.7151, 2.9299, 4.0344, 2.1476, 3.9117, 3.7429, 3.2827;
  sd2 << 0.0741, 0.1525, 0.1035, 0.1023, 0.1085, 0.2309, 0.2911;
  return {FrequencyProfile(mu1, sd1), FrequencyProfile(mu2, sd2)};
}

FrequencyProfile builtin_profile(std::string_view name) {
  auto [g1, g2] = builtin_profiles();
  if (name == "group1") return g1;
  if (name == "group2") return g2;
  throw InvalidArgument("unknown builtin profile '" + std::string(name) + "'");
}

FrequencySignal sample_frequencies(const FrequencyProfile& profile, double duration,
                                   double tau, std::uint64_t seed) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw InvalidArgument("sample_frequencies: duration must be positive");
  }
  if (!(tau > 0.0)) throw InvalidArgument("sample_frequencies: tau must be positive");

  Eigen::Index segments = 1;
  if (!std::isinf(tau)) {
    // Tolerate T/tau landing a hair above an integer.
    segments = std::max<Eigen::Index>(
        1, static_cast<Eigen::Index>(std::ceil(duration / tau - 1e-9)));
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  const Eigen::Index n = profile.size();
  Eigen::MatrixXd values(n, segments);
  for (Eigen::Index s = 0; s < segments; ++s) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double mu = profile.mu()(k);
      const double sigma = profile.sigma()(k);
      double w = mu + sigma * unit(rng);
      while (w <= 0.0) w = mu + sigma * unit(rng);
      values(k, s) = w;
    }
  }
  return FrequencySignal(std::move(values), duration, tau);
}

double coefficient_of_variation(const Eigen::Ref<const Eigen::VectorXd>& means) {
  if (means.size() == 0) throw InvalidArgument("coefficient_of_variation: empty input");
  const double mean = means.mean();
  if (mean == 0.0) throw DegenerateInput("coefficient_of_variation: zero mean");
  if (means.size() == 1) return 0.0;
  const double ss = (means.array() - mean).square().sum();
  return std::sqrt(ss / static_cast<double>(means.size() - 1)) / mean;
}

double individual_cv(const FrequencyProfile& profile, Eigen::Index k) {
  if (k < 0 || k >= profile.size()) {
    throw std::out_of_range("individual_cv: player index " + std::to_string(k));
  }
  return profile.sigma()(k) / profile.mu()(k);
}

FrequencyProfile dispersion_profile(double cv, double sigma, Eigen::Index n, double base_mean) {
  if (n < 2) throw InvalidArgument("dispersion_profile: n >= 2 required");
  if (!(cv >= 0.0) || !(sigma >= 0.0) || !(base_mean > 0.0)) {
    throw InvalidArgument("dispersion_profile: cv, sigma >= 0 and base_mean > 0 required");
  }
  Eigen::VectorXd z = Eigen::VectorXd::LinSpaced(n, -1.0, 1.0);
  z /= std::sqrt(z.squaredNorm() / static_cast<double>(n - 1));
  Eigen::VectorXd mu = base_mean * (1.0 + cv * z.array()).matrix();
  if ((mu.array() <= 0.0).any()) {
    throw InvalidArgument("dispersion_profile: cv too large, non-positive frequency");
  }
  return FrequencyProfile(std::move(mu), Eigen::VectorXd::Constant(n, sigma));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace groupsync
