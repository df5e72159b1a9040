#pragma once

#include <utility>

#include <Eigen/Dense>

namespace groupsync {

using ArrayXb = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// One marker's (x, y, z) trajectory, uniformly sampled.
struct MarkerSeries {
  Eigen::VectorXd t;    ///< sample times, s
  Eigen::Matrix3Xd xyz; ///< mm

  /// Checks shapes and uniform sampling; returns the sampling rate in Hz.
  double sampling_rate() const;
};

struct DespikeOptions {
  double threshold_factor = 5.0;
  /// Jump threshold used when the median successive difference is below 1e-12.
  double absolute_threshold = 1e-6;
  /// Longest run (fraction of samples) that may be masked as one spike.
  double max_spike_fraction = 0.05;
};

struct DespikeResult {
  Eigen::VectorXd cleaned;  ///< input with masked samples set to NaN
  ArrayXb mask;             ///< true where a sample was removed
};

/// A jump is a successive difference above threshold_factor times the median
/// absolute successive difference. Jumps are paired with the next jump of
/// opposite sign; the samples between them are masked.
DespikeResult despike(const Eigen::Ref<const Eigen::VectorXd>& signal,
                      const DespikeOptions& options = {});

/// Fills NaN samples: linear across interior gaps, nearest value at the edges.
/// Edge gaps may cover at most 5% of the samples.
Eigen::VectorXd interpolate_gaps(const Eigen::Ref<const Eigen::VectorXd>& signal);

/// Same, with gaps given by a mask instead of NaNs.
Eigen::VectorXd interpolate_gaps(const Eigen::Ref<const Eigen::VectorXd>& signal,
                                 const ArrayXb& gaps);

struct PcaProjection {
  Eigen::VectorXd x_pca;      ///< scores on the major axis
  Eigen::VectorXd y_pca;      ///< scores on the minor axis
  Eigen::Vector2d direction;  ///< unit major axis, largest |component| positive
  Eigen::Vector2d variances;  ///< descending eigenvalues of the sample covariance
};

/// Mean-centered projection of planar samples onto the eigenvectors of their
/// 2x2 sample covariance.
PcaProjection pca_project(const Eigen::Ref<const Eigen::Matrix2Xd>& xy);

/// Discrete analytic signal of the mean-removed input (one-sided spectrum
/// doubling over the whole window).
Eigen::VectorXcd analytic_signal(const Eigen::Ref<const Eigen::VectorXd>& x);

/// Wrapped instantaneous phase in [-pi, pi]. A sine has phase omega t - pi/2.
/// The mean-removed input is tapered over the samples outside central_range
/// before the analytic signal is formed, so only central phases are accurate.
Eigen::VectorXd hilbert_phase(const Eigen::Ref<const Eigen::VectorXd>& x, double fs);

Eigen::VectorXd unwrap(const Eigen::Ref<const Eigen::VectorXd>& phase);

/// Fundamental angular frequency (rad/s) from the largest nonzero-frequency
/// bin of the Hann-windowed spectrum, refined by a 3-bin quadratic fit on
/// log-magnitude.
double estimate_frequency_fourier(const Eigen::Ref<const Eigen::VectorXd>& x, double fs);

struct HilbertFrequency {
  Eigen::VectorXd omega;  ///< instantaneous angular frequency, rad/s
  double mean = 0.0;      ///< average over the central 80% of samples
};

/// Central-difference derivative of the unwrapped Hilbert phase.
HilbertFrequency estimate_frequency_hilbert(const Eigen::Ref<const Eigen::VectorXd>& x, double fs);

struct MarkerPhase {
  Eigen::Matrix3Xd cleaned;  ///< despiked and interpolated coordinates
  ArrayXb mask;              ///< union of the per-axis spike masks
  PcaProjection pca;         ///< of the cleaned (x, y) plane; z is dropped
  Eigen::VectorXd phase;     ///< unwrapped Hilbert phase of x_pca, rad
  double omega_fourier = 0.0;
  double omega_hilbert = 0.0;
};

/// despike -> interpolate_gaps -> pca_project -> hilbert_phase on one marker.
MarkerPhase extract_phase(const MarkerSeries& series, const DespikeOptions& options = {});

/// [begin, end) of the central `fraction` of n samples.
std::pair<Eigen::Index, Eigen::Index> central_range(Eigen::Index n, double fraction = 0.8);

}  // namespace groupsync
