#include "groupsync/sigproc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "groupsync/error.hpp"

namespace groupsync {
namespace {

constexpr double kPi = std::numbers::pi;

double median(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

std::vector<std::complex<double>> forward_fft(const Eigen::VectorXd& x) {
  std::vector<std::complex<double>> in(x.data(), x.data() + x.size());
  std::vector<std::complex<double>> out;
  Eigen::FFT<double> fft;
  fft.fwd(out, in);
  return out;
}

Eigen::VectorXd demeaned(const Eigen::Ref<const Eigen::VectorXd>& x) {
  return (x.array() - x.mean()).matrix();
}

void require_rate(double fs) {
  if (!(fs > 0.0) || !std::isfinite(fs)) throw InvalidArgument("sampling rate must be positive");
}

}  // namespace

double MarkerSeries::sampling_rate() const {
  if (t.size() != xyz.cols()) throw ShapeError("marker series: t and xyz lengths differ");
  if (t.size() < 2) throw InvalidArgument("marker series needs at least two samples");
  const double span = t(t.size() - 1) - t(0);
  if (!(span > 0.0)) throw InvalidArgument("marker series times must increase");
  const double step = span / static_cast<double>(t.size() - 1);
  for (Eigen::Index i = 1; i < t.size(); ++i) {
    if (std::abs((t(i) - t(i - 1)) - step) >= 1e-9) {
      throw InvalidArgument("marker series is not uniformly sampled");
    }
  }
  return 1.0 / step;
}

DespikeResult despike(const Eigen::Ref<const Eigen::VectorXd>& signal,
                      const DespikeOptions& options) {
  const Eigen::Index n = signal.size();
  if (n < 3) throw InvalidArgument("despike: at least 3 samples required");
  if (!(options.threshold_factor > 0.0)) {
    throw InvalidArgument("despike: threshold_factor must be positive");
  }

  std::vector<double> diff(static_cast<std::size_t>(n - 1));
  std::vector<double> abs_diff(diff.size());
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    diff[i] = signal(i + 1) - signal(i);
    abs_diff[i] = std::abs(diff[i]);
  }
  const double med = median(abs_diff);
  const double threshold =
      med < 1e-12 ? options.absolute_threshold : options.threshold_factor * med;

  std::vector<Eigen::Index> jumps;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (abs_diff[i] > threshold) jumps.push_back(i);
  }

  const auto max_run = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(options.max_spike_fraction * static_cast<double>(n)));
  DespikeResult out{signal, ArrayXb::Constant(n, false)};
  std::size_t p = 0;
  while (p < jumps.size()) {
    const Eigen::Index a = jumps[p];
    std::size_t q = p + 1;
    while (q < jumps.size() && jumps[q] - a <= max_run &&
           std::signbit(diff[jumps[q]]) == std::signbit(diff[a])) {
      ++q;
    }
    if (q < jumps.size() && jumps[q] - a <= max_run) {
      // Jump a leaves the baseline, jump q returns to it.
      out.mask.segment(a + 1, jumps[q] - a).setConstant(true);
      p = q + 1;
      continue;
    }
    if (p == 0 && a + 1 <= max_run) {
      out.mask.head(a + 1).setConstant(true);
    } else if (n - 1 - a <= max_run) {
      out.mask.tail(n - 1 - a).setConstant(true);
    }
    ++p;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (out.mask(i)) out.cleaned(i) = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

Eigen::VectorXd interpolate_gaps(const Eigen::Ref<const Eigen::VectorXd>& signal,
                                 const ArrayXb& gaps) {
  const Eigen::Index n = signal.size();
  if (gaps.size() != n) throw ShapeError("interpolate_gaps: mask length differs from signal");
  if (n == 0 || gaps.all()) throw DegenerateInput("interpolate_gaps: signal has no valid samples");

  Eigen::Index first = 0;
  while (gaps(first)) ++first;
  Eigen::Index last = n - 1;
  while (gaps(last)) --last;
  const double edge_limit = 0.05 * static_cast<double>(n);
  if (static_cast<double>(first) > edge_limit ||
      static_cast<double>(n - 1 - last) > edge_limit) {
    throw InvalidArgument("interpolate_gaps: edge gap longer than 5% of the signal");
  }

  Eigen::VectorXd out = signal;
  out.head(first).setConstant(signal(first));
  out.tail(n - 1 - last).setConstant(signal(last));
  Eigen::Index prev = first;
  for (Eigen::Index i = first + 1; i <= last; ++i) {
    if (gaps(i)) continue;
    if (i - prev > 1) {
      const double span = static_cast<double>(i - prev);
      for (Eigen::Index j = prev + 1; j < i; ++j) {
        const double w = static_cast<double>(j - prev) / span;
        out(j) = (1.0 - w) * signal(prev) + w * signal(i);
      }
    }
    prev = i;
  }
  return out;
}

Eigen::VectorXd interpolate_gaps(const Eigen::Ref<const Eigen::VectorXd>& signal) {
  return interpolate_gaps(signal, signal.array().isNaN());
}

PcaProjection pca_project(const Eigen::Ref<const Eigen::Matrix2Xd>& xy) {
  const Eigen::Index n = xy.cols();
  if (n < 2) throw InvalidArgument("pca_project: at least 2 samples required");
  const Eigen::Vector2d mean = xy.rowwise().mean();
  const Eigen::Matrix2Xd centered = xy.colwise() - mean;
  const Eigen::Matrix2d cov = centered * centered.transpose() / static_cast<double>(n - 1);
  if (!(cov.trace() > 0.0)) throw DegenerateInput("pca_project: zero-variance input");

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  Eigen::Vector2d major = eig.eigenvectors().col(1);
  Eigen::Index largest = 0;
  major.cwiseAbs().maxCoeff(&largest);
  if (major(largest) < 0.0) major = -major;
  const Eigen::Vector2d minor(-major.y(), major.x());

  PcaProjection out;
  out.x_pca = (major.transpose() * centered).transpose();
  out.y_pca = (minor.transpose() * centered).transpose();
  out.direction = major;
  out.variances = Eigen::Vector2d(eig.eigenvalues()(1), eig.eigenvalues()(0));
  return out;
}

Eigen::VectorXcd analytic_signal(const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::Index n = x.size();
  if (n < 1) throw InvalidArgument("analytic_signal: empty input");
  std::vector<std::complex<double>> spectrum = forward_fft(demeaned(x));
  const Eigen::Index half = n / 2;
  for (Eigen::Index k = 1; k < n; ++k) {
    if (k < (n + 1) / 2) {
      spectrum[k] *= 2.0;
    } else if (!(n % 2 == 0 && k == half)) {
      spectrum[k] = 0.0;
    }
  }
  std::vector<std::complex<double>> z;
  Eigen::FFT<double> fft;
  fft.inv(z, spectrum);
  return Eigen::Map<const Eigen::VectorXcd>(z.data(), n);
}

// The outer 10% at each end (the samples outside central_range) get a
// raised-cosine taper before the transform. Without it the jump between the
// last and first sample of the periodic extension leaks into the low bins and
// puts a ripple of several percent on the instantaneous frequency well inside
// the window.
Eigen::VectorXd hilbert_phase(const Eigen::Ref<const Eigen::VectorXd>& x, double fs) {
  require_rate(fs);
  const Eigen::Index n = x.size();
  if (n < 16) throw InvalidArgument("hilbert_phase: at least 16 samples required");
  Eigen::VectorXd y = demeaned(x);
  if (y.cwiseAbs().maxCoeff() == 0.0) {
    throw DegenerateInput("hilbert_phase: phase undefined for a flat signal");
  }
  const Eigen::Index ramp = central_range(n).first;
  for (Eigen::Index i = 0; i < ramp; ++i) {
    const double w = 0.5 * (1.0 - std::cos(kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(ramp)));
    y(i) *= w;
    y(n - 1 - i) *= w;
  }
  const Eigen::VectorXcd z = analytic_signal(y);
  return z.unaryExpr([](const std::complex<double>& v) { return std::arg(v); }).real();
}

Eigen::VectorXd unwrap(const Eigen::Ref<const Eigen::VectorXd>& phase) {
  Eigen::VectorXd out = phase;
  double offset = 0.0;
  for (Eigen::Index i = 1; i < phase.size(); ++i) {
    const double step = phase(i) - phase(i - 1);
    offset -= 2.0 * kPi * std::round(step / (2.0 * kPi));
    out(i) = phase(i) + offset;
  }
  return out;
}

double estimate_frequency_fourier(const Eigen::Ref<const Eigen::VectorXd>& x, double fs) {
  require_rate(fs);
  const Eigen::Index n = x.size();
  if (n < 64) throw InvalidArgument("estimate_frequency_fourier: at least 64 samples required");
  Eigen::VectorXd centered = demeaned(x);
  if (centered.cwiseAbs().maxCoeff() == 0.0) {
    throw DegenerateInput("estimate_frequency_fourier: flat signal has no spectral peak");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    centered(i) *= 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n)));
  }
  const std::vector<std::complex<double>> spectrum = forward_fft(centered);
  const Eigen::Index top = n / 2;
  Eigen::VectorXd mag(top + 1);
  for (Eigen::Index k = 0; k <= top; ++k) mag(k) = std::abs(spectrum[k]);

  Eigen::Index peak = 1;
  mag.segment(1, top).maxCoeff(&peak);
  ++peak;
  if (!(mag(peak) > 0.0)) throw DegenerateInput("estimate_frequency_fourier: no spectral peak");

  double offset = 0.0;
  if (peak > 1 && peak < top && mag(peak - 1) > 0.0 && mag(peak + 1) > 0.0) {
    const double a = std::log(mag(peak - 1));
    const double b = std::log(mag(peak));
    const double c = std::log(mag(peak + 1));
    const double denom = a - 2.0 * b + c;
    if (denom < 0.0) offset = 0.5 * (a - c) / denom;
  }
  return 2.0 * kPi * (static_cast<double>(peak) + offset) * fs / static_cast<double>(n);
}

HilbertFrequency estimate_frequency_hilbert(const Eigen::Ref<const Eigen::VectorXd>& x, double fs) {
  const Eigen::VectorXd phase = unwrap(hilbert_phase(x, fs));
  const Eigen::Index n = phase.size();
  HilbertFrequency out;
  out.omega.resize(n);
  out.omega(0) = (phase(1) - phase(0)) * fs;
  out.omega(n - 1) = (phase(n - 1) - phase(n - 2)) * fs;
  for (Eigen::Index i = 1; i + 1 < n; ++i) out.omega(i) = 0.5 * (phase(i + 1) - phase(i - 1)) * fs;
  const auto [begin, end] = central_range(n);
  out.mean = out.omega.segment(begin, end - begin).mean();
  return out;
}

MarkerPhase extract_phase(const MarkerSeries& series, const DespikeOptions& options) {
  const double fs = series.sampling_rate();
  const Eigen::Index n = series.t.size();
  MarkerPhase out;
  out.mask = ArrayXb::Constant(n, false);
  for (Eigen::Index axis = 0; axis < 3; ++axis) {
    const Eigen::VectorXd row = series.xyz.row(axis).transpose();
    out.mask = out.mask || despike(row, options).mask;
  }
  out.cleaned.resize(3, n);
  for (Eigen::Index axis = 0; axis < 3; ++axis) {
    const Eigen::VectorXd row = series.xyz.row(axis).transpose();
    out.cleaned.row(axis) = interpolate_gaps(row, out.mask).transpose();
  }
  out.pca = pca_project(out.cleaned.topRows(2));
  out.phase = unwrap(hilbert_phase(out.pca.x_pca, fs));
  out.omega_fourier = estimate_frequency_fourier(out.pca.x_pca, fs);
  out.omega_hilbert = estimate_frequency_hilbert(out.pca.x_pca, fs).mean;
  return out;
}

std::pair<Eigen::Index, Eigen::Index> central_range(Eigen::Index n, double fraction) {
  const auto drop = static_cast<Eigen::Index>(std::floor(0.5 * (1.0 - fraction) * static_cast<double>(n)));
  return {drop, n - drop};
}

}  // namespace groupsync
