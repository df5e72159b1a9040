#pragma once

// Independent reference implementations, written with plain loops over
// std::vector so they share nothing with the Eigen code under test.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using Series = std::vector<std::vector<double>>;  // [player][sample]
using cd = std::complex<double>;

inline cd unit(double a) { return {std::cos(a), std::sin(a)}; }

inline double wrap(double a) {
  const double two_pi = 2.0 * M_PI;
  double w = std::fmod(a, two_pi);
  if (w > M_PI) w -= two_pi;
  if (w <= -M_PI) w += two_pi;
  return w;
}

inline double cluster_phase(const Series& th, std::size_t i) {
  cd s = 0.0;
  for (const auto& row : th) s += unit(row[i]);
  s /= static_cast<double>(th.size());
  return std::atan2(s.imag(), s.real());
}

struct Individual {
  std::vector<double> rho, phi_bar;
};

inline Individual individual(const Series& th) {
  const std::size_t n = th.size(), m = th[0].size();
  Individual out;
  for (std::size_t k = 0; k < n; ++k) {
    cd acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) acc += unit(wrap(th[k][i] - cluster_phase(th, i)));
    acc /= static_cast<double>(m);
    out.rho.push_back(std::abs(acc));
    out.phi_bar.push_back(std::atan2(acc.imag(), acc.real()));
  }
  return out;
}

inline std::vector<double> group_t(const Series& th) {
  const Individual ind = individual(th);
  const std::size_t n = th.size(), m = th[0].size();
  std::vector<double> out;
  for (std::size_t i = 0; i < m; ++i) {
    const double q = cluster_phase(th, i);
    cd acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += unit(wrap(th[k][i] - q) - ind.phi_bar[k]);
    out.push_back(std::abs(acc) / static_cast<double>(n));
  }
  return out;
}

inline double group(const Series& th) {
  const auto g = group_t(th);
  double s = 0.0;
  for (double v : g) s += v;
  return s / static_cast<double>(g.size());
}

inline double dyad(const Series& th, std::size_t h, std::size_t k) {
  cd acc = 0.0;
  for (std::size_t i = 0; i < th[0].size(); ++i) acc += unit(th[h][i] - th[k][i]);
  return std::abs(acc / static_cast<double>(th[0].size()));
}

// F(d1, d2) upper tail by composite Simpson on the density, after the
// substitution x = F / (1 + F) which maps [f, inf) to a finite interval.
inline double f_upper_tail(double f, double d1, double d2) {
  const double lbeta = std::lgamma(d1 / 2) + std::lgamma(d2 / 2) - std::lgamma((d1 + d2) / 2);
  auto density = [&](double x) {  // density of F at F = x / (1 - x), times dF/dx
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double F = x / (1.0 - x);
    const double logp = 0.5 * d1 * std::log(d1 / d2) + (0.5 * d1 - 1.0) * std::log(F) -
                        0.5 * (d1 + d2) * std::log1p(d1 * F / d2) - lbeta;
    return std::exp(logp) / ((1.0 - x) * (1.0 - x));
  };
  const double a = f / (1.0 + f), b = 1.0;
  const int n = 200000;
  const double h = (b - a) / n;
  double s = density(a) + density(b);
  for (int i = 1; i < n; ++i) s += density(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline Series random_series(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  Series th(n, std::vector<double>(m));
  for (auto& row : th)
    for (double& v : row) v = u(rng);
  return th;
}

}  // namespace oracle
