#include "groupsync/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "groupsync/error.hpp"

namespace groupsync {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lentz's method for the continued fraction of I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

struct GroupSums {
  std::vector<double> mean;
  std::vector<double> var;
  std::vector<double> n;
  double grand_mean = 0.0;
  double ss_between = 0.0;
  double ss_within = 0.0;
  double total = 0.0;
  bool equal_means = false;
};

GroupSums summarize(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw InvalidArgument("ANOVA needs at least two groups");
  GroupSums s;
  double sum = 0.0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw InvalidArgument("ANOVA needs at least two samples per group");
    const Description d = describe(g);
    s.mean.push_back(d.mean);
    s.var.push_back(d.std * d.std);
    s.n.push_back(static_cast<double>(d.count));
    sum += d.mean * static_cast<double>(d.count);
    s.total += static_cast<double>(d.count);
  }
  s.grand_mean = sum / s.total;
  s.equal_means = std::all_of(s.mean.begin(), s.mean.end(),
                              [&](double m) { return m == s.mean.front(); });
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (!s.equal_means) s.ss_between += s.n[i] * (s.mean[i] - s.grand_mean) * (s.mean[i] - s.grand_mean);
    for (double v : groups[i]) s.ss_within += (v - s.mean[i]) * (v - s.mean[i]);
  }
  return s;
}

double eta_squared(const GroupSums& s) {
  const double ss_total = s.ss_between + s.ss_within;
  return ss_total > 0.0 ? s.ss_between / ss_total : 0.0;
}

}  // namespace

Description describe(std::span<const double> samples) {
  if (samples.empty()) throw InvalidArgument("describe: empty input");
  Description d;
  d.count = samples.size();
  d.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(d.count);
  if (d.count >= 2) {
    double ss = 0.0;
    for (double v : samples) ss += (v - d.mean) * (v - d.mean);
    d.std = std::sqrt(ss / static_cast<double>(d.count - 1));
  }
  return d;
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("incomplete_beta: a, b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_upper_tail(double f, double df1, double df2) {
  if (!(df1 > 0.0) || !(df2 > 0.0)) throw InvalidArgument("f_upper_tail: df must be positive");
  if (std::isnan(f)) throw InvalidArgument("f_upper_tail: F is NaN");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return incomplete_beta(0.5 * df2, 0.5 * df1, df2 / (df2 + df1 * f));
}

double t_two_sided(double t, double df) {
  if (!(df > 0.0)) throw InvalidArgument("t_two_sided: df must be positive");
  if (std::isnan(t)) throw InvalidArgument("t_two_sided: t is NaN");
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups) {
  const GroupSums s = summarize(groups);
  AnovaResult r;
  r.df1 = static_cast<double>(groups.size()) - 1.0;
  r.df2 = s.total - static_cast<double>(groups.size());
  r.eta_sq = eta_squared(s);
  if (s.ss_between == 0.0) {
    r.F = 0.0;
    r.p = 1.0;
  } else if (s.ss_within == 0.0) {
    r.F = kInf;
    r.p = 0.0;
  } else {
    r.F = (s.ss_between / r.df1) / (s.ss_within / r.df2);
    r.p = f_upper_tail(r.F, r.df1, r.df2);
  }
  return r;
}

AnovaResult welch_anova(const std::vector<std::vector<double>>& groups) {
  const GroupSums s = summarize(groups);
  const double k = static_cast<double>(groups.size());
  std::vector<double> w(groups.size());
  double w_sum = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (!(s.var[i] > 0.0)) throw DegenerateInput("welch_anova: zero-variance group");
    w[i] = s.n[i] / s.var[i];
    w_sum += w[i];
  }
  double weighted_mean = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i) weighted_mean += w[i] * s.mean[i];
  weighted_mean /= w_sum;

  double between = 0.0;
  double lambda = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (!s.equal_means) between += w[i] * (s.mean[i] - weighted_mean) * (s.mean[i] - weighted_mean);
    const double r = 1.0 - w[i] / w_sum;
    lambda += r * r / (s.n[i] - 1.0);
  }
  AnovaResult r;
  r.df1 = k - 1.0;
  r.df2 = (k * k - 1.0) / (3.0 * lambda);
  r.F = (between / (k - 1.0)) / (1.0 + 2.0 * (k - 2.0) * lambda / (k * k - 1.0));
  r.p = f_upper_tail(r.F, r.df1, r.df2);
  r.eta_sq = eta_squared(s);
  return r;
}

TTestResult welch_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw InvalidArgument("welch_t: two samples per side required");
  const Description da = describe(a);
  const Description db = describe(b);
  const double sa = da.std * da.std / static_cast<double>(da.count);
  const double sb = db.std * db.std / static_cast<double>(db.count);
  const double diff = da.mean - db.mean;
  TTestResult r;
  if (sa + sb == 0.0) {
    r.df = static_cast<double>(da.count + db.count - 2);
    r.t = diff == 0.0 ? 0.0 : std::copysign(kInf, diff);
    r.p = diff == 0.0 ? 1.0 : 0.0;
    return r;
  }
  r.t = diff / std::sqrt(sa + sb);
  r.df = (sa + sb) * (sa + sb) /
         (sa * sa / static_cast<double>(da.count - 1) + sb * sb / static_cast<double>(db.count - 1));
  r.p = t_two_sided(r.t, r.df);
  return r;
}

TTestResult student_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw InvalidArgument("student_t: two samples per side required");
  const Description da = describe(a);
  const Description db = describe(b);
  const double na = static_cast<double>(da.count);
  const double nb = static_cast<double>(db.count);
  TTestResult r;
  r.df = na + nb - 2.0;
  const double pooled = ((na - 1.0) * da.std * da.std + (nb - 1.0) * db.std * db.std) / r.df;
  const double diff = da.mean - db.mean;
  if (pooled == 0.0) {
    r.t = diff == 0.0 ? 0.0 : std::copysign(kInf, diff);
    r.p = diff == 0.0 ? 1.0 : 0.0;
    return r;
  }
  r.t = diff / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  r.p = t_two_sided(r.t, r.df);
  return r;
}

}  // namespace groupsync
