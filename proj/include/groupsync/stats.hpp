#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace groupsync {

struct Description {
  double mean = 0.0;
  double std = 0.0;  ///< sample (n-1) standard deviation; 0 when count == 1
  std::size_t count = 0;
};

Description describe(std::span<const double> samples);

struct AnovaResult {
  double F = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
  double p = 1.0;
  double eta_sq = 0.0;  ///< SS_between / SS_total
};

/// Fixed-effects one-way ANOVA.
AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups);

/// Welch's heteroscedastic one-way ANOVA with fractional df2. eta_sq is the
/// classical SS_between / SS_total.
AnovaResult welch_anova(const std::vector<std::vector<double>>& groups);

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  ///< two-sided
};

/// Welch's unequal-variance t test of mean(a) - mean(b).
TTestResult welch_t(std::span<const double> a, std::span<const double> b);

/// Pooled-variance Student t test.
TTestResult student_t(std::span<const double> a, std::span<const double> b);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// P(F > f) for F(df1, df2).
double f_upper_tail(double f, double df1, double df2);

/// P(|T| > |t|) for Student t with df degrees of freedom.
double t_two_sided(double t, double df);

}  // namespace groupsync
