#include "groupsync/harness.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "groupsync/error.hpp"

namespace groupsync {
namespace {

// Runs body(i) for i in [0, n) across hardware threads. Results are written
// by index, so the outcome does not depend on scheduling.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) body(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

SyncReport aggregate_reports(const std::vector<SyncReport>& trials,
                             std::span<const PhaseTrajectory> trajectories) {
  const Eigen::Index n = trials.front().rho_k.size();
  SyncReport out;
  out.rho_k = Eigen::VectorXd::Zero(n);
  out.rho_g_t = Eigen::VectorXd::Zero(trials.front().rho_g_t.size());
  Eigen::VectorXcd phasor = Eigen::VectorXcd::Zero(n);
  for (const SyncReport& r : trials) {
    out.rho_k += r.rho_k;
    out.rho_g_t += r.rho_g_t;
    out.rho_g += r.rho_g;
    for (Eigen::Index k = 0; k < n; ++k) phasor(k) += std::polar(1.0, r.phi_bar(k));
  }
  const double count = static_cast<double>(trials.size());
  out.rho_k /= count;
  out.rho_g_t /= count;
  out.rho_g /= count;
  out.phi_bar = phasor.unaryExpr([](const std::complex<double>& z) { return std::arg(z); }).real();
  DyadicTable table = dyadic_table(trajectories);
  out.dyad_mu = std::move(table.mu);
  out.dyad_sigma = std::move(table.sigma);
  out.trace_start = trials.front().trace_start;
  out.trace_dt = trials.front().trace_dt;
  return out;
}

double population_std(const Eigen::Ref<const Eigen::VectorXd>& v) {
  return std::sqrt((v.array() - v.mean()).square().mean());
}

std::string group_label(std::string_view group) { return group == "group1" ? "G1" : "G2"; }

}  // namespace

std::vector<Topology> paper_topologies(Eigen::Index n) {
  return {{"complete", complete(n)},
          {"ring", ring(n)},
          {"path", ring_minus_edge(n, n)},
          {"star", star(n, std::min<Eigen::Index>(3, n))}};
}

void ExperimentSpec::validate() const {
  if (topologies.empty()) throw ConfigError("topologies", "at least one topology required");
  if (trials < 1) throw ConfigError("trials", "at least one trial required");
  for (const Topology& t : topologies) {
    if (t.adjacency.size() != profile.size()) {
      throw ConfigError("topologies", "topology '" + t.name + "' has " +
                                          std::to_string(t.adjacency.size()) +
                                          " nodes but the profile has " +
                                          std::to_string(profile.size()) + " players");
    }
  }
  trial_config(0).validate(profile.size());
}

TrialConfig ExperimentSpec::trial_config(std::size_t trial) const {
  TrialConfig config;
  config.duration = duration;
  config.dt = dt;
  config.coupling = coupling;
  config.theta0 = theta0;
  config.tau_omega = tau_omega;
  config.seed = derive_seed(master_seed, stream, trial);
  return config;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t n_top = spec.topologies.size();
  const std::size_t jobs = n_top * spec.trials;
  std::vector<std::optional<PhaseTrajectory>> trajectories(jobs);
  std::vector<SyncReport> reports(jobs);
  parallel_for(jobs, [&](std::size_t job) {
    const std::size_t top = job / spec.trials;
    const std::size_t trial = job % spec.trials;
    trajectories[job] =
        integrate_trial(spec.trial_config(trial), spec.topologies[top].adjacency, spec.profile);
    reports[job] = sync_report(*trajectories[job]);
  });

  ExperimentResult result;
  for (std::size_t top = 0; top < n_top; ++top) {
    std::vector<PhaseTrajectory> trajs;
    TopologyResult tr{spec.topologies[top].name, spec.topologies[top].adjacency, {}, {}, 0, 0, 0};
    Eigen::VectorXd rho_g(static_cast<Eigen::Index>(spec.trials));
    for (std::size_t trial = 0; trial < spec.trials; ++trial) {
      const std::size_t job = top * spec.trials + trial;
      trajs.push_back(std::move(*trajectories[job]));
      rho_g(static_cast<Eigen::Index>(trial)) = reports[job].rho_g;
      tr.rho_g_time_std += population_std(reports[job].rho_g_t);
      tr.trials.push_back(std::move(reports[job]));
    }
    tr.aggregate = aggregate_reports(tr.trials, trajs);
    tr.rho_g_mean = rho_g.mean();
    tr.rho_g_trial_std = describe(std::span<const double>(rho_g.data(), rho_g.size())).std;
    tr.rho_g_time_std /= static_cast<double>(spec.trials);
    result.topologies.push_back(std::move(tr));
  }
  return result;
}

const std::vector<TargetCell>& target_table() {
  static const std::vector<TargetCell> table = {
      {"group1", "complete", 1.25, 0.9462, 0.0772, 0.9556, 0.0414},
      {"group1", "ring", 1.25, 0.8193, 0.1048, 0.7952, 0.1532},
      {"group1", "path", 1.25, 0.7446, 0.1309, 0.8661, 0.1173},
      {"group1", "star", 1.25, 0.8730, 0.0993, 0.9285, 0.0753},
      {"group1", "complete", 4.40, 0.9999, 0.0003, 0.9556, 0.0414},
      {"group1", "ring", 4.40, 0.9575, 0.0740, 0.7952, 0.1532},
      {"group1", "path", 4.40, 0.8302, 0.1630, 0.8661, 0.1173},
      {"group1", "star", 4.40, 0.8255, 0.1663, 0.9285, 0.0753},
      {"group2", "complete", 4.40, 0.9999, 0.0005, 0.9559, 0.0508},
      {"group2", "ring", 4.40, 0.8633, 0.1460, 0.8358, 0.1130},
      {"group2", "path", 4.40, 0.7265, 0.2293, 0.7534, 0.1766},
      {"group2", "star", 4.40, 0.8624, 0.1158, 0.9759, 0.0274},
      {"group2", "complete", 1.25, 0.9339, 0.0862, 0.9559, 0.0508},
      {"group2", "ring", 1.25, 0.4799, 0.2155, 0.8358, 0.1130},
      {"group2", "path", 1.25, 0.4756, 0.2061, 0.7534, 0.1766},
      {"group2", "star", 1.25, 0.5450, 0.1749, 0.9759, 0.0274},
  };
  return table;
}

bool ReproductionReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const CellResult& ReproductionReport::cell(std::string_view group, std::string_view topology,
                                           double coupling) const {
  for (const CellResult& c : cells) {
    if (c.target.group == group && c.target.topology == topology &&
        std::abs(c.target.coupling - coupling) < 1e-9) {
      return c;
    }
  }
  throw std::out_of_range("no reproduction cell " + std::string(group) + "/" +
                          std::string(topology));
}

ReproductionReport reproduce_tables(std::uint64_t master_seed, std::size_t repetitions,
                                    std::size_t trials_per_batch) {
  if (repetitions < 1) throw ConfigError("repetitions", "at least one repetition required");
  ReproductionReport report;
  report.repetitions = repetitions;
  report.trials_per_batch = trials_per_batch;
  for (const TargetCell& t : target_table()) report.cells.push_back({t, {}, 0.0, 0.0, 0.0});

  const std::vector<Topology> topologies = paper_topologies();
  for (const std::string group : {"group1", "group2"}) {
    for (const double c : {1.25, 4.40}) {
      for (std::size_t rep = 0; rep < repetitions; ++rep) {
        ExperimentSpec spec{group, builtin_profile(group), topologies};
        spec.coupling = c;
        spec.trials = trials_per_batch;
        spec.master_seed = master_seed;
        spec.stream = rep;
        const ExperimentResult result = run_experiment(spec);
        for (const TopologyResult& tr : result.topologies) {
          for (CellResult& cell : report.cells) {
            if (cell.target.group == group && cell.target.topology == tr.name &&
                std::abs(cell.target.coupling - c) < 1e-9) {
              cell.batch_means.push_back(tr.rho_g_mean);
              cell.time_std += tr.rho_g_time_std / static_cast<double>(repetitions);
            }
          }
        }
      }
    }
  }
  for (CellResult& cell : report.cells) {
    cell.grand_mean = describe(cell.batch_means).mean;
    cell.deviation = cell.grand_mean - cell.target.mean;
  }

  auto within = [&](std::string_view group, std::string_view topo, double c, double tol) {
    const CellResult& cell = report.cell(group, topo, c);
    report.checks.push_back({group_label(group) + " c=" + fmt(c, 2) + " " + std::string(topo) +
                                 " within +-" + fmt(tol, 3) + " of " + fmt(cell.target.mean),
                             std::abs(cell.deviation) <= tol,
                             "grand mean " + fmt(cell.grand_mean)});
  };
  for (const char* topo : {"complete", "ring", "path", "star"}) within("group1", topo, 1.25, 0.07);
  {
    const double cg = report.cell("group1", "complete", 1.25).grand_mean;
    const double sg = report.cell("group1", "star", 1.25).grand_mean;
    const double rg = report.cell("group1", "ring", 1.25).grand_mean;
    const double pg = report.cell("group1", "path", 1.25).grand_mean;
    report.checks.push_back({"G1 c=1.25 ordering complete > star > ring > path",
                             cg > sg && sg > rg && rg > pg,
                             fmt(cg) + " > " + fmt(sg) + " > " + fmt(rg) + " > " + fmt(pg)});
  }
  within("group2", "complete", 4.40, 0.005);
  for (const char* topo : {"ring", "path", "star"}) within("group2", topo, 4.40, 0.07);
  for (const char* topo : {"ring", "path", "star"}) {
    const CellResult& cell = report.cell("group2", topo, 1.25);
    report.checks.push_back({"G2 c=1.25 " + std::string(topo) + " <= 0.65",
                             cell.grand_mean <= 0.65, "grand mean " + fmt(cell.grand_mean)});
  }
  {
    const CellResult& cell = report.cell("group1", "complete", 4.40);
    report.checks.push_back({"G1 c=4.40 complete >= 0.995", cell.grand_mean >= 0.995,
                             "grand mean " + fmt(cell.grand_mean)});
  }
  return report;
}

CalibrationResult calibrate_coupling(const FrequencyProfile& profile,
                                     std::span<const Topology> topologies,
                                     std::span<const double> targets,
                                     const CalibrationOptions& options) {
  if (targets.empty()) throw ConfigError("targets", "at least one target required");
  if (targets.size() != topologies.size()) {
    throw ConfigError("targets", "one target per topology required");
  }
  if (!(options.c_min > 0.0) || !(options.c_max > options.c_min)) {
    throw ConfigError("c_range", "need 0 < c_min < c_max");
  }
  if (options.grid_points < 3) throw ConfigError("grid_points", "at least 3 grid points required");

  ExperimentSpec spec{"inline", profile, {topologies.begin(), topologies.end()}};
  spec.trials = options.trials;
  spec.master_seed = options.master_seed;
  spec.duration = options.duration;
  spec.dt = options.dt;
  spec.tau_omega = options.tau_omega;

  CalibrationResult out;
  auto loss = [&](double c) {
    spec.coupling = c;
    const ExperimentResult r = run_experiment(spec);
    double l = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const double d = r.topologies[i].rho_g_mean - targets[i];
      l += d * d;
    }
    out.loss_curve.emplace_back(c, l);
    return l;
  };

  const std::size_t m = options.grid_points;
  std::vector<double> grid(m);
  std::vector<double> values(m);
  for (std::size_t i = 0; i < m; ++i) {
    grid[i] = options.c_min + (options.c_max - options.c_min) * static_cast<double>(i) /
                                  static_cast<double>(m - 1);
    values[i] = loss(grid[i]);
  }
  const auto best = static_cast<std::size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());

  double lo = grid[best == 0 ? 0 : best - 1];
  double hi = grid[best + 1 == m ? m - 1 : best + 1];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = loss(x1);
  double f2 = loss(x2);
  while (hi - lo > options.tolerance) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = loss(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = loss(x2);
    }
  }
  std::sort(out.loss_curve.begin(), out.loss_curve.end());

  const auto argmin = std::min_element(out.loss_curve.begin(), out.loss_curve.end(),
                                       [](const auto& a, const auto& b) { return a.second < b.second; });
  out.c_star = argmin->first;
  out.loss = argmin->second;

  // Flat region: every c whose loss is indistinguishable from the minimum.
  constexpr double kFlat = 1e-8;
  out.interval = {out.c_star, out.c_star};
  for (const auto& [c, l] : out.loss_curve) {
    if (l - out.loss <= kFlat) {
      out.interval.first = std::min(out.interval.first, c);
      out.interval.second = std::max(out.interval.second, c);
    }
  }
  const double grid_step = (options.c_max - options.c_min) / static_cast<double>(m - 1);
  out.ambiguous = out.interval.second - out.interval.first > grid_step;
  return out;
}

namespace {

StudyResult run_study(std::string name, std::string test,
                      const std::vector<std::pair<std::string, ExperimentSpec>>& scenarios) {
  StudyResult study;
  study.name = std::move(name);
  study.test = std::move(test);
  for (const auto& [label, spec] : scenarios) {
    const ExperimentResult r = run_experiment(spec);
    const Eigen::VectorXd& rho = r.topologies.front().aggregate.rho_k;
    study.labels.push_back(label);
    study.samples.emplace_back(rho.data(), rho.data() + rho.size());
    study.means.push_back(rho.mean());
  }
  study.anova = study.test == "welch" ? welch_anova(study.samples) : one_way_anova(study.samples);
  return study;
}

}  // namespace

bool PredictionReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

PredictionReport prediction_suite(std::uint64_t master_seed, const PredictionOptions& options) {
  auto make_spec = [&](const FrequencyProfile& profile, const AdjacencyMatrix& a,
                       std::uint64_t stream) {
    ExperimentSpec spec{"inline", profile, {{"scenario", a}}};
    spec.coupling = options.coupling;
    spec.trials = options.trials;
    spec.master_seed = master_seed;
    spec.stream = stream;
    spec.duration = options.duration;
    spec.dt = options.dt;
    spec.tau_omega = options.tau_omega;
    return spec;
  };
  constexpr Eigen::Index n = 7;
  PredictionReport report;
  report.master_seed = master_seed;

  std::vector<std::pair<std::string, ExperimentSpec>> scenarios;
  const double cvs[] = {0.08, 0.17, 0.41, 0.62};
  for (std::size_t i = 0; i < 4; ++i) {
    scenarios.emplace_back("cv=" + fmt(cvs[i], 2),
                           make_spec(dispersion_profile(cvs[i], 0.25, n, options.base_mean),
                                     complete(n), 100 + i));
  }
  report.cv_sweep = run_study("cv_sweep", "welch", scenarios);

  scenarios.clear();
  const double sigmas[] = {0.15, 0.25, 0.35, 0.45};
  for (std::size_t i = 0; i < 4; ++i) {
    scenarios.emplace_back("sigma=" + fmt(sigmas[i], 2),
                           make_spec(dispersion_profile(0.17, sigmas[i], n, options.base_mean),
                                     complete(n), 200 + i));
  }
  report.sigma_sweep = run_study("sigma_sweep", "one_way", scenarios);

  const FrequencyProfile base = dispersion_profile(0.17, 0.25, n, options.base_mean);
  scenarios.clear();
  for (Eigen::Index e = 1; e <= n; ++e) {
    scenarios.emplace_back("removed " + std::to_string(e) + "-" + std::to_string(e % n + 1),
                           make_spec(base, ring_minus_edge(n, e), 300 + static_cast<std::uint64_t>(e)));
  }
  report.path_variants = run_study("path_variants", "one_way", scenarios);

  scenarios.clear();
  for (Eigen::Index c = 1; c <= n; ++c) {
    scenarios.emplace_back("center " + std::to_string(c),
                           make_spec(base, star(n, c), 400 + static_cast<std::uint64_t>(c)));
  }
  report.star_variants = run_study("star_variants", "welch", scenarios);

  const auto& m = report.cv_sweep.means;
  const bool decreasing = std::is_sorted(m.rbegin(), m.rend()) &&
                          std::adjacent_find(m.begin(), m.end()) == m.end();
  report.checks.push_back({"cv sweep: mean rho_k strictly decreasing", decreasing,
                           fmt(m[0]) + ", " + fmt(m[1]) + ", " + fmt(m[2]) + ", " + fmt(m[3])});
  auto p_check = [&](const StudyResult& s, bool significant, double alpha) {
    const bool ok = significant ? s.anova.p < alpha : s.anova.p > alpha;
    report.checks.push_back({s.name + ": p " + (significant ? "< " : "> ") + fmt(alpha, 2), ok,
                             "F(" + fmt(s.anova.df1, 0) + "," + fmt(s.anova.df2, 3) +
                                 ")=" + fmt(s.anova.F, 3) + ", p=" + fmt(s.anova.p, 4)});
  };
  p_check(report.cv_sweep, true, 0.01);
  p_check(report.sigma_sweep, false, 0.05);
  p_check(report.path_variants, false, 0.05);
  p_check(report.star_variants, false, 0.05);
  return report;
}

DyadComparison compare_dyads(std::span<const TopologyResult> results) {
  DyadComparison out;
  for (const TopologyResult& r : results) {
    const Eigen::Index n = r.adjacency.size();
    for (Eigen::Index h = 0; h < n; ++h) {
      for (Eigen::Index k = h + 1; k < n; ++k) {
        (r.adjacency.connected(h, k) ? out.connected : out.unconnected)
            .push_back(r.aggregate.dyad_mu(h, k));
      }
    }
  }
  if (out.connected.size() >= 2 && out.unconnected.size() >= 2) {
    out.test = welch_t(out.unconnected, out.connected);
  }
  return out;
}

double trace_std_after(const SyncReport& report, double from_time) {
  const Eigen::Index n = report.rho_g_t.size();
  Eigen::Index begin = 0;
  while (begin < n && report.trace_start + static_cast<double>(begin) * report.trace_dt <
                          from_time - 1e-9) {
    ++begin;
  }
  if (begin >= n) throw InvalidArgument("trace_std_after: no samples after from_time");
  return population_std(report.rho_g_t.segment(begin, n - begin));
}

}  // namespace groupsync
