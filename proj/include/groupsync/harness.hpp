#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "groupsync/dynamics.hpp"
#include "groupsync/ensemble.hpp"
#include "groupsync/graphs.hpp"
#include "groupsync/metrics.hpp"
#include "groupsync/stats.hpp"

namespace groupsync {

struct Topology {
  std::string name;
  AdjacencyMatrix adjacency;
};

/// Complete, ring, path (edge 7-1 removed) and star (center 3) over n players.
std::vector<Topology> paper_topologies(Eigen::Index n = 7);

struct ExperimentSpec {
  ExperimentSpec(std::string name, FrequencyProfile p, std::vector<Topology> tops = {})
      : profile_name(std::move(name)), profile(std::move(p)), topologies(std::move(tops)) {}

  std::string profile_name;  ///< "group1", "group2" or "inline"
  FrequencyProfile profile;
  std::vector<Topology> topologies;
  double coupling = 0.0;
  std::size_t trials = 10;
  std::uint64_t master_seed = 1;
  /// Seed stream; batches of one cell use distinct streams.
  std::uint64_t stream = 0;
  double duration = 30.0;
  double dt = 0.01;
  std::optional<double> tau_omega;
  Eigen::VectorXd theta0;
  std::string output_dir;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  TrialConfig trial_config(std::size_t trial) const;
};

struct TopologyResult {
  std::string name;
  AdjacencyMatrix adjacency;
  std::vector<SyncReport> trials;
  /// rho_k, rho_g_t: means over trials; phi_bar: circular mean over trials;
  /// dyad_mu / dyad_sigma: dyadic_table over trials.
  SyncReport aggregate;
  double rho_g_mean = 0.0;
  double rho_g_trial_std = 0.0;  ///< sample std of the per-trial rho_g
  double rho_g_time_std = 0.0;   ///< per-trial std of rho_g(t) over time, averaged
};

struct ExperimentResult {
  std::vector<TopologyResult> topologies;
};

/// Every topology sees the same per-trial seeds derive_seed(master_seed,
/// stream, trial).
ExperimentResult run_experiment(const ExperimentSpec& spec);

struct TargetCell {
  std::string group;     ///< "group1" / "group2"
  std::string topology;  ///< "complete" / "ring" / "path" / "star"
  double coupling;
  double mean;  ///< simulated mu(rho_g)
  double std;   ///< simulated sigma(rho_g) over time
  double experimental_mean;  ///< commentary only, never a pass/fail target
  double experimental_std;
};

/// Simulation columns of the group synchronisation tables, both couplings.
const std::vector<TargetCell>& target_table();

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CellResult {
  TargetCell target;
  std::vector<double> batch_means;
  double grand_mean = 0.0;
  double deviation = 0.0;  ///< grand_mean - target.mean
  double time_std = 0.0;
};

struct ReproductionReport {
  std::size_t repetitions = 0;
  std::size_t trials_per_batch = 10;
  std::vector<CellResult> cells;
  std::vector<Check> checks;
  bool passed() const;
  const CellResult& cell(std::string_view group, std::string_view topology, double coupling) const;
};

/// All 16 (group x topology x c) cells, `repetitions` batches of
/// `trials_per_batch` trials each, checked against the acceptance tolerances.
ReproductionReport reproduce_tables(std::uint64_t master_seed, std::size_t repetitions,
                                    std::size_t trials_per_batch = 10);

struct CalibrationOptions {
  double c_min = 0.25;
  double c_max = 8.0;
  std::size_t grid_points = 16;
  double tolerance = 1e-3;
  std::size_t trials = 10;
  std::uint64_t master_seed = 1;
  double duration = 30.0;
  double dt = 0.01;
  std::optional<double> tau_omega;
};

struct CalibrationResult {
  double c_star = 0.0;
  double loss = 0.0;
  std::vector<std::pair<double, double>> loss_curve;  ///< (c, L(c)), ascending c
  bool ambiguous = false;
  std::pair<double, double> interval;  ///< where L is within tolerance of its minimum
};

/// Minimizes L(c) = sum_topologies (mean rho_g(c) - target)^2: coarse grid,
/// then golden-section on the bracket around the best grid point. Seeds are
/// fixed across c.
CalibrationResult calibrate_coupling(const FrequencyProfile& profile,
                                     std::span<const Topology> topologies,
                                     std::span<const double> targets,
                                     const CalibrationOptions& options = {});

struct StudyResult {
  std::string name;
  std::string test;  ///< "welch" or "one_way"
  std::vector<std::string> labels;
  /// Per scenario: rho_k averaged over trials, one sample per node.
  std::vector<std::vector<double>> samples;
  std::vector<double> means;
  AnovaResult anova;
};

struct PredictionOptions {
  std::size_t trials = 10;
  double coupling = 1.0;
  double duration = 30.0;
  double dt = 0.01;
  std::optional<double> tau_omega;
  double base_mean = 4.0;
};

struct PredictionReport {
  std::uint64_t master_seed = 0;
  StudyResult cv_sweep;
  StudyResult sigma_sweep;
  StudyResult path_variants;
  StudyResult star_variants;
  std::vector<Check> checks;
  bool passed() const;
};

PredictionReport prediction_suite(std::uint64_t master_seed, const PredictionOptions& options = {});

struct DyadComparison {
  std::vector<double> connected;
  std::vector<double> unconnected;
  TTestResult test;  ///< welch_t(unconnected, connected)
};

/// Pools rho_mu,hk (h < k) of every topology into connected / unconnected sets.
DyadComparison compare_dyads(std::span<const TopologyResult> results);

/// Population std of rho_g(t) restricted to t >= from_time.
double trace_std_after(const SyncReport& report, double from_time);

}  // namespace groupsync
