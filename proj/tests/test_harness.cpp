#include <doctest.h>

#include <cmath>

#include "groupsync/error.hpp"
#include "groupsync/harness.hpp"
#include "groupsync/io.hpp"

using namespace groupsync;

namespace {

ExperimentSpec small_spec(const std::string& group, double c, std::size_t trials) {
  ExperimentSpec spec{group, builtin_profile(group), paper_topologies()};
  spec.coupling = c;
  spec.trials = trials;
  return spec;
}

}  // namespace

TEST_CASE("paper topologies") {
  const auto t = paper_topologies();
  REQUIRE(t.size() == 4);
  CHECK(t[0].name == "complete");
  CHECK(t[2].adjacency == ring_minus_edge(7, 7));
  CHECK(t[3].adjacency.degrees()(2) == 6);
}

TEST_CASE("identical oscillators stay synchronised in every topology") {
  ExperimentSpec spec{"inline", FrequencyProfile(Eigen::VectorXd::Constant(7, 3.5), Eigen::VectorXd::Zero(7)),
                      paper_topologies()};
  spec.coupling = 0.7;
  spec.trials = 1;
  for (const TopologyResult& r : run_experiment(spec).topologies) CHECK(r.rho_g_mean == doctest::Approx(1.0));
}

TEST_CASE("same spec, same bytes") {
  const ExperimentSpec spec = small_spec("group2", 4.4, 3);
  CHECK(io::to_json(run_experiment(spec)).dump() == io::to_json(run_experiment(spec)).dump());
  ExperimentSpec other = spec;
  other.master_seed = 2;
  CHECK(io::to_json(run_experiment(spec)).dump() != io::to_json(run_experiment(other)).dump());
}

TEST_CASE("aggregates") {
  const ExperimentResult r = run_experiment(small_spec("group1", 1.25, 4));
  for (const TopologyResult& t : r.topologies) {
    REQUIRE(t.trials.size() == 4);
    double m = 0;
    for (const SyncReport& s : t.trials) m += s.rho_g;
    CHECK(t.rho_g_mean == doctest::Approx(m / 4));
    CHECK(t.aggregate.rho_g == doctest::Approx(t.rho_g_mean));
    CHECK(t.aggregate.dyad_mu.rows() == 7);
    CHECK((t.aggregate.dyad_sigma.array() >= 0).all());
    CHECK(t.rho_g_trial_std >= 0);
  }
}

TEST_CASE("configuration errors name the field") {
  auto field_of = [](const ExperimentSpec& s) {
    try {
      s.validate();
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("none");
  };
  ExperimentSpec s = small_spec("group1", 1.0, 1);
  CHECK(field_of(s) == "none");
  s.trials = 0;
  CHECK(field_of(s) == "trials");
  s = small_spec("group1", 1.0, 1);
  s.topologies.push_back({"tiny", ring(5)});
  CHECK(field_of(s) == "topologies");
  s = small_spec("group1", 1.0, 1);
  s.dt = 0.007;
  CHECK(field_of(s) == "dt");
  s = small_spec("group1", -1.0, 1);
  CHECK(field_of(s) == "c");
  s = small_spec("group1", 1.0, 1);
  s.topologies.clear();
  CHECK(field_of(s) == "topologies");
}

TEST_CASE("ring and path traces stay noisier than the complete graph") {
  // Group 2 at c = 4.40: over the final 15 s rho_g(t) keeps fluctuating on the
  // ring and the path while the complete graph has settled.
  const ExperimentResult r = run_experiment(small_spec("group2", 4.4, 10));
  for (std::size_t trial = 0; trial < 10; ++trial) {
    const double complete_std = trace_std_after(r.topologies[0].trials[trial], 15.0);
    CAPTURE(trial);
    CHECK(trace_std_after(r.topologies[1].trials[trial], 15.0) > complete_std);
    CHECK(trace_std_after(r.topologies[2].trials[trial], 15.0) > complete_std);
  }
  CHECK_THROWS(trace_std_after(r.topologies[0].trials[0], 31.0));
}

TEST_CASE("frequency, coupling and time scale together") {
  const double lambda = 2.0;
  const FrequencyProfile base = dispersion_profile(0.17, 0.0);
  const FrequencyProfile scaled(lambda * base.mu(), base.sigma());
  CHECK(coefficient_of_variation(scaled.mu()) == doctest::Approx(coefficient_of_variation(base.mu())));
  for (const Topology& t : paper_topologies()) {
    ExperimentSpec a{"inline", base, {t}};
    a.coupling = 1.0;
    a.trials = 1;
    ExperimentSpec b{"inline", scaled, {t}};
    b.coupling = lambda;
    b.trials = 1;
    b.duration = 30.0 / lambda;
    b.dt = 0.01 / lambda;
    const Eigen::VectorXd ra = run_experiment(a).topologies[0].aggregate.rho_k;
    const Eigen::VectorXd rb = run_experiment(b).topologies[0].aggregate.rho_k;
    CAPTURE(t.name);
    CHECK((ra - rb).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("dyad comparison pools pairs by connection") {
  const ExperimentResult r = run_experiment(small_spec("group1", 1.25, 2));
  const DyadComparison d = compare_dyads(r.topologies);
  CHECK(d.connected.size() == 21 + 7 + 6 + 6);
  CHECK(d.unconnected.size() == 0 + 14 + 15 + 15);
}

TEST_CASE("flat loss is reported as ambiguous") {
  const FrequencyProfile same(Eigen::VectorXd::Constant(7, 4.0), Eigen::VectorXd::Zero(7));
  const std::vector<Topology> tops{{"complete", complete(7)}};
  const std::vector<double> targets{1.0};
  CalibrationOptions o;
  o.trials = 1;
  o.grid_points = 5;
  o.duration = 2.0;
  const CalibrationResult r = calibrate_coupling(same, tops, targets, o);
  CHECK(r.ambiguous);
  CHECK(r.interval.first == doctest::Approx(o.c_min));
  CHECK(r.interval.second == doctest::Approx(o.c_max));
  CHECK_THROWS_AS(calibrate_coupling(same, tops, std::vector<double>{}, o), ConfigError);
  o.c_min = 0;
  CHECK_THROWS_AS(calibrate_coupling(same, tops, targets, o), ConfigError);
}

TEST_CASE("target table") {
  const auto& t = target_table();
  CHECK(t.size() == 16);
  for (const TargetCell& c : t) {
    CHECK(c.mean >= 0);
    CHECK(c.mean <= 1);
  }
  CHECK_THROWS(reproduce_tables(1, 0));
}
