#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "groupsync/dynamics.hpp"
#include "groupsync/ensemble.hpp"
#include "groupsync/graphs.hpp"
#include "groupsync/harness.hpp"
#include "groupsync/metrics.hpp"
#include "groupsync/sigproc.hpp"
#include "groupsync/stats.hpp"

// Serialized forms. Player labels are 1-based everywhere in this header.
namespace groupsync::io {

using nlohmann::json;

json to_json(const AdjacencyMatrix& a);  ///< {"n", "edges": [[k, h], ...]}
AdjacencyMatrix adjacency_from_json(const json& j);

/// Either a builtin name ("group1" / "group2") or {"mu": [...], "sigma": [...]}.
FrequencyProfile profile_from_json(const json& j);
json to_json(const FrequencyProfile& p);

/// Header t,theta_1..theta_N; one row per sample.
void write_trajectory_csv(std::ostream& os, const PhaseTrajectory& trajectory);

json to_json(const SyncReport& r);
void write_players_csv(std::ostream& os, const SyncReport& r);  ///< player,rho_k,phi_bar
void write_trace_csv(std::ostream& os, const SyncReport& r);    ///< t,rho_g
/// h,k,rho_mu,rho_sigma,connected for h < k.
void write_dyads_csv(std::ostream& os, const SyncReport& r, const AdjacencyMatrix& a);

json to_json(const AnovaResult& r);  ///< {F, df1, df2, p, eta_sq}
json to_json(const TTestResult& r);
json to_json(const Description& d);

/// Header t,x,y,z.
MarkerSeries read_markers_csv(std::istream& is);
/// t,x,y,z,mask. `mask` has one entry per sample.
void write_markers_csv(std::ostream& os, const MarkerSeries& m, const ArrayXb& mask);

/// Topology entries: {"type": "complete" | "ring" | "path" | "star" | "custom", ...}
/// where path takes "removed_edge", star takes "center" and custom takes
/// "n" and "edges". Errors are ConfigError naming the field.
ExperimentSpec spec_from_json(const json& j);
json to_json(const ExperimentSpec& s);

json to_json(const TopologyResult& r);
json to_json(const ExperimentResult& r);
json to_json(const Check& c);
json to_json(const ReproductionReport& r);
json to_json(const CalibrationResult& r);
json to_json(const StudyResult& r);
json to_json(const PredictionReport& r);
json to_json(const DyadComparison& d);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace groupsync::io
