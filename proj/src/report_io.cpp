#include "groupsync/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "groupsync/error.hpp"

namespace groupsync::io {
namespace {

// Fixed formatting so reports are byte-identical across runs.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json vec(const Eigen::Ref<const Eigen::VectorXd>& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json mat(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const Eigen::VectorXd row = m.row(i).transpose();
    rows.push_back(vec(row));
  }
  return rows;
}

// JSON has no infinity; non-finite values are written as strings.
json real(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Eigen::VectorXd to_vector(const json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field, "expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(field, "expected an array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

template <typename T>
T field_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(key, e.what());
  }
}

Eigen::Index index_field(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    throw ConfigError(ctx + "." + key, "integer required");
  }
  return j.at(key).get<Eigen::Index>();
}

Topology topology_from_json(const json& j, std::size_t index, Eigen::Index players) {
  const std::string ctx = "topologies[" + std::to_string(index) + "]";
  const json spec = j.is_string() ? json{{"type", j}} : j;
  if (!spec.is_object() || !spec.contains("type") || !spec.at("type").is_string()) {
    throw ConfigError(ctx, "expected a type name or an object with \"type\"");
  }
  const std::string type = spec.at("type").get<std::string>();
  const Eigen::Index n = spec.contains("n") ? index_field(spec, "n", ctx) : players;
  const std::string name = field_or<std::string>(spec, "name", type);
  try {
    if (type == "complete") return {name, complete(n)};
    if (type == "ring") return {name, ring(n)};
    if (type == "path") {
      const Eigen::Index e = spec.contains("removed_edge") ? index_field(spec, "removed_edge", ctx) : n;
      return {name, ring_minus_edge(n, e)};
    }
    if (type == "star") {
      const Eigen::Index c = spec.contains("center") ? index_field(spec, "center", ctx) : 3;
      return {name, star(n, c)};
    }
    if (type == "custom") return {name, adjacency_from_json(spec)};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(ctx, e.what());
  }
  throw ConfigError(ctx + ".type", "unknown topology type '" + type + "'");
}

}  // namespace

json to_json(const AdjacencyMatrix& a) {
  json edges = json::array();
  for (const auto& [k, h] : a.edges()) edges.push_back({k + 1, h + 1});
  return {{"n", a.size()}, {"edges", edges}};
}

AdjacencyMatrix adjacency_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges")) {
    throw ConfigError("topology", "expected {\"n\", \"edges\"}");
  }
  std::vector<std::pair<Eigen::Index, Eigen::Index>> edges;
  try {
    const auto n = j.at("n").get<Eigen::Index>();
    for (const json& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ConfigError("edges", "each edge is a [k, h] pair");
      edges.emplace_back(e[0].get<Eigen::Index>(), e[1].get<Eigen::Index>());
    }
    return from_edges(n, edges);
  } catch (const json::exception& e) {
    throw ConfigError("topology", e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("edges", e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError("edges", e.what());
  }
}

FrequencyProfile profile_from_json(const json& j) {
  if (j.is_string()) {
    try {
      return builtin_profile(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError("profile", e.what());
    }
  }
  if (!j.is_object() || !j.contains("mu") || !j.contains("sigma")) {
    throw ConfigError("profile", "expected a builtin name or {\"mu\", \"sigma\"}");
  }
  try {
    return FrequencyProfile(to_vector(j.at("mu"), "profile.mu"), to_vector(j.at("sigma"), "profile.sigma"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("profile", e.what());
  }
}

json to_json(const FrequencyProfile& p) { return {{"mu", vec(p.mu())}, {"sigma", vec(p.sigma())}}; }

void write_trajectory_csv(std::ostream& os, const PhaseTrajectory& trajectory) {
  os << 't';
  for (Eigen::Index k = 0; k < trajectory.players(); ++k) os << ",theta_" << k + 1;
  os << '\n';
  for (Eigen::Index i = 0; i < trajectory.samples(); ++i) {
    os << num(trajectory.time(i));
    for (Eigen::Index k = 0; k < trajectory.players(); ++k) os << ',' << num(trajectory.theta()(k, i));
    os << '\n';
  }
}

json to_json(const SyncReport& r) {
  return {{"rho_g", r.rho_g},
          {"rho_k", vec(r.rho_k)},
          {"phi_bar", vec(r.phi_bar)},
          {"dyad_mu", mat(r.dyad_mu)},
          {"dyad_sigma", mat(r.dyad_sigma)},
          {"trace_start", r.trace_start},
          {"trace_dt", r.trace_dt},
          {"trace_samples", r.rho_g_t.size()}};
}

void write_players_csv(std::ostream& os, const SyncReport& r) {
  os << "player,rho_k,phi_bar\n";
  for (Eigen::Index k = 0; k < r.rho_k.size(); ++k) {
    os << k + 1 << ',' << num(r.rho_k(k)) << ',' << num(r.phi_bar(k)) << '\n';
  }
}

void write_trace_csv(std::ostream& os, const SyncReport& r) {
  os << "t,rho_g\n";
  for (Eigen::Index i = 0; i < r.rho_g_t.size(); ++i) {
    os << num(r.trace_start + static_cast<double>(i) * r.trace_dt) << ',' << num(r.rho_g_t(i)) << '\n';
  }
}

void write_dyads_csv(std::ostream& os, const SyncReport& r, const AdjacencyMatrix& a) {
  os << "h,k,rho_mu,rho_sigma,connected\n";
  for (Eigen::Index h = 0; h < a.size(); ++h) {
    for (Eigen::Index k = h + 1; k < a.size(); ++k) {
      os << h + 1 << ',' << k + 1 << ',' << num(r.dyad_mu(h, k)) << ',' << num(r.dyad_sigma(h, k))
         << ',' << (a.connected(h, k) ? 1 : 0) << '\n';
    }
  }
}

json to_json(const AnovaResult& r) {
  return {{"F", real(r.F)}, {"df1", r.df1}, {"df2", real(r.df2)}, {"p", r.p}, {"eta_sq", r.eta_sq}};
}

json to_json(const TTestResult& r) { return {{"t", real(r.t)}, {"df", r.df}, {"p", r.p}}; }

json to_json(const Description& d) { return {{"mean", d.mean}, {"std", d.std}, {"count", d.count}}; }

MarkerSeries read_markers_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("markers", "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,x,y,z") throw ConfigError("markers", "header must be t,x,y,z");
  std::vector<double> values;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    int cols = 0;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw ConfigError("markers", "row " + std::to_string(row) + ": not a number");
      values.push_back(v);
      ++cols;
    }
    if (cols != 4) throw ConfigError("markers", "row " + std::to_string(row) + ": expected 4 columns");
  }
  const auto n = static_cast<Eigen::Index>(values.size() / 4);
  const Eigen::Map<const Eigen::Matrix4Xd> raw(values.data(), 4, n);
  MarkerSeries m{raw.row(0).transpose(), raw.bottomRows(3)};
  return m;
}

void write_markers_csv(std::ostream& os, const MarkerSeries& m, const ArrayXb& mask) {
  if (mask.size() != m.t.size() || m.xyz.cols() != m.t.size()) {
    throw ShapeError("write_markers_csv: mask, t and xyz lengths differ");
  }
  os << "t,x,y,z,mask\n";
  for (Eigen::Index i = 0; i < m.t.size(); ++i) {
    os << num(m.t(i)) << ',' << num(m.xyz(0, i)) << ',' << num(m.xyz(1, i)) << ',' << num(m.xyz(2, i))
       << ',' << (mask(i) ? 1 : 0) << '\n';
  }
}

ExperimentSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("spec", "expected a JSON object");
  if (!j.contains("profile")) throw ConfigError("profile", "required");
  const json& pj = j.at("profile");
  ExperimentSpec spec{pj.is_string() ? pj.get<std::string>() : "inline", profile_from_json(pj), {}};

  if (!j.contains("topologies") || !j.at("topologies").is_array()) {
    throw ConfigError("topologies", "array required");
  }
  for (std::size_t i = 0; i < j.at("topologies").size(); ++i) {
    spec.topologies.push_back(topology_from_json(j.at("topologies")[i], i, spec.profile.size()));
  }
  spec.coupling = field_or(j, "c", field_or(j, "coupling", 0.0));
  const auto trials = field_or<long long>(j, "trials", 10);
  if (trials < 1) throw ConfigError("trials", "at least one trial required");
  spec.trials = static_cast<std::size_t>(trials);
  spec.master_seed = field_or<std::uint64_t>(j, "master_seed", 1);
  spec.duration = field_or(j, "T", 30.0);
  spec.dt = field_or(j, "dt", 0.01);
  if (j.contains("tau_omega") && !j.at("tau_omega").is_null()) {
    const json& t = j.at("tau_omega");
    if (t.is_string() && t.get<std::string>() == "per_trial") {
      spec.tau_omega = kPerTrialConstant;
    } else if (t.is_number()) {
      spec.tau_omega = t.get<double>();
    } else {
      throw ConfigError("tau_omega", "expected seconds or \"per_trial\"");
    }
  }
  if (j.contains("theta0")) spec.theta0 = to_vector(j.at("theta0"), "theta0");
  spec.output_dir = field_or<std::string>(j, "output_dir", "");
  spec.validate();
  return spec;
}

json to_json(const ExperimentSpec& s) {
  json tops = json::array();
  for (const Topology& t : s.topologies) {
    json tj = to_json(t.adjacency);
    tj["name"] = t.name;
    tops.push_back(tj);
  }
  json out = {{"profile_name", s.profile_name},
              {"profile", to_json(s.profile)},
              {"topologies", tops},
              {"c", s.coupling},
              {"trials", s.trials},
              {"master_seed", s.master_seed},
              {"T", s.duration},
              {"dt", s.dt},
              {"tau_omega", s.tau_omega ? real(*s.tau_omega) : json(s.dt)}};
  if (s.theta0.size() > 0) out["theta0"] = vec(s.theta0);
  return out;
}

json to_json(const TopologyResult& r) {
  json trials = json::array();
  for (const SyncReport& t : r.trials) {
    trials.push_back({{"rho_g", t.rho_g}, {"rho_k", vec(t.rho_k)}, {"phi_bar", vec(t.phi_bar)}});
  }
  return {{"name", r.name},
          {"topology", to_json(r.adjacency)},
          {"rho_g_mean", r.rho_g_mean},
          {"rho_g_trial_std", r.rho_g_trial_std},
          {"rho_g_time_std", r.rho_g_time_std},
          {"aggregate", to_json(r.aggregate)},
          {"trials", trials}};
}

json to_json(const ExperimentResult& r) {
  json tops = json::array();
  for (const TopologyResult& t : r.topologies) tops.push_back(to_json(t));
  return {{"topologies", tops}};
}

json to_json(const Check& c) { return {{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}}; }

json to_json(const ReproductionReport& r) {
  json cells = json::array();
  for (const CellResult& c : r.cells) {
    cells.push_back({{"group", c.target.group},
                     {"topology", c.target.topology},
                     {"c", c.target.coupling},
                     {"target_mean", c.target.mean},
                     {"target_std", c.target.std},
                     {"experimental_mean", c.target.experimental_mean},
                     {"experimental_std", c.target.experimental_std},
                     {"grand_mean", c.grand_mean},
                     {"deviation", c.deviation},
                     {"abs_deviation", std::abs(c.deviation)},
                     {"time_std", c.time_std},
                     {"batch_means", c.batch_means}});
  }
  json checks = json::array();
  for (const Check& c : r.checks) checks.push_back(to_json(c));
  return {{"repetitions", r.repetitions},
          {"trials_per_batch", r.trials_per_batch},
          {"cells", cells},
          {"checks", checks},
          {"passed", r.passed()}};
}

json to_json(const CalibrationResult& r) {
  json curve = json::array();
  for (const auto& [c, l] : r.loss_curve) curve.push_back({{"c", c}, {"loss", l}});
  return {{"c_star", r.c_star},
          {"loss", r.loss},
          {"ambiguous", r.ambiguous},
          {"interval", {r.interval.first, r.interval.second}},
          {"loss_curve", curve}};
}

json to_json(const StudyResult& r) {
  return {{"name", r.name},
          {"test", r.test},
          {"labels", r.labels},
          {"means", r.means},
          {"samples", r.samples},
          {"anova", to_json(r.anova)}};
}

json to_json(const PredictionReport& r) {
  json checks = json::array();
  for (const Check& c : r.checks) checks.push_back(to_json(c));
  return {{"master_seed", r.master_seed},
          {"cv_sweep", to_json(r.cv_sweep)},
          {"sigma_sweep", to_json(r.sigma_sweep)},
          {"path_variants", to_json(r.path_variants)},
          {"star_variants", to_json(r.star_variants)},
          {"checks", checks},
          {"passed", r.passed()}};
}

json to_json(const DyadComparison& d) {
  const auto mean = [](const std::vector<double>& v) { return v.empty() ? 0.0 : describe(v).mean; };
  return {{"connected_count", d.connected.size()},
          {"unconnected_count", d.unconnected.size()},
          {"connected_mean", mean(d.connected)},
          {"unconnected_mean", mean(d.unconnected)},
          {"welch_t", to_json(d.test)}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("spec", "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("spec", e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace groupsync::io
