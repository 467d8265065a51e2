#include "cmc/experiment.hpp"

#include "cmc/export.hpp"
#include "cmc/flux.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <set>

namespace cmc {

using nlohmann::json;

const char* pipeline_name(Pipeline p) {
  switch (p) {
    case Pipeline::Solve:
      return "solve";
    case Pipeline::SweepFamily:
      return "sweep-family";
    case Pipeline::ImmersedSearch:
      return "immersed-search";
    case Pipeline::VerifyFlux:
      return "verify-flux";
    case Pipeline::ExportMesh:
      return "export-mesh";
  }
  return "unknown";
}

AxisSpec ExperimentConfig::axis_spec() const {
  if (space == "ekt") return AxisSpec::ekt_axis({kappa, tau, kPi / 2.0});
  if (axis == "base") return AxisSpec::sol_base();
  if (axis == "diag+") return AxisSpec::sol_diag(+1);
  if (axis == "diag-") return AxisSpec::sol_diag(-1);
  throw ConfigError("unknown axis '" + axis + "' (expected base, diag+ or diag-)");
}

bool ExperimentConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end() ||
         std::find(formats.begin(), formats.end(), "all") != formats.end();
}

namespace {

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = get_as<T>(j, key);
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

const std::map<std::string, Pipeline>& pipeline_table() {
  static const std::map<std::string, Pipeline> t{{"solve", Pipeline::Solve},
                                                 {"sweep-family", Pipeline::SweepFamily},
                                                 {"immersed-search", Pipeline::ImmersedSearch},
                                                 {"verify-flux", Pipeline::VerifyFlux},
                                                 {"export-mesh", Pipeline::ExportMesh}};
  return t;
}

Aim parse_aim(const std::string& s) {
  if (s == "y-axis") return Aim::YAxis;
  if (s == "diag-minus") return Aim::DiagMinus;
  throw ConfigError("unknown aim '" + s + "' (expected y-axis or diag-minus)");
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (j.is_null() || (j.is_object() && j.empty())) throw ConfigError("empty configuration");
  check_keys(j,
             {"name", "pipeline", "space", "axis", "kappa", "tau", "H", "a", "bracket", "H_list", "H_root_factors",
              "kappa_list", "tau_list", "turn", "aim", "H_goal", "s_range", "rings", "panels", "formats", "parallel",
              "seed", "tolerances", "root", "continuation"},
             "configuration");
  ExperimentConfig c;
  read(j, "name", c.name);
  if (!j.contains("pipeline")) throw ConfigError("configuration needs a 'pipeline'");
  const auto pname = get_as<std::string>(j, "pipeline");
  const auto it = pipeline_table().find(pname);
  if (it == pipeline_table().end()) throw ConfigError("unknown pipeline '" + pname + "'");
  c.pipeline = it->second;
  read(j, "space", c.space);
  if (c.space != "sol" && c.space != "ekt") throw ConfigError("space must be 'sol' or 'ekt'");
  read(j, "axis", c.axis);
  read(j, "kappa", c.kappa);
  read(j, "tau", c.tau);
  read(j, "H", c.H);
  if (j.contains("a")) c.a = get_as<double>(j, "a");
  if (j.contains("bracket")) {
    const auto b = get_as<std::vector<double>>(j, "bracket");
    if (b.size() != 2 || !(b[0] < b[1])) throw ConfigError("bracket must be [lo, hi] with lo < hi");
    c.bracket = std::make_pair(b[0], b[1]);
  }
  read(j, "H_list", c.H_list);
  read(j, "H_root_factors", c.H_root_factors);
  read(j, "kappa_list", c.kappa_list);
  read(j, "tau_list", c.tau_list);
  read(j, "turn", c.turn);
  read(j, "aim", c.aim);
  parse_aim(c.aim);
  if (j.contains("H_goal")) c.H_goal = get_as<double>(j, "H_goal");
  if (j.contains("s_range")) {
    const auto r = get_as<std::vector<double>>(j, "s_range");
    if (r.size() != 2 || !(r[0] < r[1])) throw ConfigError("s_range must be [min, max] with min < max");
    c.s_min = r[0];
    c.s_max = r[1];
  }
  read(j, "rings", c.rings);
  read(j, "panels", c.panels);
  read(j, "formats", c.formats);
  for (const auto& f : c.formats) {
    if (f != "csv" && f != "svg" && f != "obj" && f != "all") throw ConfigError("unknown format '" + f + "'");
  }
  read(j, "parallel", c.parallel);
  read(j, "seed", c.seed);
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    check_keys(t,
               {"rtol", "atol", "swap_threshold", "hysteresis", "max_length", "min_step", "event_tol",
                "initial_step", "sample_spacing", "refine_endpoints"},
               "tolerances");
    auto& o = c.integration;
    read(t, "rtol", o.rtol);
    read(t, "atol", o.atol);
    read(t, "swap_threshold", o.swap_threshold);
    read(t, "hysteresis", o.hysteresis);
    read(t, "max_length", o.max_length);
    read(t, "min_step", o.min_step);
    read(t, "event_tol", o.event_tol);
    read(t, "initial_step", o.initial_step);
    read(t, "sample_spacing", o.sample_spacing);
    read(t, "refine_endpoints", o.refine_endpoints);
  }
  if (j.contains("root")) {
    const json& r = j.at("root");
    check_keys(r, {"objective_tol", "width_tol", "secant_width", "max_iterations", "grid"}, "root");
    read(r, "objective_tol", c.root.objective_tol);
    read(r, "width_tol", c.root.width_tol);
    read(r, "secant_width", c.root.secant_width);
    read(r, "max_iterations", c.root.max_iterations);
    read(r, "grid", c.root.grid);
  }
  if (j.contains("continuation")) {
    const json& r = j.at("continuation");
    check_keys(r, {"dH", "dH_min", "dH_max", "window", "grid"}, "continuation");
    read(r, "dH", c.continuation.dH);
    read(r, "dH_min", c.continuation.dH_min);
    read(r, "dH_max", c.continuation.dH_max);
    read(r, "window", c.continuation.window);
    read(r, "grid", c.continuation.grid);
  }
  try {
    c.integration.validate();
    c.root.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  (void)c.axis_spec();
  switch (c.pipeline) {
    case Pipeline::SweepFamily:
      if (c.H_list.empty()) throw ConfigError("sweep-family needs a non-empty H_list");
      break;
    case Pipeline::ImmersedSearch:
      if (!c.bracket) throw ConfigError("immersed-search needs a bracket for d");
      if (c.space != "sol" || c.axis != "base") throw ConfigError("immersed-search runs on the Sol base axis");
      break;
    case Pipeline::VerifyFlux:
      if (c.kappa_list.empty()) c.kappa_list = {c.kappa};
      if (c.tau_list.empty()) c.tau_list = {c.tau};
      if (c.H_list.empty() && c.H_root_factors.empty()) c.H_list = {c.H};
      break;
    case Pipeline::ExportMesh:
      if (!j.contains("formats")) c.formats.push_back("obj");
      if (c.rings < 2) throw ConfigError("rings must be at least 2");
      break;
    case Pipeline::Solve:
      break;
  }
  if (c.panels < 1) throw ConfigError("panels must be positive");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw ConfigError("empty configuration");
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config does not parse: ") + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["pipeline"] = pipeline_name(c.pipeline);
  j["space"] = c.space;
  j["axis"] = c.axis;
  j["kappa"] = c.kappa;
  j["tau"] = c.tau;
  j["H"] = c.H;
  if (c.a) j["a"] = *c.a;
  if (c.bracket) j["bracket"] = {c.bracket->first, c.bracket->second};
  j["H_list"] = c.H_list;
  j["H_root_factors"] = c.H_root_factors;
  j["kappa_list"] = c.kappa_list;
  j["tau_list"] = c.tau_list;
  j["turn"] = c.turn;
  j["aim"] = c.aim;
  if (c.H_goal) j["H_goal"] = *c.H_goal;
  j["s_range"] = {c.s_min, c.s_max};
  j["rings"] = c.rings;
  j["panels"] = c.panels;
  j["formats"] = c.formats;
  j["parallel"] = c.parallel;
  j["seed"] = c.seed;
  const auto& o = c.integration;
  j["tolerances"] = {{"rtol", o.rtol},
                     {"atol", o.atol},
                     {"swap_threshold", o.swap_threshold},
                     {"hysteresis", o.hysteresis},
                     {"max_length", o.max_length},
                     {"min_step", o.min_step},
                     {"event_tol", o.event_tol},
                     {"initial_step", o.initial_step},
                     {"sample_spacing", o.sample_spacing},
                     {"refine_endpoints", o.refine_endpoints}};
  j["root"] = {{"objective_tol", c.root.objective_tol},
               {"width_tol", c.root.width_tol},
               {"secant_width", c.root.secant_width},
               {"max_iterations", c.root.max_iterations},
               {"grid", c.root.grid}};
  j["continuation"] = {{"dH", c.continuation.dH},
                       {"dH_min", c.continuation.dH_min},
                       {"dH_max", c.continuation.dH_max},
                       {"window", c.continuation.window},
                       {"grid", c.continuation.grid}};
  return j;
}

namespace {

const std::map<std::string, json>& presets() {
  static const std::map<std::string, json> p{
      {"sol-embedded-H1", {{"name", "sol-embedded-H1"}, {"pipeline", "solve"}, {"H", 1.0}}},
      {"sol-discrepancy", {{"name", "sol-discrepancy"}, {"pipeline", "solve"}, {"H", 1.0}, {"a", -0.6425}}},
      {"sol-family",
       {{"name", "sol-family"}, {"pipeline", "sweep-family"}, {"H_list", {0.5, 0.6, 0.65, 0.7, 1.0}}}},
      {"sol-diag-H1", {{"name", "sol-diag-H1"}, {"pipeline", "solve"}, {"axis", "diag+"}, {"H", 1.0}}},
      {"immersed-turn9",
       {{"name", "immersed-turn9"},
        {"pipeline", "immersed-search"},
        {"H", 1.0},
        {"turn", 9},
        {"aim", "y-axis"},
        {"bracket", {0.8656, 0.9056}}}},
      {"immersed-turn17",
       {{"name", "immersed-turn17"},
        {"pipeline", "immersed-search"},
        {"H", 1.0},
        {"turn", 17},
        {"aim", "y-axis"},
        {"bracket", {1.8555, 1.8955}}}},
      {"immersed-turn13",
       {{"name", "immersed-turn13"},
        {"pipeline", "immersed-search"},
        {"H", 1.0},
        {"turn", 13},
        {"aim", "diag-minus"},
        {"bracket", {1.425, 1.465}}}},
      {"immersed-turn21",
       {{"name", "immersed-turn21"},
        {"pipeline", "immersed-search"},
        {"H", 1.0},
        {"turn", 21},
        {"aim", "diag-minus"},
        {"bracket", {2.257, 2.297}}}},
      {"turn5-branch",
       {{"name", "turn5-branch"},
        {"pipeline", "immersed-search"},
        {"H", 0.5},
        {"turn", 5},
        {"aim", "y-axis"},
        {"bracket", {-0.985, -0.945}},
        {"H_goal", 0.759}}},
      {"ekt-diameter-table",
       {{"name", "ekt-diameter-table"},
        {"pipeline", "verify-flux"},
        {"space", "ekt"},
        {"kappa_list", {-0.25, -1.0, -4.0}},
        {"tau_list", {0.0, 1.0}},
        {"H_root_factors", {0.6, 1.0}},
        {"H_list", {2.0}}}},
      {"flat-circle",
       {{"name", "flat-circle"}, {"pipeline", "solve"}, {"space", "ekt"}, {"kappa", 0.0}, {"tau", 0.0}, {"H", 1.0}}},
      {"sol-mesh",
       {{"name", "sol-mesh"},
        {"pipeline", "export-mesh"},
        {"H", 1.0},
        {"s_range", {-2.0, 2.0}},
        {"rings", 41},
        {"formats", {"csv", "svg", "obj"}}}},
      {"ekt-mesh",
       {{"name", "ekt-mesh"},
        {"pipeline", "export-mesh"},
        {"space", "ekt"},
        {"kappa", -1.0},
        {"tau", 1.0},
        {"H", 1.0},
        {"s_range", {-2.0, 2.0}},
        {"rings", 41},
        {"formats", {"csv", "svg", "obj"}}}},
  };
  return p;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : presets()) out.push_back(k);
  return out;
}

json preset_json(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) throw ConfigError("unknown preset '" + name + "'");
  return it->second;
}

ExperimentConfig preset(const std::string& name) { return parse_config(preset_json(name)); }

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return exit_code::config;
  if (dynamic_cast<const BracketError*>(&e) || dynamic_cast<const PreconditionError*>(&e)) {
    return exit_code::bracket;
  }
  return exit_code::solver;
}

std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("CMC_OUT_DIR"); env && *env) return env;
  return "runs";
}

namespace {

// All files of a run go through this writer (the pipelines compute in
// parallel but write sequentially).
class RunWriter {
 public:
  explicit RunWriter(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

  template <class Fn>
  void write(const std::string& file, Fn&& fn) {
    std::ofstream out(dir_ / file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir_ / file).string());
    fn(out);
    files_.push_back(file);
  }
  [[nodiscard]] const std::vector<std::string>& files() const { return files_; }
  [[nodiscard]] const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

json shooting_json(const ShootingResult& r) {
  json j{{"parameter", r.parameter},
         {"residual", r.residual},
         {"T", r.T},
         {"turn", r.turn},
         {"symmetry_residual", r.symmetry_residual},
         {"classification", classification_name(r.classification)},
         {"evaluations", r.evaluations},
         {"converged", r.converged},
         {"message", r.message}};
  json hist = json::array();
  for (const auto& h : r.history) hist.push_back({h.parameter, h.objective});
  j["history"] = hist;
  return j;
}

std::vector<Vec2> open_points(const ClosedPlaneCurve& c) {
  return {c.vertices.begin(), c.vertices.end()};
}

void write_curve(RunWriter& w, const ExperimentConfig& c, const std::string& stem, const ClosedPlaneCurve& curve,
                 bool diagonals) {
  if (c.wants("csv")) w.write(stem + ".csv", [&](std::ostream& os) { write_closed_curve_csv(os, curve); });
  if (c.wants("svg")) {
    SvgOptions o;
    o.diagonals = diagonals;
    w.write(stem + ".svg", [&](std::ostream& os) { write_svg(os, {{open_points(curve)}}, o); });
  }
}

json run_solve(const ExperimentConfig& c, RunWriter& w) {
  const AxisSpec axis = c.axis_spec();
  json res;
  if (c.a) {
    const ProfileCurve prof = integrate_profile(axis, c.H, *c.a, 0.0, c.integration);
    if (!prof.complete()) throw SolverError("profile integration incomplete: " + prof.diagnostic);
    res["a"] = *c.a;
    res["R_plus"] = prof.Rplus;
    res["R_minus"] = prof.Rminus;
    res["h_at_R_plus"] = prof.height_at_Rplus();
    res["abs_h_at_R"] = std::abs(prof.height_at_Rplus());
    if (c.wants("csv")) w.write("profile.csv", [&](std::ostream& os) { write_profile_csv(os, prof); });
    return res;
  }
  const ZeroHeightSolution z = find_zero_height(axis, c.H, c.bracket, c.root, c.integration);
  res["shooting"] = shooting_json(z.result);
  res["a0"] = z.result.parameter;
  res["R_plus"] = z.profile.Rplus;
  res["R_minus"] = z.profile.Rminus;
  res["h_at_R_plus"] = z.profile.height_at_Rplus();
  res["diameter"] = z.profile.Rplus - z.profile.Rminus;
  const MonotonicityReport mono = monotonicity_report(z.profile);
  res["monotonic"] = mono.valid;
  res["t0"] = mono.t0;
  if (!axis.is_sol()) {
    res["R_closed"] = radius_closed_form(axis.space.ekt.kappa, c.H);
    res["diameter_closed"] = diameter_closed_form(axis.space.ekt.kappa, c.H);
  }
  if (c.wants("csv")) w.write("profile.csv", [&](std::ostream& os) { write_profile_csv(os, z.profile); });
  if (z.result.converged) {
    const ClosedPlaneCurve curve = embedded_closed_curve(z.profile);
    res["turn"] = turning_number(curve).turn;
    res["self_intersections"] = self_intersections(curve).count;
    write_curve(w, c, "curve", curve, axis.axis == AxisKind::SolBase);
  }
  if (!z.result.converged) throw SolverError("zero-height search did not converge: " + z.result.message);
  return res;
}

json run_family(const ExperimentConfig& c, RunWriter& w) {
  const FamilySweep sweep = sweep_family(c.axis_spec(), c.H_list, c.root, c.integration, c.parallel);
  json res;
  json members = json::array();
  std::vector<std::vector<double>> rows;
  std::vector<SvgCurve> svg;
  static const char* colors[] = {"#1f4e9c", "#c0392b", "#27ae60", "#8e44ad", "#d35400", "#2c3e50"};
  for (std::size_t i = 0; i < sweep.members.size(); ++i) {
    const auto& m = sweep.members[i];
    json mj{{"H", m.H}, {"ok", m.ok}};
    if (!m.ok) {
      mj["error"] = m.error;
    } else {
      mj["a0"] = m.result.parameter;
      mj["residual"] = m.result.residual;
      mj["R_plus"] = m.profile.Rplus;
      mj["diameter"] = m.diameter;
      rows.push_back({m.H, m.result.parameter, m.profile.Rplus, m.profile.Rminus, m.diameter, m.max_abs_x,
                      m.max_abs_y, m.result.residual});
      svg.push_back({open_points(m.curve), colors[i % 6], true});
      if (c.wants("csv")) {
        w.write("curve_" + std::to_string(i) + ".csv",
                [&](std::ostream& os) { write_closed_curve_csv(os, m.curve); });
      }
    }
    members.push_back(mj);
  }
  res["members"] = members;
  res["nested"] = sweep.nested;
  res["nesting_message"] = sweep.nesting_message;
  if (c.wants("csv")) {
    w.write("family.csv", [&](std::ostream& os) {
      write_table_csv(os, {"H", "a0", "R_plus", "R_minus", "diameter", "max_abs_x", "max_abs_y", "residual"}, rows);
    });
  }
  if (c.wants("svg")) w.write("family.svg", [&](std::ostream& os) { write_svg(os, svg); });
  for (const auto& m : sweep.members) {
    if (!m.ok) throw SolverError("family member H = " + format_double(m.H) + " failed: " + m.error);
  }
  return res;
}

json run_immersed(const ExperimentConfig& c, RunWriter& w) {
  const Aim aim = parse_aim(c.aim);
  const ImmersedSolution sol = find_immersed(c.H, c.turn, aim, *c.bracket, c.root, c.integration);
  json res;
  res["shooting"] = shooting_json(sol.result);
  res["d0"] = sol.result.parameter;
  res["turn"] = sol.result.turn;
  res["portions"] = sol.curve.portions;
  res["self_intersections"] = sol.self_intersections;
  write_curve(w, c, "curve", sol.curve, true);
  if (!sol.result.converged) throw SolverError("immersed search did not converge: " + sol.result.message);
  if (c.H_goal) {
    const ContinuationReport rep = continue_immersed_branch(c.turn, aim, c.H, *c.bracket, *c.H_goal,
                                                            c.continuation, c.root, c.integration);
    std::vector<std::vector<double>> rows;
    for (const auto& s : rep.steps) rows.push_back({s.H, s.d, s.residual});
    if (c.wants("csv")) {
      w.write("continuation.csv", [&](std::ostream& os) { write_table_csv(os, {"H", "d0", "residual"}, rows); });
    }
    res["continuation"] = {{"last_H", rep.last_H},
                           {"last_d0", rep.last_d},
                           {"reached_goal", rep.reached_goal},
                           {"stop_reason", rep.stop_reason},
                           {"last_turn", rep.last_turn},
                           {"distance_to_embedded", rep.distance_to_embedded},
                           {"steps", rep.steps.size()}};
    if (rep.reached_goal) {
      const ClosedPlaneCurve last = immersed_closed_curve(rep.last_H, rep.last_d, c.turn, aim, c.integration);
      write_curve(w, c, "curve_last", last, true);
    }
  }
  return res;
}

json run_flux(const ExperimentConfig& c, RunWriter& w) {
  struct Item {
    double kappa, tau, H;
  };
  std::vector<Item> items;
  for (double k : c.kappa_list) {
    std::vector<double> Hs;
    for (double f : c.H_root_factors) Hs.push_back(f * std::sqrt(-k));
    Hs.insert(Hs.end(), c.H_list.begin(), c.H_list.end());
    std::vector<double> unique;
    for (double h : Hs) {
      if (!(h > ekt::critical_mean_curvature(k))) continue;  // inadmissible
      if (std::none_of(unique.begin(), unique.end(), [&](double u) { return std::abs(u - h) < 1e-12; })) {
        unique.push_back(h);
      }
    }
    for (double t : c.tau_list) {
      for (double h : unique) items.push_back({k, t, h});
    }
  }
  if (items.empty()) throw ConfigError("no admissible (kappa, tau, H) combination");

  auto one = [&](const Item& it) {
    FluxOptions fo;
    fo.panels = c.panels;
    return flux_for({it.kappa, it.tau, kPi / 2.0}, it.H, fo, c.integration);
  };
  std::vector<FluxReport> reports(items.size());
  if (c.parallel) {
    std::vector<std::future<FluxReport>> fut;
    for (const auto& it : items) fut.push_back(std::async(std::launch::async, one, it));
    for (std::size_t i = 0; i < items.size(); ++i) reports[i] = fut[i].get();
  } else {
    for (std::size_t i = 0; i < items.size(); ++i) reports[i] = one(items[i]);
  }

  std::vector<std::vector<double>> rows;
  double worst_R = 0.0;
  double worst_flux = 0.0;
  double worst_b13 = 0.0;
  double worst_b4 = 0.0;
  for (const auto& r : reports) {
    const double res = std::abs(2.0 * r.R_numeric - 2.0 * r.R_closed);
    worst_R = std::max(worst_R, res);
    worst_flux = std::max(worst_flux, r.residual);
    worst_b13 = std::max(worst_b13, r.beta13_cancellation);
    worst_b4 = std::max(worst_b4, std::abs(r.beta4));
    rows.push_back({r.kappa, r.tau, r.H, 2.0 * r.R_closed, 2.0 * r.R_numeric, res, r.a, r.lhs, r.rhs, r.residual,
                    r.beta13_cancellation, r.beta4});
  }
  if (c.wants("csv")) {
    w.write("diameters.csv", [&](std::ostream& os) {
      write_table_csv(os,
                      {"kappa", "tau", "H", "diameter_closed", "diameter_numeric", "residual", "a0", "flux_lhs",
                       "flux_rhs", "flux_residual", "beta13", "beta4"},
                      rows);
    });
  }
  return {{"rows", rows.size()},
          {"max_diameter_residual", worst_R},
          {"max_flux_residual", worst_flux},
          {"max_beta13", worst_b13},
          {"max_beta4", worst_b4}};
}

json run_mesh(const ExperimentConfig& c, RunWriter& w) {
  const AxisSpec axis = c.axis_spec();
  const ZeroHeightSolution z = find_zero_height(axis, c.H, c.bracket, c.root, c.integration);
  if (!z.result.converged) throw SolverError("zero-height search did not converge: " + z.result.message);
  const ClosedPlaneCurve curve = embedded_closed_curve(z.profile);
  const InvariantSurfaceMesh mesh = sweep_mesh(axis, curve, c.s_min, c.s_max, static_cast<std::size_t>(c.rings));
  write_curve(w, c, "curve", curve, axis.axis == AxisKind::SolBase);
  if (c.wants("obj")) w.write("mesh.obj", [&](std::ostream& os) { write_obj(os, mesh); });
  return {{"a0", z.result.parameter},
          {"vertices", mesh.vertices.size()},
          {"faces", mesh.faces.size()},
          {"rings", mesh.rings},
          {"ring_size", mesh.ring_size}};
}

json versions() {
  return {{"toolkit", "1.0.0"},
          {"compiler", __VERSION__},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"boost", BOOST_LIB_VERSION}};
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_root) {
  RunResult out;
  const auto t0 = std::chrono::steady_clock::now();
  std::optional<RunWriter> writer;
  try {
    writer.emplace(out_root / config.name);
    out.dir = writer->dir();
    switch (config.pipeline) {
      case Pipeline::Solve:
        out.results = run_solve(config, *writer);
        break;
      case Pipeline::SweepFamily:
        out.results = run_family(config, *writer);
        break;
      case Pipeline::ImmersedSearch:
        out.results = run_immersed(config, *writer);
        break;
      case Pipeline::VerifyFlux:
        out.results = run_flux(config, *writer);
        break;
      case Pipeline::ExportMesh:
        out.results = run_mesh(config, *writer);
        break;
    }
    out.message = "ok";
  } catch (const std::exception& e) {
    out.exit_code = exit_code_for(e);
    out.message = e.what();
  }
  if (writer) {
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const json manifest{{"pipeline", pipeline_name(config.pipeline)},
                        {"inputs", to_json(config)},
                        {"versions", versions()},
                        {"results", out.results},
                        {"status", {{"exit_code", out.exit_code}, {"message", out.message}}},
                        {"files", writer->files()},
                        {"runtime_seconds", seconds}};
    try {
      writer->write("manifest.json", [&](std::ostream& os) { os << manifest.dump(2) << '\n'; });
    } catch (const std::exception& e) {
      if (out.exit_code == exit_code::ok) out.exit_code = exit_code::solver;
      out.message = e.what();
    }
    out.files = writer->files();
  }
  return out;
}

}  // namespace cmc
