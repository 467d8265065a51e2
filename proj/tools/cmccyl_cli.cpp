// Command-line front end: one verb per pipeline, plus `presets`.

#include "cmc/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using nlohmann::json;

namespace {

struct Overrides {
  std::string config;
  std::string name;
  double H = 0.0;
  double a = 0.0;
  std::string space;
  std::string axis;
  double kappa = 0.0;
  double tau = 0.0;
  std::vector<double> bracket;
  std::vector<double> H_list;
  std::vector<double> H_factors;
  std::vector<double> kappa_list;
  std::vector<double> tau_list;
  int turn = 0;
  std::string aim;
  double H_goal = 0.0;
  std::vector<double> s_range;
  int rings = 0;
  int panels = 0;
  bool serial = false;
};

struct Globals {
  double rtol = 0.0;
  double atol = 0.0;
  std::string out_dir;
  std::vector<std::string> formats;
};

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cmc::ConfigError("cannot open config file " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw cmc::ConfigError("empty configuration");
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw cmc::ConfigError(std::string("config does not parse: ") + e.what());
  }
}

template <class T>
void set_if(json& j, const char* key, const CLI::App* app, const char* opt, const T& value) {
  const CLI::Option* o = app->get_option_no_throw(opt);
  if (o != nullptr && o->count() > 0) j[key] = value;
}

json build(const CLI::App* sub, const Overrides& o, const Globals& g, const std::string& pipeline) {
  json j = o.config.empty() ? json::object() : load_json(o.config);
  if (!j.is_object()) throw cmc::ConfigError("configuration must be a JSON object");
  if (!j.contains("pipeline")) j["pipeline"] = pipeline;
  if (!j.contains("name")) j["name"] = pipeline;
  set_if(j, "name", sub, "--name", o.name);
  set_if(j, "H", sub, "--H", o.H);
  set_if(j, "a", sub, "--a", o.a);
  set_if(j, "space", sub, "--space", o.space);
  set_if(j, "axis", sub, "--axis", o.axis);
  set_if(j, "kappa", sub, "--kappa", o.kappa);
  set_if(j, "tau", sub, "--tau", o.tau);
  set_if(j, "bracket", sub, "--bracket", o.bracket);
  set_if(j, "H_list", sub, "--H-list", o.H_list);
  set_if(j, "H_root_factors", sub, "--H-factors", o.H_factors);
  set_if(j, "kappa_list", sub, "--kappa-list", o.kappa_list);
  set_if(j, "tau_list", sub, "--tau-list", o.tau_list);
  set_if(j, "turn", sub, "--turn", o.turn);
  set_if(j, "aim", sub, "--aim", o.aim);
  set_if(j, "H_goal", sub, "--H-goal", o.H_goal);
  set_if(j, "s_range", sub, "--s-range", o.s_range);
  set_if(j, "rings", sub, "--rings", o.rings);
  set_if(j, "panels", sub, "--panels", o.panels);
  if (sub->count("--serial") > 0) j["parallel"] = false;
  if (g.rtol > 0.0) j["tolerances"]["rtol"] = g.rtol;
  if (g.atol > 0.0) j["tolerances"]["atol"] = g.atol;
  if (!g.formats.empty()) j["formats"] = g.formats;
  return j;
}

int run(const json& j, const Globals& g) {
  const cmc::ExperimentConfig cfg = cmc::parse_config(j);
  const std::filesystem::path root = g.out_dir.empty() ? cmc::default_out_dir() : std::filesystem::path(g.out_dir);
  const cmc::RunResult r = cmc::run_experiment(cfg, root);
  std::cout << r.results.dump(2) << '\n';
  std::cout << "run directory: " << r.dir.string() << '\n';
  if (r.exit_code != cmc::exit_code::ok) std::cerr << "error: " << r.message << '\n';
  return r.exit_code;
}

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "JSON configuration file; flags override its keys");
  sub->add_option("--name", o.name, "run directory name");
  sub->add_flag("--serial", o.serial, "do not run items in parallel");
}

void add_space(CLI::App* sub, Overrides& o) {
  sub->add_option("--space", o.space, "sol or ekt")->check(CLI::IsMember({"sol", "ekt"}));
  sub->add_option("--axis", o.axis, "Sol axis: base, diag+ or diag-")->check(CLI::IsMember({"base", "diag+", "diag-"}));
  sub->add_option("--kappa", o.kappa, "base curvature of E(kappa,tau), <= 0");
  sub->add_option("--tau", o.tau, "bundle curvature of E(kappa,tau)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CMC cylinders in Sol and E(kappa,tau)"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol-rel", g.rtol, "relative integration tolerance");
  app.add_option("--tol-abs", g.atol, "absolute integration tolerance");
  app.add_option("--out-dir", g.out_dir, "root of the run directories (default $CMC_OUT_DIR or ./runs)");
  app.add_option("--format", g.formats, "output formats: csv, svg, obj, all")
      ->check(CLI::IsMember({"csv", "svg", "obj", "all"}));

  Overrides o;
  auto* solve = app.add_subcommand("solve", "zero-height solution (or one profile with --a)");
  add_common(solve, o);
  add_space(solve, o);
  solve->add_option("--H", o.H, "mean curvature");
  solve->add_option("--a", o.a, "integrate the profile starting at height a instead of searching");
  solve->add_option("--bracket", o.bracket, "search bracket lo hi")->expected(2);

  auto* family = app.add_subcommand("family", "zero-height solutions for a list of H and their nesting");
  add_common(family, o);
  add_space(family, o);
  family->add_option("--H-list", o.H_list, "values of H");

  auto* immersed = app.add_subcommand("immersed", "immersed closed solution with a given turning number");
  add_common(immersed, o);
  immersed->add_option("--H", o.H, "mean curvature");
  immersed->add_option("--turn", o.turn, "turning number, 1 mod 4");
  immersed->add_option("--aim", o.aim, "y-axis or diag-minus")->check(CLI::IsMember({"y-axis", "diag-minus"}));
  immersed->add_option("--bracket", o.bracket, "bracket for d: lo hi")->expected(2);
  immersed->add_option("--H-goal", o.H_goal, "continue the branch in H up to this value");

  auto* verify = app.add_subcommand("verify", "diameters and flux identity in E(kappa,tau)");
  add_common(verify, o);
  verify->add_option("--kappa-list", o.kappa_list, "values of kappa");
  verify->add_option("--tau-list", o.tau_list, "values of tau");
  verify->add_option("--H-list", o.H_list, "absolute values of H");
  verify->add_option("--H-factors", o.H_factors, "H as multiples of sqrt(-kappa)");
  verify->add_option("--panels", o.panels, "Gauss-Legendre panels");

  auto* mesh = app.add_subcommand("mesh", "OBJ mesh of an embedded invariant surface");
  add_common(mesh, o);
  add_space(mesh, o);
  mesh->add_option("--H", o.H, "mean curvature");
  mesh->add_option("--s-range", o.s_range, "sweep range smin smax")->expected(2);
  mesh->add_option("--rings", o.rings, "number of s values");

  std::string preset_name;
  auto* presets = app.add_subcommand("presets", "list the presets, or run one");
  presets->add_option("name", preset_name, "preset to run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cmc::exit_code::config;
  }

  try {
    if (presets->parsed()) {
      if (preset_name.empty()) {
        for (const auto& n : cmc::preset_names()) {
          std::cout << n << "  " << cmc::preset_json(n).dump() << '\n';
        }
        return 0;
      }
      json j = cmc::preset_json(preset_name);
      if (g.rtol > 0.0) j["tolerances"]["rtol"] = g.rtol;
      if (g.atol > 0.0) j["tolerances"]["atol"] = g.atol;
      if (!g.formats.empty()) j["formats"] = g.formats;
      return run(j, g);
    }
    const std::pair<CLI::App*, const char*> verbs[] = {{solve, "solve"},
                                                       {family, "sweep-family"},
                                                       {immersed, "immersed-search"},
                                                       {verify, "verify-flux"},
                                                       {mesh, "export-mesh"}};
    for (const auto& [sub, pipeline] : verbs) {
      if (sub->parsed()) return run(build(sub, o, g, pipeline), g);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cmc::exit_code_for(e);
  }
  return cmc::exit_code::config;
}
