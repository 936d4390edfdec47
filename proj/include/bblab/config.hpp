#pragma once
// Experiment configuration: strict JSON schema with field-by-field overrides
// and a fully resolved echo that is itself a loadable config.

#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bblab/model.hpp"
#include "json.hpp"

namespace bblab {

using Json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridBlock {
  double L = 256.0;
  int N = 2048;
};

struct StepperBlock {
  double dt = 0.0;
  double T = 0.0;
  double fp_tolerance = 1e-12;
  int fp_max_iters = 200;
  std::optional<double> cfl_alpha;
  int observer_stride = 0;
};

struct GuessBlock {
  double amplitude = 1.0;
  double rate = 0.5;
  double x0 = 0.0;
};

struct SolverBlock {
  int max_iters = 500;
  double tolerance = 1e-10;
  int mpe_cycle_width = 0;
  double exponent = 2.0;
  bool project_toland = false;
};

// A single wave request: speed (absolute or as offset from the sound speed),
// how to produce the profile, and where to centre it.
struct WaveRequest {
  std::string source = "solitary";  // solitary | exact | profile
  std::optional<double> c_s, c_s_offset;
  std::optional<std::string> profile;  // CSV path for source = profile
  GuessBlock guess;
  double center = 0.0;
  int direction = +1;  // -1 builds the left-moving mirror (zeta, -v)

  double resolved_speed(double cgd) const {
    if (c_s) return *c_s;
    if (c_s_offset) return cgd + *c_s_offset;
    throw ConfigError("wave speed missing: set c_s or c_s_offset");
  }
};

struct WaveBlock {
  WaveRequest request;
  SolverBlock solver;
};

struct PerturbBlock {
  double factor = 1.0;
};

struct GaussianBlock {
  double amplitude = 0.0;
  double tau = 0.0;
};

struct OutputBlock {
  std::string dir = "out";
  int stride = 0;       // snapshot every this many observations; 0 = none
  bool final_state = true;
};

struct ConvergenceBlock {
  std::vector<double> dts;
  std::vector<int> Ns;  // empty: use the grid block's N
  bool ci = false;      // shortened-horizon variant
};

struct ExperimentConfig {
  std::string experiment;
  std::optional<PhysicalParams> physical;
  GridBlock grid;
  StepperBlock stepper;
  WaveBlock wave;
  std::optional<PerturbBlock> perturb;
  std::vector<WaveRequest> superpose;
  std::optional<GaussianBlock> gaussian;
  OutputBlock output;
  ConvergenceBlock convergence;

  // resolved at load time
  ModelCoeffs coeffs;
  double sound_speed = 0.0;
  Json echo;
};

namespace detail {

inline void expect_object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
}

inline void expect_keys(const Json& obj, const std::string& where,
                        std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) ok = true;
    if (!ok)
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

inline double num(const Json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key))
    throw ConfigError(where + " is missing required key '" + key + "'");
  const Json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

inline double num_or(const Json& obj, const std::string& where, const char* key,
                     double fallback) {
  return obj.contains(key) ? num(obj, where, key) : fallback;
}

inline int integer(const Json& obj, const std::string& where, const char* key,
                   int fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number_integer())
    throw ConfigError(where + "." + key + " must be an integer");
  return v.get<int>();
}

inline bool boolean(const Json& obj, const std::string& where, const char* key,
                    bool fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(where + "." + key + " must be a boolean");
  return v.get<bool>();
}

inline std::string text(const Json& obj, const std::string& where,
                        const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
  return v.get<std::string>();
}

inline GuessBlock parse_guess(const Json& j, const std::string& where) {
  expect_object(j, where);
  expect_keys(j, where, {"amplitude", "rate", "x0"});
  GuessBlock g;
  g.amplitude = num_or(j, where, "amplitude", g.amplitude);
  g.rate = num_or(j, where, "rate", g.rate);
  g.x0 = num_or(j, where, "x0", g.x0);
  if (g.amplitude == 0.0) throw ConfigError(where + ".amplitude must be nonzero");
  if (!(g.rate > 0.0)) throw ConfigError(where + ".rate must be positive");
  return g;
}

inline WaveRequest parse_wave_request(const Json& j, const std::string& where) {
  expect_object(j, where);
  expect_keys(j, where, {"source", "c_s", "c_s_offset", "profile", "guess",
                         "center", "direction"});
  WaveRequest w;
  w.source = text(j, where, "source", w.source);
  if (w.source != "solitary" && w.source != "exact" && w.source != "profile")
    throw ConfigError(where + ".source must be solitary, exact, or profile");
  if (j.contains("c_s")) w.c_s = num(j, where, "c_s");
  if (j.contains("c_s_offset")) w.c_s_offset = num(j, where, "c_s_offset");
  if (w.c_s && w.c_s_offset)
    throw ConfigError(where + ": set only one of c_s and c_s_offset");
  if (j.contains("profile")) w.profile = text(j, where, "profile", "");
  if (w.source == "profile" && !w.profile)
    throw ConfigError(where + ".profile path is required for source=profile");
  if (j.contains("guess")) w.guess = parse_guess(j.at("guess"), where + ".guess");
  w.center = num_or(j, where, "center", 0.0);
  w.direction = integer(j, where, "direction", +1);
  if (w.direction != 1 && w.direction != -1)
    throw ConfigError(where + ".direction must be +1 or -1");
  return w;
}

inline SolverBlock parse_solver(const Json& j, const std::string& where) {
  expect_object(j, where);
  expect_keys(j, where, {"max_iters", "tolerance", "mpe_cycle_width", "exponent",
                         "project_toland"});
  SolverBlock s;
  s.max_iters = integer(j, where, "max_iters", s.max_iters);
  s.tolerance = num_or(j, where, "tolerance", s.tolerance);
  s.mpe_cycle_width = integer(j, where, "mpe_cycle_width", s.mpe_cycle_width);
  s.exponent = num_or(j, where, "exponent", s.exponent);
  s.project_toland = boolean(j, where, "project_toland", s.project_toland);
  if (s.max_iters < 1) throw ConfigError(where + ".max_iters must be >= 1");
  if (!(s.tolerance > 0.0)) throw ConfigError(where + ".tolerance must be > 0");
  return s;
}

}  // namespace detail

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("parse error in " + path.string() + ": " + e.what());
  }
}

// Dotted-path override: "stepper.dt=0.025", "wave.solver.project_toland=true",
// "superpose.1.center=-20".  The value is parsed as JSON when possible and
// kept as a string otherwise.
inline void apply_override(Json& doc, const std::string& spec) {
  const std::size_t eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must look like key.path=value: " + spec);
  const std::string path = spec.substr(0, eq);
  const std::string raw = spec.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(raw);
  } catch (const Json::parse_error&) {
    value = raw;
  }
  Json* node = &doc;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = path.find('.', pos);
    const std::string key = path.substr(pos, dot == std::string::npos
                                                 ? std::string::npos
                                                 : dot - pos);
    if (key.empty()) throw ConfigError("empty path segment in override " + spec);
    const bool last = dot == std::string::npos;
    const bool is_index = key.find_first_not_of("0123456789") == std::string::npos;
    if (is_index && node->is_array()) {
      const std::size_t idx = std::stoul(key);
      if (idx >= node->size())
        throw ConfigError("override index out of range in " + spec);
      node = &(*node)[idx];
      if (last) {
        *node = value;
        return;
      }
    } else {
      if (!node->is_object()) throw ConfigError("override path through a non-object in " + spec);
      if (last) {
        (*node)[key] = value;
        return;
      }
      node = &(*node)[key];
      if (node->is_null()) *node = Json::object();
    }
    pos = dot + 1;
  }
}

inline ExperimentConfig load_config(const Json& doc) {
  using namespace detail;
  expect_object(doc, "config");
  expect_keys(doc, "config",
              {"experiment", "physical", "quadruple", "grid", "stepper", "wave",
               "perturb", "superpose", "gaussian", "output", "convergence",
               "derived"});  // "derived" is emitted in echoes and ignored here

  ExperimentConfig cfg;
  cfg.experiment = text(doc, "config", "experiment", "");
  if (!cfg.experiment.empty()) {
    static const char* kinds[] = {"derive-params", "classify", "dispersion",
                                  "exact",        "solitary", "evolve",
                                  "perturb",      "collide",  "resolve",
                                  "convergence"};
    bool ok = false;
    for (const char* k : kinds)
      if (cfg.experiment == k) ok = true;
    if (!ok) throw ConfigError("unknown experiment kind '" + cfg.experiment + "'");
  }

  const bool has_phys = doc.contains("physical");
  const bool has_quad = doc.contains("quadruple");
  if (has_phys == has_quad)
    throw ConfigError("exactly one of 'physical' and 'quadruple' is required");
  try {
    if (has_phys) {
      const Json& p = doc.at("physical");
      expect_object(p, "physical");
      expect_keys(p, "physical", {"gamma", "delta", "alpha1", "alpha2", "beta"});
      PhysicalParams pp;
      pp.gamma = num(p, "physical", "gamma");
      pp.delta = num(p, "physical", "delta");
      pp.alpha1 = num(p, "physical", "alpha1");
      pp.alpha2 = num(p, "physical", "alpha2");
      pp.beta = num(p, "physical", "beta");
      cfg.physical = pp;
      cfg.coeffs = derive_coeffs(pp);
    } else {
      const Json& q = doc.at("quadruple");
      expect_object(q, "quadruple");
      expect_keys(q, "quadruple", {"gamma", "delta", "a", "b", "c", "d", "beta"});
      std::optional<double> beta;
      if (q.contains("beta")) beta = num(q, "quadruple", "beta");
      cfg.coeffs = coeffs_from_quadruple(
          num(q, "quadruple", "gamma"), num(q, "quadruple", "delta"),
          num(q, "quadruple", "a"), num(q, "quadruple", "b"),
          num(q, "quadruple", "c"), num(q, "quadruple", "d"), beta);
    }
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("invalid model parameters: ") + e.what());
  }
  cfg.sound_speed = cfg.coeffs.cgd();

  if (doc.contains("grid")) {
    const Json& g = doc.at("grid");
    expect_object(g, "grid");
    expect_keys(g, "grid", {"L", "N"});
    cfg.grid.L = num(g, "grid", "L");
    cfg.grid.N = integer(g, "grid", "N", cfg.grid.N);
    if (!(cfg.grid.L > 0.0)) throw ConfigError("grid.L must be positive");
    if (cfg.grid.N < 4 || cfg.grid.N % 2 != 0)
      throw ConfigError("grid.N must be an even number >= 4");
  }

  if (doc.contains("stepper")) {
    const Json& s = doc.at("stepper");
    expect_object(s, "stepper");
    expect_keys(s, "stepper",
                {"dt", "T", "fp_tolerance", "fp_max_iters", "cfl_alpha",
                 "observer_stride"});
    cfg.stepper.dt = num_or(s, "stepper", "dt", cfg.stepper.dt);
    cfg.stepper.T = num_or(s, "stepper", "T", cfg.stepper.T);
    cfg.stepper.fp_tolerance =
        num_or(s, "stepper", "fp_tolerance", cfg.stepper.fp_tolerance);
    cfg.stepper.fp_max_iters =
        integer(s, "stepper", "fp_max_iters", cfg.stepper.fp_max_iters);
    if (s.contains("cfl_alpha")) cfg.stepper.cfl_alpha = num(s, "stepper", "cfl_alpha");
    cfg.stepper.observer_stride =
        integer(s, "stepper", "observer_stride", cfg.stepper.observer_stride);
  }

  if (doc.contains("wave")) {
    const Json& w = doc.at("wave");
    expect_object(w, "wave");
    expect_keys(w, "wave", {"source", "c_s", "c_s_offset", "profile", "guess",
                            "center", "direction", "solver"});
    Json req = w;
    req.erase("solver");
    cfg.wave.request = parse_wave_request(req, "wave");
    if (w.contains("solver"))
      cfg.wave.solver = parse_solver(w.at("solver"), "wave.solver");
  }

  if (doc.contains("perturb")) {
    const Json& p = doc.at("perturb");
    expect_object(p, "perturb");
    expect_keys(p, "perturb", {"factor"});
    PerturbBlock pb;
    pb.factor = num(p, "perturb", "factor");
    if (pb.factor == 0.0) throw ConfigError("perturb.factor must be nonzero");
    cfg.perturb = pb;
  }

  if (doc.contains("superpose")) {
    const Json& arr = doc.at("superpose");
    if (!arr.is_array()) throw ConfigError("superpose must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i)
      cfg.superpose.push_back(parse_wave_request(
          arr[i], "superpose[" + std::to_string(i) + "]"));
  }

  if (doc.contains("gaussian")) {
    const Json& gj = doc.at("gaussian");
    expect_object(gj, "gaussian");
    expect_keys(gj, "gaussian", {"amplitude", "tau"});
    GaussianBlock gb;
    gb.amplitude = num(gj, "gaussian", "amplitude");
    gb.tau = num(gj, "gaussian", "tau");
    if (!(gb.tau > 0.0)) throw ConfigError("gaussian.tau must be positive");
    cfg.gaussian = gb;
  }

  if (doc.contains("output")) {
    const Json& o = doc.at("output");
    expect_object(o, "output");
    expect_keys(o, "output", {"dir", "stride", "final_state"});
    cfg.output.dir = text(o, "output", "dir", cfg.output.dir);
    cfg.output.stride = integer(o, "output", "stride", cfg.output.stride);
    cfg.output.final_state =
        boolean(o, "output", "final_state", cfg.output.final_state);
  }

  if (doc.contains("convergence")) {
    const Json& c = doc.at("convergence");
    expect_object(c, "convergence");
    expect_keys(c, "convergence", {"dts", "Ns", "ci"});
    if (c.contains("dts")) {
      if (!c.at("dts").is_array()) throw ConfigError("convergence.dts must be an array");
      for (const auto& v : c.at("dts")) {
        if (!v.is_number()) throw ConfigError("convergence.dts entries must be numbers");
        cfg.convergence.dts.push_back(v.get<double>());
      }
    }
    if (c.contains("Ns")) {
      if (!c.at("Ns").is_array()) throw ConfigError("convergence.Ns must be an array");
      for (const auto& v : c.at("Ns")) {
        if (!v.is_number_integer()) throw ConfigError("convergence.Ns entries must be integers");
        cfg.convergence.Ns.push_back(v.get<int>());
      }
    }
    cfg.convergence.ci = boolean(c, "convergence", "ci", false);
  }

  // ----- resolved echo: itself a loadable config -----
  Json echo;
  if (!cfg.experiment.empty()) echo["experiment"] = cfg.experiment;
  echo["quadruple"] = {{"gamma", cfg.coeffs.gamma}, {"delta", cfg.coeffs.delta},
                       {"a", cfg.coeffs.a},         {"b", cfg.coeffs.b},
                       {"c", cfg.coeffs.c},         {"d", cfg.coeffs.d},
                       {"beta", cfg.coeffs.beta}};
  echo["derived"] = {{"kappa1", cfg.coeffs.kappa1()},
                     {"kappa2", cfg.coeffs.kappa2()},
                     {"lambda", cfg.coeffs.lambda()},
                     {"sound_speed", cfg.sound_speed},
                     {"sum_residual", cfg.coeffs.sum_residual}};
  echo["grid"] = {{"L", cfg.grid.L}, {"N", cfg.grid.N}};
  echo["stepper"] = {{"dt", cfg.stepper.dt},
                     {"T", cfg.stepper.T},
                     {"fp_tolerance", cfg.stepper.fp_tolerance},
                     {"fp_max_iters", cfg.stepper.fp_max_iters},
                     {"observer_stride", cfg.stepper.observer_stride}};
  if (cfg.stepper.cfl_alpha) echo["stepper"]["cfl_alpha"] = *cfg.stepper.cfl_alpha;
  const auto wave_json = [&](const WaveRequest& w) {
    Json j = {{"source", w.source}};
    if (w.c_s || w.c_s_offset) j["c_s"] = w.resolved_speed(cfg.sound_speed);
    if (w.profile) j["profile"] = *w.profile;
    j["guess"] = {{"amplitude", w.guess.amplitude},
                  {"rate", w.guess.rate},
                  {"x0", w.guess.x0}};
    j["center"] = w.center;
    j["direction"] = w.direction;
    return j;
  };
  echo["wave"] = wave_json(cfg.wave.request);
  echo["wave"]["solver"] = {{"max_iters", cfg.wave.solver.max_iters},
                            {"tolerance", cfg.wave.solver.tolerance},
                            {"mpe_cycle_width", cfg.wave.solver.mpe_cycle_width},
                            {"exponent", cfg.wave.solver.exponent},
                            {"project_toland", cfg.wave.solver.project_toland}};
  if (cfg.perturb) echo["perturb"] = {{"factor", cfg.perturb->factor}};
  if (!cfg.superpose.empty()) {
    echo["superpose"] = Json::array();
    for (const auto& w : cfg.superpose) echo["superpose"].push_back(wave_json(w));
  }
  if (cfg.gaussian)
    echo["gaussian"] = {{"amplitude", cfg.gaussian->amplitude},
                        {"tau", cfg.gaussian->tau}};
  echo["output"] = {{"dir", cfg.output.dir},
                    {"stride", cfg.output.stride},
                    {"final_state", cfg.output.final_state}};
  if (!cfg.convergence.dts.empty() || !cfg.convergence.Ns.empty()) {
    echo["convergence"] = Json::object();
    echo["convergence"]["dts"] = cfg.convergence.dts;
    if (!cfg.convergence.Ns.empty()) echo["convergence"]["Ns"] = cfg.convergence.Ns;
    echo["convergence"]["ci"] = cfg.convergence.ci;
  }
  cfg.echo = std::move(echo);
  return cfg;
}

}  // namespace bblab
