// Command-line front end. Subcommands: chsh, optimize, sweep, simulate,
// lhv, imprecision, wavepacket. Reports are emitted as JSON (default) or
// CSV; every numeric result is printed with 9 significant digits and the
// JSON report embeds the fully resolved configuration, so a report's
// "config" object fed back through --config reproduces the run exactly.

#include "cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "pathspin/chsh.hpp"
#include "pathspin/constants.hpp"
#include "pathspin/experiment.hpp"
#include "pathspin/lhv.hpp"
#include "pathspin/preparation.hpp"

namespace pathspin::cli {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

// ----------------------------------------------------------------------
// formatting

std::string format9(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

double round9(double x) { return std::strtod(format9(x).c_str(), nullptr); }

std::string csv_bool(bool b) { return b ? "true" : "false"; }

// ----------------------------------------------------------------------
// option state

double parse_angle(const std::string& text, const std::string& name) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  double scale = 1.0;
  if (s.size() > 3 && s.substr(s.size() - 3) == "deg") {
    scale = kPi / 180.0;
    s.resize(s.size() - 3);
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v * scale;
  } catch (const std::exception&) {
    throw std::invalid_argument(name + ": cannot parse angle '" + text +
                                "' (use radians or a 'deg' suffix)");
  }
}

// An angle option: the flag carries a string (to allow the deg suffix), a
// config file carries radians directly.
struct AngleOpt {
  std::optional<std::string> raw;
  std::optional<double> value;

  void resolve(const char* name) {
    if (raw) value = parse_angle(*raw, name);
  }
  double value_or(double fallback) const { return value ? *value : fallback; }
};

struct Options {
  std::optional<double> prep_a, prep_b;
  AngleOpt prep_delta;
  AngleOpt theta1, theta2, b1, b2, b1_azimuth, b2_azimuth;
  std::optional<std::uint64_t> shots;
  std::optional<std::uint32_t> trials;
  std::optional<std::uint64_t> seed;
  AngleOpt epsilon;
  std::optional<double> sigma_threshold;
  std::optional<double> efficiency, absorption;
  std::optional<int> grid_resolution, refine_iterations;
  std::optional<double> refine_shrink;
  std::optional<bool> full_sphere;
  std::optional<std::string> param;
  std::optional<double> from, to;
  std::optional<int> steps;
  std::optional<std::string> source, lhv_model;
  std::optional<std::array<double, 16>> lhv_weights;
  std::optional<unsigned> threads;
  std::optional<double> sigma0, velocity, distance, mass;
  std::optional<std::string> output;
  std::optional<std::string> out_file;
  std::string config_file;

  void resolve_angles() {
    prep_delta.resolve("prep_delta");
    theta1.resolve("theta1");
    theta2.resolve("theta2");
    b1.resolve("b1");
    b2.resolve("b2");
    b1_azimuth.resolve("b1_azimuth");
    b2_azimuth.resolve("b2_azimuth");
    epsilon.resolve("epsilon");
  }

  std::string output_format() const {
    const std::string fmt = output ? *output : "json";
    if (fmt != "json" && fmt != "csv") {
      throw std::invalid_argument("output: must be 'csv' or 'json'");
    }
    return fmt;
  }
};

template <typename T>
void from_config(const json& j, const char* key, std::optional<T>& slot) {
  if (!slot && j.contains(key)) slot = j.at(key).get<T>();
}

void from_config(const json& j, const char* key, AngleOpt& slot) {
  if (!slot.value && !slot.raw && j.contains(key)) {
    slot.value = j.at(key).get<double>();
  }
}

// Flags override the config file; the config file overrides defaults.
void merge_config_file(Options& opt) {
  if (opt.config_file.empty()) return;
  std::ifstream in(opt.config_file);
  if (!in) {
    throw std::invalid_argument("config: cannot open '" + opt.config_file + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: invalid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) {
    throw std::invalid_argument("config: top-level value must be an object");
  }

  from_config(j, "prep_a", opt.prep_a);
  from_config(j, "prep_b", opt.prep_b);
  from_config(j, "prep_delta", opt.prep_delta);
  from_config(j, "theta1", opt.theta1);
  from_config(j, "theta2", opt.theta2);
  from_config(j, "b1", opt.b1);
  from_config(j, "b2", opt.b2);
  from_config(j, "b1_azimuth", opt.b1_azimuth);
  from_config(j, "b2_azimuth", opt.b2_azimuth);
  from_config(j, "shots", opt.shots);
  from_config(j, "trials", opt.trials);
  from_config(j, "seed", opt.seed);
  from_config(j, "epsilon", opt.epsilon);
  from_config(j, "sigma_threshold", opt.sigma_threshold);
  from_config(j, "efficiency", opt.efficiency);
  from_config(j, "absorption", opt.absorption);
  from_config(j, "grid_resolution", opt.grid_resolution);
  from_config(j, "refine_iterations", opt.refine_iterations);
  from_config(j, "refine_shrink", opt.refine_shrink);
  from_config(j, "full_sphere", opt.full_sphere);
  from_config(j, "param", opt.param);
  from_config(j, "from", opt.from);
  from_config(j, "to", opt.to);
  from_config(j, "steps", opt.steps);
  from_config(j, "source", opt.source);
  from_config(j, "lhv_model", opt.lhv_model);
  from_config(j, "lhv_weights", opt.lhv_weights);
  from_config(j, "threads", opt.threads);
  from_config(j, "sigma0", opt.sigma0);
  from_config(j, "velocity", opt.velocity);
  from_config(j, "distance", opt.distance);
  from_config(j, "mass", opt.mass);
  from_config(j, "output", opt.output);
  from_config(j, "out_file", opt.out_file);
}

// ----------------------------------------------------------------------
// resolved domain objects and their config echoes

constexpr double kDefaultTheta1 = kPi / 2.0;
constexpr double kDefaultTheta2 = kPi / 4.0;
constexpr double kDefaultB1 = 5.0 * kPi / 4.0;
constexpr double kDefaultB2 = 3.0 * kPi / 4.0;

PreparationConfig resolve_preparation(const Options& opt) {
  PreparationConfig cfg;
  cfg.a = opt.prep_a ? *opt.prep_a : 1.0 / std::sqrt(2.0);
  cfg.b = opt.prep_b ? *opt.prep_b
                     : std::sqrt(std::max(0.0, 1.0 - cfg.a * cfg.a));
  cfg.delta = opt.prep_delta.value_or(kPi);
  return cfg;
}

SettingsAngles resolve_settings(const Options& opt) {
  SettingsAngles ang;
  ang.theta1 = opt.theta1.value_or(kDefaultTheta1);
  ang.theta2 = opt.theta2.value_or(kDefaultTheta2);
  ang.b1_polar = opt.b1.value_or(kDefaultB1);
  ang.b2_polar = opt.b2.value_or(kDefaultB2);
  ang.b1_azimuth = opt.b1_azimuth.value_or(0.0);
  ang.b2_azimuth = opt.b2_azimuth.value_or(0.0);
  return ang;
}

DetectorModel resolve_detector(const Options& opt) {
  DetectorModel det;
  det.efficiency = opt.efficiency.value_or(1.0);
  det.absorption = opt.absorption.value_or(0.0);
  det.validate();
  return det;
}

OptimizerOptions resolve_optimizer(const Options& opt) {
  OptimizerOptions oo;
  if (opt.grid_resolution) oo.grid_resolution = *opt.grid_resolution;
  if (opt.refine_iterations) oo.refine_iterations = *opt.refine_iterations;
  if (opt.refine_shrink) oo.refine_shrink = *opt.refine_shrink;
  if (opt.full_sphere) oo.full_sphere = *opt.full_sphere;
  oo.validate();
  return oo;
}

std::uint64_t require_seed(const Options& opt) {
  if (!opt.seed) {
    throw std::invalid_argument("seed: required for randomized commands");
  }
  return *opt.seed;
}

LhvModel resolve_lhv_model(const Options& opt) {
  if (opt.lhv_weights) return LhvModel(*opt.lhv_weights);
  const std::string name = opt.lhv_model.value_or("uniform");
  if (name == "uniform") return LhvModel::uniform();
  if (name.rfind("point:", 0) == 0) {
    try {
      const std::size_t idx = std::stoul(name.substr(6));
      return LhvModel::point_mass(idx);
    } catch (const std::invalid_argument&) {
    } catch (const std::out_of_range&) {
    }
  }
  throw std::invalid_argument(
      "lhv_model: expected 'uniform' or 'point:<0..15>', got '" + name + "'");
}

void echo_preparation(json& cfg, const PreparationConfig& prep) {
  cfg["prep_a"] = prep.a;
  cfg["prep_b"] = prep.b;
  cfg["prep_delta"] = prep.delta;
}

void echo_settings(json& cfg, const SettingsAngles& ang) {
  cfg["theta1"] = ang.theta1;
  cfg["theta2"] = ang.theta2;
  cfg["b1"] = ang.b1_polar;
  cfg["b2"] = ang.b2_polar;
  cfg["b1_azimuth"] = ang.b1_azimuth;
  cfg["b2_azimuth"] = ang.b2_azimuth;
}

void echo_detector(json& cfg, const DetectorModel& det) {
  cfg["efficiency"] = det.efficiency;
  cfg["absorption"] = det.absorption;
}

void echo_optimizer(json& cfg, const OptimizerOptions& oo) {
  cfg["grid_resolution"] = oo.grid_resolution;
  cfg["refine_iterations"] = oo.refine_iterations;
  cfg["refine_shrink"] = oo.refine_shrink;
  cfg["full_sphere"] = oo.full_sphere;
}

void echo_output(json& cfg, const Options& opt) {
  cfg["output"] = opt.output_format();
  if (opt.out_file) cfg["out_file"] = *opt.out_file;
}

// ----------------------------------------------------------------------
// reports

struct Report {
  std::string command;
  json config;
  json result;
  std::vector<std::string> csv;
};

void emit(const Report& rep, const Options& opt, std::ostream& out) {
  std::string payload;
  if (opt.output_format() == "json") {
    const json j{{"command", rep.command}, {"config", rep.config},
                 {"result", rep.result}};
    payload = j.dump(2);
    payload.push_back('\n');
  } else {
    for (const std::string& line : rep.csv) {
      payload += line;
      payload.push_back('\n');
    }
  }
  if (opt.out_file) {
    std::ofstream f(*opt.out_file);
    if (!f) {
      throw std::invalid_argument("out_file: cannot open '" + *opt.out_file + "'");
    }
    f << payload;
  } else {
    out << payload;
  }
}

// ----------------------------------------------------------------------
// commands

Report cmd_chsh(const Options& opt) {
  const PreparationConfig prep = resolve_preparation(opt);
  const PathSpinState state = prepare_state(prep);
  const SettingsAngles ang = resolve_settings(opt);
  const ChshResult r = chsh_value(state.vec, ang.build());

  Report rep;
  rep.command = "chsh";
  echo_preparation(rep.config, prep);
  echo_settings(rep.config, ang);
  echo_output(rep.config, opt);
  rep.result = {{"e11", round9(r.e11)}, {"e12", round9(r.e12)},
                {"e21", round9(r.e21)}, {"e22", round9(r.e22)},
                {"s", round9(r.s)},     {"violated", r.violated}};
  rep.csv = {"e11,e12,e21,e22,s,violated",
             format9(r.e11) + "," + format9(r.e12) + "," + format9(r.e21) +
                 "," + format9(r.e22) + "," + format9(r.s) + "," +
                 csv_bool(r.violated)};
  return rep;
}

Report cmd_optimize(const Options& opt) {
  const PreparationConfig prep = resolve_preparation(opt);
  const PathSpinState state = prepare_state(prep);
  const OptimizerOptions oo = resolve_optimizer(opt);
  const OptimizationResult res = optimize_settings(state.vec, oo);

  Report rep;
  rep.command = "optimize";
  echo_preparation(rep.config, prep);
  echo_optimizer(rep.config, oo);
  echo_output(rep.config, opt);
  rep.result = {{"s_max", round9(res.s_max)},
                {"s", round9(res.exact.s)},
                {"theta1", round9(res.angles.theta1)},
                {"theta2", round9(res.angles.theta2)},
                {"b1_polar", round9(res.angles.b1_polar)},
                {"b2_polar", round9(res.angles.b2_polar)},
                {"b1_azimuth", round9(res.angles.b1_azimuth)},
                {"b2_azimuth", round9(res.angles.b2_azimuth)}};
  rep.csv = {"s_max,s,theta1,theta2,b1_polar,b2_polar,b1_azimuth,b2_azimuth",
             format9(res.s_max) + "," + format9(res.exact.s) + "," +
                 format9(res.angles.theta1) + "," + format9(res.angles.theta2) +
                 "," + format9(res.angles.b1_polar) + "," +
                 format9(res.angles.b2_polar) + "," +
                 format9(res.angles.b1_azimuth) + "," +
                 format9(res.angles.b2_azimuth)};
  return rep;
}

json count_record_json(const std::string& pair, const CountRecord& rec,
                       const EstimatedCorrelation& est) {
  return {{"pair", pair},       {"value", round9(est.value)},
          {"std_err", round9(est.std_err)}, {"n3p", rec.n3p},
          {"n3pp", rec.n3pp},   {"n4p", rec.n4p},
          {"n4pp", rec.n4pp},   {"lost", rec.lost},
          {"detected", rec.detected()},     {"shots", rec.shots}};
}

std::string count_record_csv(const std::string& pair, const CountRecord& rec,
                             const EstimatedCorrelation& est) {
  return pair + "," + format9(est.value) + "," + format9(est.std_err) + "," +
         std::to_string(rec.n3p) + "," + std::to_string(rec.n3pp) + "," +
         std::to_string(rec.n4p) + "," + std::to_string(rec.n4pp) + "," +
         std::to_string(rec.lost) + "," + std::to_string(rec.detected()) +
         "," + std::to_string(rec.shots);
}

Report cmd_simulate(const Options& opt) {
  const PreparationConfig prep = resolve_preparation(opt);
  const PathSpinState state = prepare_state(prep);
  const SettingsAngles ang = resolve_settings(opt);
  const DetectorModel det = resolve_detector(opt);
  const std::uint64_t shots = opt.shots.value_or(1000000);
  const std::uint64_t seed = require_seed(opt);
  const ChshSettings settings = ang.build();

  const PathObservable* as[2] = {&settings.a1, &settings.a2};
  const SpinObservable* bs[2] = {&settings.b1, &settings.b2};
  const char* names[4] = {"a1b1", "a1b2", "a2b1", "a2b2"};
  std::array<CountRecord, 4> recs;
  std::array<EstimatedCorrelation, 4> ests;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const int k = i * 2 + j;
      recs[k] = simulate_counts(state.vec, *as[i], *bs[j], shots, det,
                                derive_seed(seed, 1 + k));
      ests[k] = estimate_correlation(recs[k]);
    }
  }
  const ChshEstimate est = estimate_chsh(recs[0], recs[1], recs[2], recs[3]);

  Report rep;
  rep.command = "simulate";
  echo_preparation(rep.config, prep);
  echo_settings(rep.config, ang);
  echo_detector(rep.config, det);
  rep.config["shots"] = shots;
  rep.config["seed"] = seed;
  echo_output(rep.config, opt);
  json pairs = json::array();
  rep.csv = {"pair,value,std_err,n3p,n3pp,n4p,n4pp,lost,detected,shots"};
  for (int k = 0; k < 4; ++k) {
    pairs.push_back(count_record_json(names[k], recs[k], ests[k]));
    rep.csv.push_back(count_record_csv(names[k], recs[k], ests[k]));
  }
  rep.result = {{"pairs", pairs},
                {"s_hat", round9(est.s_hat)},
                {"s_err", round9(est.s_err)}};
  rep.csv.push_back("chsh," + format9(est.s_hat) + "," + format9(est.s_err) +
                    ",,,,,,,");
  return rep;
}

Report cmd_lhv(const Options& opt) {
  const LhvModel model = resolve_lhv_model(opt);
  const double s = lhv_chsh(model);

  Report rep;
  rep.command = "lhv";
  if (opt.lhv_weights) {
    rep.config["lhv_weights"] = *opt.lhv_weights;
  } else {
    rep.config["lhv_model"] = opt.lhv_model.value_or("uniform");
  }
  rep.result = {{"s", round9(s)}};
  std::string header = "s";
  std::string row = format9(s);

  if (opt.shots) {
    const std::uint64_t seed = require_seed(opt);
    const DetectorModel det = resolve_detector(opt);
    std::array<CountRecord, 4> recs;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const int k = i * 2 + j;
        recs[k] = simulate_counts_lhv(model, i + 1, j + 1, *opt.shots, det,
                                      derive_seed(seed, 1 + k));
      }
    }
    const ChshEstimate est = estimate_chsh(recs[0], recs[1], recs[2], recs[3]);
    rep.config["shots"] = *opt.shots;
    rep.config["seed"] = seed;
    echo_detector(rep.config, det);
    rep.result["s_hat"] = round9(est.s_hat);
    rep.result["s_err"] = round9(est.s_err);
    header += ",s_hat,s_err";
    row += "," + format9(est.s_hat) + "," + format9(est.s_err);
  }
  echo_output(rep.config, opt);
  rep.csv = {header, row};
  return rep;
}

Report cmd_imprecision(const Options& opt) {
  const std::string source_name = opt.source.value_or("qm");
  const SettingsAngles ang = resolve_settings(opt);
  const DetectorModel det = resolve_detector(opt);
  ImprecisionSpec spec;
  spec.epsilon = opt.epsilon.value_or(0.0);
  spec.shots_per_setting = opt.shots.value_or(100000);
  spec.trials = opt.trials.value_or(100);
  spec.sigma_threshold = opt.sigma_threshold.value_or(5.0);
  const std::uint64_t seed = require_seed(opt);
  const unsigned threads = opt.threads.value_or(1);

  Report rep;
  rep.command = "imprecision";
  rep.config["source"] = source_name;

  std::optional<ShotSource> source;
  if (source_name == "qm") {
    const PreparationConfig prep = resolve_preparation(opt);
    source = QmSource{prepare_state(prep).vec};
    echo_preparation(rep.config, prep);
  } else if (source_name == "lhv") {
    const LhvModel model = resolve_lhv_model(opt);
    source = LhvSource{model};
    if (opt.lhv_weights) {
      rep.config["lhv_weights"] = *opt.lhv_weights;
    } else {
      rep.config["lhv_model"] = opt.lhv_model.value_or("uniform");
    }
  } else {
    throw std::invalid_argument("source: must be 'qm' or 'lhv'");
  }

  const double fraction =
      violation_fraction(*source, ang, spec, seed, det, threads);

  echo_settings(rep.config, ang);
  echo_detector(rep.config, det);
  rep.config["epsilon"] = spec.epsilon;
  rep.config["shots"] = spec.shots_per_setting;
  rep.config["trials"] = spec.trials;
  rep.config["sigma_threshold"] = spec.sigma_threshold;
  rep.config["seed"] = seed;
  rep.config["threads"] = threads;
  echo_output(rep.config, opt);

  rep.result = {{"fraction", round9(fraction)}};
  rep.csv = {"source,epsilon,shots_per_setting,trials,sigma_threshold,fraction",
             source_name + "," + format9(spec.epsilon) + "," +
                 std::to_string(spec.shots_per_setting) + "," +
                 std::to_string(spec.trials) + "," +
                 format9(spec.sigma_threshold) + "," + format9(fraction)};
  return rep;
}

Report cmd_wavepacket(const Options& opt) {
  WavePacketSpec spec;
  spec.sigma0 = opt.sigma0.value_or(1e-4);
  spec.velocity = opt.velocity.value_or(2e3);
  spec.distance = opt.distance.value_or(1.0);
  spec.mass = opt.mass.value_or(kNeutronMass);
  const WavePacketResult res = wavepacket_spread(spec);

  Report rep;
  rep.command = "wavepacket";
  rep.config = {{"sigma0", spec.sigma0},
                {"velocity", spec.velocity},
                {"distance", spec.distance},
                {"mass", spec.mass}};
  echo_output(rep.config, opt);
  rep.result = {{"final_width", round9(res.final_width)},
                {"delta", round9(res.delta)}};
  rep.csv = {"final_width,delta",
             format9(res.final_width) + "," + format9(res.delta)};
  return rep;
}

Report cmd_sweep(const Options& opt) {
  const std::string param = opt.param.value_or("");
  if (param != "a" && param != "theta1" && param != "epsilon") {
    throw std::invalid_argument("param: must be one of 'a', 'theta1', 'epsilon'");
  }
  if (!opt.from || !opt.to) {
    throw std::invalid_argument("from/to: sweep range is required");
  }
  const double lo = *opt.from;
  const double hi = *opt.to;
  const int steps = opt.steps.value_or(11);
  if (steps < 2) throw std::invalid_argument("steps: must be >= 2");
  if (!(lo < hi)) throw std::invalid_argument("from/to: range is empty or inverted");
  if (param == "a" && (lo < 0.0 || hi > 1.0)) {
    throw std::invalid_argument("from/to: amplitude sweep must stay in [0, 1]");
  }

  Report rep;
  rep.command = "sweep";
  rep.config["param"] = param;
  rep.config["from"] = lo;
  rep.config["to"] = hi;
  rep.config["steps"] = steps;

  json rows = json::array();
  if (param == "a") {
    const double delta = opt.prep_delta.value_or(kPi);
    const OptimizerOptions oo = resolve_optimizer(opt);
    rep.config["prep_delta"] = delta;
    echo_optimizer(rep.config, oo);
    rep.csv = {"a,s_max,error"};
    for (int k = 0; k < steps; ++k) {
      const double a = lo + (hi - lo) * k / (steps - 1);
      const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
      const PathSpinState state = prepare_state({a, b, delta});
      const OptimizationResult res = optimize_settings(state.vec, oo);
      rows.push_back({{"a", round9(a)}, {"s_max", round9(res.s_max)},
                      {"error", 0.0}});
      rep.csv.push_back(format9(a) + "," + format9(res.s_max) + ",0");
    }
  } else if (param == "theta1") {
    const PreparationConfig prep = resolve_preparation(opt);
    const PathSpinState state = prepare_state(prep);
    SettingsAngles ang = resolve_settings(opt);
    echo_preparation(rep.config, prep);
    echo_settings(rep.config, ang);
    rep.csv = {"theta1,s,error"};
    for (int k = 0; k < steps; ++k) {
      const double theta1 = lo + (hi - lo) * k / (steps - 1);
      ang.theta1 = theta1;
      const ChshResult r = chsh_value(state.vec, ang.build());
      rows.push_back({{"theta1", round9(theta1)}, {"s", round9(r.s)},
                      {"error", 0.0}});
      rep.csv.push_back(format9(theta1) + "," + format9(r.s) + ",0");
    }
  } else {  // epsilon
    const PreparationConfig prep = resolve_preparation(opt);
    const PathSpinState state = prepare_state(prep);
    const SettingsAngles ang = resolve_settings(opt);
    const DetectorModel det = resolve_detector(opt);
    ImprecisionSpec spec;
    spec.shots_per_setting = opt.shots.value_or(100000);
    spec.trials = opt.trials.value_or(100);
    spec.sigma_threshold = opt.sigma_threshold.value_or(5.0);
    const std::uint64_t seed = require_seed(opt);
    const unsigned threads = opt.threads.value_or(1);
    echo_preparation(rep.config, prep);
    echo_settings(rep.config, ang);
    echo_detector(rep.config, det);
    rep.config["shots"] = spec.shots_per_setting;
    rep.config["trials"] = spec.trials;
    rep.config["sigma_threshold"] = spec.sigma_threshold;
    rep.config["seed"] = seed;
    rep.config["threads"] = threads;
    rep.csv = {"epsilon,fraction,error"};
    // Rows share the master seed: trial sub-seeds repeat across epsilon
    // values (common random numbers), which keeps the fraction curve
    // monotone at modest trial counts.
    for (int k = 0; k < steps; ++k) {
      spec.epsilon = lo + (hi - lo) * k / (steps - 1);
      const double f = violation_fraction(QmSource{state.vec}, ang, spec, seed,
                                          det, threads);
      const double se =
          std::sqrt(std::max(0.0, f * (1.0 - f) / spec.trials));
      rows.push_back({{"epsilon", round9(spec.epsilon)},
                      {"fraction", round9(f)}, {"error", round9(se)}});
      rep.csv.push_back(format9(spec.epsilon) + "," + format9(f) + "," +
                        format9(se));
    }
  }
  echo_output(rep.config, opt);
  rep.result = {{"rows", rows}};
  return rep;
}

// ----------------------------------------------------------------------
// wiring

struct Flags {
  Options opt;
  bool full_sphere_flag = false;
};

void add_prep_options(CLI::App* sub, Flags& f) {
  sub->add_option("--prep-a", f.opt.prep_a,
                  "BS1 transmission amplitude (default 1/sqrt(2))");
  sub->add_option("--prep-b", f.opt.prep_b,
                  "BS1 reflection amplitude (default sqrt(1-a^2))");
  sub->add_option("--prep-delta", f.opt.prep_delta.raw,
                  "PS1 phase (radians, or e.g. '180deg'; default pi)");
}

void add_settings_options(CLI::App* sub, Flags& f) {
  sub->add_option("--theta1", f.opt.theta1.raw, "path angle of A1 (default pi/2)");
  sub->add_option("--theta2", f.opt.theta2.raw, "path angle of A2 (default pi/4)");
  sub->add_option("--b1", f.opt.b1.raw, "B1 spin polar angle (default 5pi/4)");
  sub->add_option("--b2", f.opt.b2.raw, "B2 spin polar angle (default 3pi/4)");
  sub->add_option("--b1-azimuth", f.opt.b1_azimuth.raw, "B1 spin azimuth (default 0)");
  sub->add_option("--b2-azimuth", f.opt.b2_azimuth.raw, "B2 spin azimuth (default 0)");
}

void add_detector_options(CLI::App* sub, Flags& f) {
  sub->add_option("--efficiency", f.opt.efficiency, "detector efficiency (default 1)");
  sub->add_option("--absorption", f.opt.absorption,
                  "absorption per beam-splitter traversal (default 0)");
}

void add_optimizer_options(CLI::App* sub, Flags& f) {
  sub->add_option("--grid-resolution", f.opt.grid_resolution,
                  "coarse grid points per angle (default 64)");
  sub->add_option("--refine-iterations", f.opt.refine_iterations,
                  "refinement sweeps (default 40)");
  sub->add_option("--refine-shrink", f.opt.refine_shrink,
                  "bracket shrink factor in (0,1) (default 0.7)");
  sub->add_flag("--full-sphere", f.full_sphere_flag, "search spin azimuths too");
}

void add_output_options(CLI::App* sub, Flags& f) {
  sub->add_option("--output", f.opt.output, "report format: csv or json (default json)");
  sub->add_option("--out-file", f.opt.out_file, "write the report to a file");
  sub->add_option("--config", f.opt.config_file,
                  "JSON file with defaults (flags take precedence)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"path-spin interferometer Bell-test simulator"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* chsh = app.add_subcommand(
      "chsh", "exact correlations and S for fixed settings");
  add_prep_options(chsh, f);
  add_settings_options(chsh, f);
  add_output_options(chsh, f);

  CLI::App* optimize = app.add_subcommand(
      "optimize", "maximize |S| over measurement settings");
  add_prep_options(optimize, f);
  add_optimizer_options(optimize, f);
  add_output_options(optimize, f);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "scan a parameter: S or violation fraction per point");
  add_prep_options(sweep, f);
  add_settings_options(sweep, f);
  add_detector_options(sweep, f);
  add_optimizer_options(sweep, f);
  add_output_options(sweep, f);
  sweep->add_option("--param", f.opt.param, "swept parameter: a, theta1 or epsilon");
  sweep->add_option("--from", f.opt.from, "range start");
  sweep->add_option("--to", f.opt.to, "range end");
  sweep->add_option("--steps", f.opt.steps, "number of points, >= 2 (default 11)");
  sweep->add_option("--shots", f.opt.shots, "shots per setting (epsilon sweep)");
  sweep->add_option("--trials", f.opt.trials, "trials per point (epsilon sweep)");
  sweep->add_option("--sigma-threshold", f.opt.sigma_threshold,
                    "violation margin in std. errors (default 5)");
  sweep->add_option("--seed", f.opt.seed, "master seed (epsilon sweep)");
  sweep->add_option("--threads", f.opt.threads, "worker threads (default 1)");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "shot-level counts and estimators for all four pairs");
  add_prep_options(simulate, f);
  add_settings_options(simulate, f);
  add_detector_options(simulate, f);
  add_output_options(simulate, f);
  simulate->add_option("--shots", f.opt.shots, "shots per setting pair (default 1e6)");
  simulate->add_option("--seed", f.opt.seed, "master seed (required)");

  CLI::App* lhv = app.add_subcommand(
      "lhv", "noncontextual-model S, exact and optionally sampled");
  lhv->add_option("--lhv-model", f.opt.lhv_model,
                  "'uniform' or 'point:<0..15>' (default uniform)");
  lhv->add_option("--shots", f.opt.shots, "sample shot-level estimate too");
  lhv->add_option("--seed", f.opt.seed, "master seed (with --shots)");
  add_detector_options(lhv, f);
  add_output_options(lhv, f);

  CLI::App* imprecision = app.add_subcommand(
      "imprecision", "violation fraction under Gaussian angle jitter");
  add_prep_options(imprecision, f);
  add_settings_options(imprecision, f);
  add_detector_options(imprecision, f);
  add_output_options(imprecision, f);
  imprecision->add_option("--source", f.opt.source, "'qm' or 'lhv' (default qm)");
  imprecision->add_option("--lhv-model", f.opt.lhv_model,
                          "'uniform' or 'point:<0..15>' (with --source lhv)");
  imprecision->add_option("--epsilon", f.opt.epsilon.raw,
                          "angle jitter std. dev. (radians; default 0)");
  imprecision->add_option("--shots", f.opt.shots,
                          "shots per setting per trial (default 1e5)");
  imprecision->add_option("--trials", f.opt.trials, "trials (default 100)");
  imprecision->add_option("--sigma-threshold", f.opt.sigma_threshold,
                          "violation margin in std. errors (default 5)");
  imprecision->add_option("--seed", f.opt.seed, "master seed (required)");
  imprecision->add_option("--threads", f.opt.threads, "worker threads (default 1)");

  CLI::App* wavepacket = app.add_subcommand(
      "wavepacket", "free-particle Gaussian dispersion over the flight path");
  wavepacket->add_option("--sigma0", f.opt.sigma0, "initial width, m (default 1e-4)");
  wavepacket->add_option("--velocity", f.opt.velocity, "mean velocity, m/s (default 2e3)");
  wavepacket->add_option("--distance", f.opt.distance, "flight path, m (default 1)");
  wavepacket->add_option("--mass", f.opt.mass, "particle mass, kg (default neutron)");
  add_output_options(wavepacket, f);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("pathspin");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
      err << "config error: " << e.what() << "\n";
      return 2;
    }

    if (f.full_sphere_flag) f.opt.full_sphere = true;
    merge_config_file(f.opt);
    f.opt.resolve_angles();

    Report rep;
    if (chsh->parsed()) {
      rep = cmd_chsh(f.opt);
    } else if (optimize->parsed()) {
      rep = cmd_optimize(f.opt);
    } else if (sweep->parsed()) {
      rep = cmd_sweep(f.opt);
    } else if (simulate->parsed()) {
      rep = cmd_simulate(f.opt);
    } else if (lhv->parsed()) {
      rep = cmd_lhv(f.opt);
    } else if (imprecision->parsed()) {
      rep = cmd_imprecision(f.opt);
    } else {
      rep = cmd_wavepacket(f.opt);
    }
    emit(rep, f.opt, out);
    return 0;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace pathspin::cli
