#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "valvelab/adapt.hpp"
#include "valvelab/error.hpp"
#include "valvelab/presets.hpp"
#include "valvelab/spectral.hpp"

namespace valvelab::cli {

namespace fs = std::filesystem;

void Report::add(const std::string& name, double value) { lines_.emplace_back(name, csv::format_number(value)); }

void Report::add(const std::string& name, const std::string& value) { lines_.emplace_back(name, value); }

std::string Report::to_string() const {
  std::string out;
  for (const auto& [name, value] : lines_) out += name + " = " + value + "\n";
  return out;
}

namespace {

const std::set<std::string> kRunKeys{"ts", "seed", "out"};
const std::set<std::string> kPrbsKeys{"n_registers", "taps", "divider", "seed", "offset", "amplitude", "periods"};
const std::set<std::string> kModelKeys{"a", "b", "delay", "identify_preset", "na", "nb"};
const std::set<std::string> kDesignKeys{"method", "omega0", "zeta", "auxiliary", "fixed_s", "fixed_r", "n_freq"};
const std::set<std::string> kTrackKeys{"levels", "hold", "skip", "warmup"};

std::set<std::string> valve_keys() {
  std::set<std::string> keys{"preset"};
  for (const auto& k : plant::parameter_keys()) keys.insert(k);
  return keys;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string indexed(const std::string& stem, std::size_t i) { return stem + "_" + std::to_string(i); }

std::size_t positive_count(const Config& c, const std::string& section, const std::string& key, long long fallback,
                           long long minimum = 1) {
  const long long v = c.get_int(section, key, fallback);
  if (v < minimum) {
    const auto* e = c.find(section, key);
    throw ConfigError((e ? e->origin + ": " : std::string{}) + "[" + section + "] " + key + " must be at least " +
                      std::to_string(minimum));
  }
  return static_cast<std::size_t>(v);
}

struct Context {
  const Config& config;
  const RunOptions& options;
  double ts = 0.05;
  std::optional<std::uint64_t> seed;
};

plant::ValveParams valve_params(const Context& ctx, const std::string& preset) {
  auto p = plant::resolve_preset(preset);
  if (const auto s = ctx.config.sections().find("valve"); s != ctx.config.sections().end()) {
    for (const auto& [key, entry] : s->second) {
      if (key == "preset") continue;
      try {
        plant::set_parameter(p, key, entry.value);
      } catch (const Error& e) {
        throw ConfigError(entry.origin + ": " + e.what());
      }
    }
  }
  if (ctx.seed) p.rng_seed = *ctx.seed;
  p.validate();
  return p;
}

signals::PrbsConfig prbs_from(const Config& c, const std::string& section, signals::PrbsConfig cfg) {
  cfg.n_registers = static_cast<int>(c.get_int(section, "n_registers", cfg.n_registers));
  if (c.has(section, "taps")) {
    cfg.taps.clear();
    for (double t : c.get_list(section, "taps", {})) cfg.taps.push_back(static_cast<int>(t));
  }
  cfg.divider = static_cast<int>(c.get_int(section, "divider", cfg.divider));
  cfg.seed = static_cast<std::uint32_t>(c.get_u64(section, "seed", cfg.seed));
  cfg.offset = c.get_double(section, "offset", cfg.offset);
  cfg.amplitude = c.get_double(section, "amplitude", cfg.amplitude);
  return cfg;
}

adapt::OpenLoopExperiment experiment_from(const Context& ctx) {
  adapt::OpenLoopExperiment ex;
  ex.prbs = prbs_from(ctx.config, "prbs", ex.prbs);
  ex.prbs.validate();
  ex.periods = positive_count(ctx.config, "prbs", "periods", 2, 2);
  ex.ts = ctx.ts;
  ex.na = positive_count(ctx.config, "model", "na", 1, 0);
  ex.nb = positive_count(ctx.config, "model", "nb", 1);
  return ex;
}

/// Explicit [model] a/b, an identification run on a named preset, or (with a fallback valve) that valve.
plant::DiscretePlantModel model_from(const Context& ctx, const plant::ValveParams* fallback, Report& report) {
  const Config& c = ctx.config;
  const bool explicit_model = c.has("model", "a") || c.has("model", "b");
  if (explicit_model && c.has("model", "identify_preset"))
    throw ConfigError(c.find("model", "identify_preset")->origin + ": give either a/b or identify_preset, not both");
  if (explicit_model) {
    if (!c.has("model", "b")) throw ConfigError(c.find("model", "a")->origin + ": [model] b is required with a");
    plant::DiscretePlantModel m;
    if (c.has("model", "a")) {
      const auto a = c.get_list("model", "a", {});
      m.a = a;
    }
    m.b = c.get_list("model", "b", {});
    m.delay = positive_count(c, "model", "delay", 0, 0);
    m.ts = ctx.ts;
    m.validate();
    report.add("model_source", std::string("explicit"));
    return m;
  }
  const auto ex = experiment_from(ctx);
  plant::DiscretePlantModel m;
  if (c.has("model", "identify_preset")) {
    const std::string name = c.get_string("model", "identify_preset", "");
    m = adapt::open_loop_fit(plant::resolve_preset(name), ex);
    report.add("model_source", "identified:" + name);
  } else if (fallback) {
    m = adapt::open_loop_fit(*fallback, ex);
    report.add("model_source", std::string("identified:valve"));
  } else {
    throw ConfigError("[model] needs a and b, or identify_preset");
  }
  m.delay = positive_count(c, "model", "delay", 0, 0);
  return m;
}

void report_model(const plant::DiscretePlantModel& m, Report& report) {
  for (std::size_t i = 0; i < m.a.size(); ++i) report.add(indexed("model_a", i + 1), m.a[i]);
  for (std::size_t i = 0; i < m.b.size(); ++i) report.add(indexed("model_b", i + 1), m.b[i]);
  report.add("model_delay", static_cast<double>(m.delay));
}

control::PoleSpec poles_from(const Context& ctx) {
  const Config& c = ctx.config;
  control::PoleSpec spec;
  spec.omega0 = c.get_double("design", "omega0", spec.omega0);
  spec.zeta = c.get_double("design", "zeta", spec.zeta);
  spec.ts = ctx.ts;
  if (c.has("design", "auxiliary")) spec.auxiliary = DelayPolynomial(c.get_list("design", "auxiliary", {1.0}));
  spec.validate();
  return spec;
}

adapt::DesignSpec design_spec_from(const Context& ctx) {
  const Config& c = ctx.config;
  adapt::DesignSpec d;
  d.poles = poles_from(ctx);
  if (c.has("design", "fixed_s")) d.fixed_s = DelayPolynomial(c.get_list("design", "fixed_s", {}));
  if (c.has("design", "fixed_r")) d.fixed_r = DelayPolynomial(c.get_list("design", "fixed_r", {}));
  return d;
}

std::string design_method(const Context& ctx) {
  const std::string m = ctx.config.get_string("design", "method", "robust");
  if (m != "robust" && m != "pi") {
    throw ConfigError(ctx.config.find("design", "method")->origin + ": method must be 'robust' or 'pi'");
  }
  return m;
}

control::RstController controller_from(const Context& ctx, const plant::DiscretePlantModel& m) {
  if (design_method(ctx) == "pi") {
    if (m.na() != 1 || m.nb() != 1 || m.delay != 0) throw ConfigError("[design] method = pi needs na = nb = 1, delay = 0");
    return control::pi_design(m.a[0], m.b[0], control::dominant_poles(poles_from(ctx)), ctx.ts);
  }
  return design_spec_from(ctx).design(m);
}

adapt::EvaluationScenario scenario_from(const Context& ctx) {
  const Config& c = ctx.config;
  adapt::EvaluationScenario s;
  s.levels = c.get_list("track", "levels", s.levels);
  s.hold = c.get_double("track", "hold", s.hold);
  s.skip = positive_count(c, "track", "skip", static_cast<long long>(s.skip), 0);
  s.warmup = positive_count(c, "track", "warmup", static_cast<long long>(s.warmup), 0);
  return s;
}

void report_controller(const control::RstController& ctrl, Report& report) {
  for (std::size_t i = 0; i < ctrl.R().size(); ++i) report.add(indexed("r", i), ctrl.R()[i]);
  for (std::size_t i = 0; i < ctrl.S().size(); ++i) report.add(indexed("s", i), ctrl.S()[i]);
  for (std::size_t i = 0; i < ctrl.T().size(); ++i) report.add(indexed("t", i), ctrl.T()[i]);
}

// ---------------------------------------------------------------- commands

void cmd_sweep(const Context& ctx, const plant::ValveParams& p, const fs::path& dir, Report& report) {
  const Config& c = ctx.config;
  const double low = c.get_double("sweep", "low", 0.0);
  const double high = c.get_double("sweep", "high", 40.0);
  const double step = c.get_double("sweep", "step", 5.0);
  const double hold = c.get_double("sweep", "hold", 2.5);
  if (!(step > 0.0) || !(high >= low)) throw ConfigError("[sweep] needs step > 0 and high >= low");
  std::vector<double> levels;
  for (std::size_t i = 0; low + i * step <= high + 1e-9 * step; ++i) levels.push_back(low + i * step);
  const auto sweep = plant::static_sweep(p, levels, hold, ctx.ts);

  csv::Table map;
  map.header = {"u", "angle_up", "angle_down", "width"};
  for (const auto& pt : sweep.points) map.add_row({pt.u, pt.angle_up, pt.angle_down, pt.angle_up - pt.angle_down});
  map.write(dir / "sweep.csv");
  csv::Table trace;
  trace.header = {"t", "u", "y"};
  for (std::size_t k = 0; k < sweep.u.size(); ++k) trace.add_row({k * ctx.ts, sweep.u[k], sweep.y[k]});
  trace.write(dir / "sweep_trace.csv");

  report.add("levels", static_cast<double>(sweep.points.size()));
  report.add("max_hysteresis_deg", sweep.max_width());
  report.add("angle_at_low_up_deg", sweep.points.front().angle_up);
  report.add("angle_at_low_down_deg", sweep.points.front().angle_down);
  report.add("angle_at_high_deg", sweep.points.back().angle_up);
  report.add("dc_gain_deg_per_pct", (sweep.points.back().angle_up - sweep.points.front().angle_up) /
                                        (sweep.points.back().u - sweep.points.front().u));
}

void cmd_etfe(const Context& ctx, const plant::ValveParams& p, const fs::path& dir, Report& report) {
  const Config& c = ctx.config;
  const auto ex = experiment_from(ctx);
  const std::size_t window = positive_count(c, "spectral", "smooth", 25);
  const double band_low = c.get_double("spectral", "band_low", 3.0);
  const double band_high = c.get_double("spectral", "band_high", 30.0);
  const double t_rise = c.get_double("spectral", "rise_time", 0.8);

  const auto data = adapt::open_loop_run(p, ex);
  const auto raw = spectral::etfe(data.u, data.y, ctx.ts);
  const auto smoothed = spectral::smooth(raw, window);
  csv::single_column("u", signals::prbs_generate(ex.prbs, ex.prbs.period_samples())).write(dir / "excitation.csv");
  csv::Table io;
  io.header = {"t", "u", "y"};
  for (std::size_t k = 0; k < data.u.size(); ++k) io.add_row({k * ctx.ts, data.u[k], data.y[k]});
  io.write(dir / "io.csv");
  raw.to_table().write(dir / "etfe_raw.csv");
  smoothed.to_table().write(dir / "etfe_smoothed.csv");

  report.add("samples", static_cast<double>(data.u.size()));
  report.add("prbs_period_samples", static_cast<double>(ex.prbs.period_samples()));
  report.add("prbs_longest_pulse_s", ex.prbs.divider * ex.prbs.n_registers * ctx.ts);
  report.add("prbs_constraint_ok", std::string(signals::check_prbs_constraint(ex.prbs, ctx.ts, t_rise) ? "yes" : "no"));
  report.add("slope_db_per_decade", spectral::slope_fit(smoothed, band_low, band_high));
  report.add("corner_rad_s", spectral::corner_frequency(smoothed));
  report.add("low_frequency_gain_db", spectral::to_db(smoothed.values.front()));
}

void cmd_identify(const Context& ctx, const plant::ValveParams& p, const fs::path& dir, Report& report) {
  const Config& c = ctx.config;
  const std::size_t na = positive_count(c, "identify", "na", 1, 0);
  const std::size_t nb = positive_count(c, "identify", "nb", 1);
  const std::size_t scan_na = positive_count(c, "identify", "scan_na", 3);
  const std::size_t scan_nb = positive_count(c, "identify", "scan_nb", 3);

  std::vector<double> u, y;
  if (c.has("identify", "data")) {
    const auto origin = c.find("identify", "data")->origin;
    const auto table = csv::read(c.get_string("identify", "data", ""));
    u = table.column("u");
    y = table.column("y");
    if (u.empty()) throw InputError(origin + ": identify: input data has zero samples");
  } else {
    const auto ex = experiment_from(ctx);
    const std::size_t period = ex.prbs.period_samples();
    const std::size_t samples = positive_count(c, "identify", "samples", static_cast<long long>(period), 0);
    if (samples == 0) throw InputError(c.find("identify", "samples")->origin + ": identify: zero samples requested");
    const std::size_t settle = positive_count(c, "identify", "settle", static_cast<long long>(period), 0);
    const auto input = signals::prbs_generate(ex.prbs, settle + samples);
    const auto output = plant::valve_run(p, input, ctx.ts);
    u.assign(input.begin() + static_cast<std::ptrdiff_t>(settle), input.end());
    y.assign(output.begin() + static_cast<std::ptrdiff_t>(settle), output.end());
    csv::Table io;
    io.header = {"t", "u", "y"};
    for (std::size_t k = 0; k < u.size(); ++k) io.add_row({k * ctx.ts, u[k], y[k]});
    io.write(dir / "io.csv");
  }
  if (u.size() <= std::max(na, nb)) throw InputError("identify: need more than max(na, nb) samples");
  const auto ud = ident::detrend(u);
  const auto yd = ident::detrend(y);

  const auto fit = ident::batch_least_squares(ident::build_regressors(ud, yd, na, nb));
  std::vector<std::size_t> nas, nbs;
  for (std::size_t i = 1; i <= scan_na; ++i) nas.push_back(i);
  for (std::size_t j = 1; j <= scan_nb; ++j) nbs.push_back(j);
  const auto scan = ident::order_scan(ud, yd, nas, nbs);
  scan.to_table().write(dir / "order_scan.csv");

  csv::Table th;
  th.header = {"index", "value"};
  for (Eigen::Index i = 0; i < fit.theta.size(); ++i) th.add_row({static_cast<double>(i + 1), fit.theta(i)});
  th.write(dir / "theta.csv");

  report.add("samples", static_cast<double>(u.size()));
  report.add("na", static_cast<double>(na));
  report.add("nb", static_cast<double>(nb));
  for (std::size_t i = 0; i < na; ++i) report.add(indexed("a", i + 1), fit.theta(static_cast<Eigen::Index>(i)));
  for (std::size_t j = 0; j < nb; ++j) report.add(indexed("b", j + 1), fit.theta(static_cast<Eigen::Index>(na + j)));
  report.add("criterion", fit.criterion);
  report.add("condition", fit.condition);
  const std::vector<double> theta(fit.theta.data(), fit.theta.data() + fit.theta.size());
  report.add("dc_gain", plant::DiscretePlantModel::from_theta(theta, na, nb, 0, ctx.ts).dc_gain());
  if (scan_na >= 1 && scan_nb >= 2) report.add("normalized_criterion_1_2", scan.normalized(1, 2));
}

void cmd_design(const Context& ctx, const fs::path& dir, Report& report) {
  const auto model = model_from(ctx, nullptr, report);
  report_model(model, report);
  const std::string method = design_method(ctx);
  const auto poles = poles_from(ctx);
  const auto dominant = control::dominant_poles(poles);
  const auto ctrl = controller_from(ctx, model);
  const std::size_t n_freq = positive_count(ctx.config, "design", "n_freq", 512, 64);
  const auto sens = control::sensitivity(model, ctrl, n_freq);
  const auto target = method == "pi" ? dominant : (dominant * poles.auxiliary).trimmed();

  write_text(dir / "controller.txt", ctrl.to_text());
  sens.to_table().write(dir / "sensitivity.csv");

  report.add("method", method);
  report.add("p1", dominant[1]);
  report.add("p2", dominant[2]);
  report_controller(ctrl, report);
  report.add("pole_placement_residual", control::pole_placement_residual(model, ctrl, target));
  report.add("modulus_margin", sens.modulus_margin);
  report.add("max_syp_db", sens.max_syp_db);
  report.add("sup_nyquist_db", sens.sup_db_at_nyquist());
}

void cmd_track(const Context& ctx, const plant::ValveParams& p, const fs::path& dir, Report& report) {
  const auto model = model_from(ctx, &p, report);
  report_model(model, report);
  const auto ctrl = controller_from(ctx, model);
  const auto scenario = scenario_from(ctx);
  plant::ValveSimulator sim(p, ctx.ts);
  const auto ev = adapt::evaluate(sim, ctrl, scenario);

  control::ReferenceModel expected(control::closed_loop_polynomial(model, ctrl).trimmed(),
                                   model.delayed_B() * ctrl.T()[0]);
  const double r0 = ev.r.front();
  csv::Table t;
  t.header = {"t", "r", "y", "u", "y_expected"};
  for (std::size_t k = 0; k < ev.r.size(); ++k)
    t.add_row({k * ctx.ts, ev.r[k], ev.y[k], ev.u[k], r0 + expected.step(ev.r[k] - r0)});
  t.write(dir / "track.csv");
  write_text(dir / "controller.txt", ctrl.to_text());

  report_controller(ctrl, report);
  report.add("samples", static_cast<double>(ev.r.size()));
  report.add("tracking_cost_deg2", ev.cost);
  report.add("saturation_fraction", ev.saturation_fraction);
  report.add("final_error_deg", ev.y.back() - ev.r.back());
}

void cmd_adapt(const Context& ctx, const plant::ValveParams& p, const fs::path& dir, Report& report) {
  const Config& c = ctx.config;
  const auto model = model_from(ctx, &p, report);
  report_model(model, report);
  if (design_method(ctx) != "robust") throw ConfigError("[design] method must be robust for adapt");
  const auto spec = design_spec_from(ctx);

  adapt::IterateOptions opt;
  opt.iterations = positive_count(c, "adapt", "iterations", 4);
  opt.mode = adapt::parse_mode(c.get_string("adapt", "mode", "iterative"));
  opt.profile = ident::parse_profile(c.get_string("adapt", "profile", "variable-forgetting"));
  opt.initial_gain = c.get_double("adapt", "gain", opt.initial_gain);
  opt.lambda0 = c.get_double("adapt", "lambda0", opt.lambda0);
  opt.lambda1 = c.get_double("adapt", "lambda1", opt.lambda1);
  opt.stop_improvement = c.get_double("adapt", "stop_improvement", 0.0);
  opt.excitation.prbs = prbs_from(c, "excitation", opt.excitation.prbs);
  opt.excitation.prbs.offset = 0.0;
  opt.excitation.prbs.validate_register();
  opt.excitation.samples = positive_count(c, "excitation", "samples", 300);
  opt.excitation.warmup = positive_count(c, "excitation", "warmup", 40, 0);
  opt.excitation.reference = c.get_double("excitation", "reference", 40.0);
  opt.scenario = scenario_from(ctx);
  const bool traces = c.get_bool("adapt", "traces", true);

  plant::ValveSimulator sim(p, ctx.ts);
  const auto records = adapt::iterate(sim, model, spec, opt);
  adapt::iteration_table(records).write(dir / "iterations.csv");
  if (traces) {
    for (const auto& rec : records) {
      csv::Table ev;
      ev.header = {"t", "r", "y", "u"};
      for (std::size_t k = 0; k < rec.evaluation.r.size(); ++k)
        ev.add_row({k * ctx.ts, rec.evaluation.r[k], rec.evaluation.y[k], rec.evaluation.u[k]});
      ev.write(dir / ("evaluation_" + std::to_string(rec.iteration) + ".csv"));
      if (rec.session) rec.session->to_table().write(dir / ("session_" + std::to_string(rec.iteration) + ".csv"));
    }
  }
  write_text(dir / "controller.txt", records.back().controller.to_text());

  report.add("mode", adapt::to_string(opt.mode));
  report.add("iterations_run", static_cast<double>(records.size() - 1));
  std::size_t failures = 0;
  for (const auto& rec : records) {
    report.add(indexed("tracking_cost", rec.iteration), rec.tracking_cost);
    if (!rec.error.empty()) ++failures;
  }
  for (std::size_t i = 0; i < records.back().theta.size(); ++i)
    report.add(indexed("theta", i + 1), records.back().theta[i]);
  report.add("margin_db", records.back().margin_db);
  report.add("redesign_failures", static_cast<double>(failures));
  const double first = records.front().tracking_cost;
  report.add("relative_improvement", first > 0.0 ? (first - records.back().tracking_cost) / first : 0.0);
}

void cmd_presets(const Context&, const plant::ValveParams& p, const fs::path& dir, Report& report) {
  write_text(dir / "preset.txt", plant::format_preset(p));
  report.add("time_constant_s", p.time_constant());
  report.add("dc_gain_deg_per_pct", p.dc_gain());
  report.add("rest_angle_deg", p.spring_rest_angle);
  report.add("hysteresis_estimate_deg", (p.coulomb_open + p.coulomb_close) / p.spring_stiffness);
}

using ValveCommand = void (*)(const Context&, const plant::ValveParams&, const fs::path&, Report&);

ValveCommand valve_command(const std::string& name) {
  if (name == "sweep") return cmd_sweep;
  if (name == "etfe") return cmd_etfe;
  if (name == "identify") return cmd_identify;
  if (name == "track") return cmd_track;
  if (name == "adapt") return cmd_adapt;
  if (name == "presets") return cmd_presets;
  return nullptr;
}

int classify(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InputError*>(&e)) return kInvalid;
  return kRuntime;
}

struct Outcome {
  int status = kOk;
  std::string message;
  Report report;
};

}  // namespace

std::vector<std::string> command_names() { return {"sweep", "etfe", "identify", "design", "track", "adapt", "presets"}; }

Schema schema_for(const std::string& command) {
  Schema s{{"run", kRunKeys}};
  const auto valve = valve_keys();
  if (command == "sweep") {
    s["valve"] = valve;
    s["sweep"] = {"low", "high", "step", "hold"};
  } else if (command == "etfe") {
    s["valve"] = valve;
    s["prbs"] = kPrbsKeys;
    s["spectral"] = {"smooth", "band_low", "band_high", "rise_time"};
  } else if (command == "identify") {
    s["valve"] = valve;
    s["prbs"] = kPrbsKeys;
    s["identify"] = {"na", "nb", "scan_na", "scan_nb", "data", "samples", "settle"};
  } else if (command == "design") {
    s["model"] = kModelKeys;
    s["prbs"] = kPrbsKeys;
    s["design"] = kDesignKeys;
  } else if (command == "track") {
    s["valve"] = valve;
    s["model"] = kModelKeys;
    s["prbs"] = kPrbsKeys;
    s["design"] = kDesignKeys;
    s["track"] = kTrackKeys;
  } else if (command == "adapt") {
    s["valve"] = valve;
    s["model"] = kModelKeys;
    s["prbs"] = kPrbsKeys;
    s["design"] = kDesignKeys;
    s["track"] = kTrackKeys;
    s["excitation"] = {"n_registers", "taps", "divider", "seed", "amplitude", "samples", "warmup", "reference"};
    s["adapt"] = {"iterations", "mode", "profile", "gain", "lambda0", "lambda1", "stop_improvement", "traces"};
  } else if (command == "presets") {
    s["valve"] = valve;
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  return s;
}

int run_command(const std::string& command, const Config& config, const RunOptions& options, std::ostream& log) {
  Outcome setup;
  std::vector<std::string> presets;
  fs::path out;
  Context ctx{config, options, 0.05, std::nullopt};
  try {
    validate(config, schema_for(command));
    ctx.ts = config.get_double("run", "ts", 0.05);
    if (!(ctx.ts > 0.0) || std::fabs(std::round(ctx.ts / plant::kInternalStep) * plant::kInternalStep - ctx.ts) > 1e-12)
      throw ConfigError("[run] ts must be a positive multiple of 1 ms");
    ctx.seed = options.seed;
    if (!ctx.seed && config.has("run", "seed")) ctx.seed = config.get_u64("run", "seed", 0);
    out = options.out ? *options.out : fs::path(config.get_string("run", "out", "valvelab-out"));
    if (command == "presets" && !config.has("valve", "preset"))
      presets = plant::preset_names();
    else
      presets = config.get_words("valve", "preset", {"valve0"});
    fs::create_directories(out);
  } catch (const std::exception& e) {
    log << "valvelab " << command << ": " << e.what() << "\n";
    return classify(e);
  }

  if (command == "design") {
    Outcome o;
    try {
      cmd_design(ctx, out, o.report);
      write_text(out / "report.txt", o.report.to_string());
    } catch (const std::exception& e) {
      log << "valvelab design: " << e.what() << "\n";
      return classify(e);
    }
    log << o.report.to_string();
    return kOk;
  }

  const ValveCommand run = valve_command(command);
  const bool fan_out = presets.size() > 1;
  std::vector<Outcome> outcomes(presets.size());
  auto work = [&](std::size_t i) {
    try {
      const fs::path dir = fan_out ? out / fs::path(presets[i]).stem() : out;
      fs::create_directories(dir);
      const auto params = valve_params(ctx, presets[i]);
      outcomes[i].report.add("valve", presets[i]);
      run(ctx, params, dir, outcomes[i].report);
      write_text(dir / "report.txt", outcomes[i].report.to_string());
    } catch (const std::exception& e) {
      outcomes[i].status = classify(e);
      outcomes[i].message = e.what();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(options.parallel, static_cast<unsigned>(presets.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < presets.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < presets.size(); i = next++) work(i);
      });
    for (auto& t : pool) t.join();
  }

  int status = kOk;
  std::string combined;
  for (std::size_t i = 0; i < presets.size(); ++i) {
    if (outcomes[i].status != kOk) {
      log << "valvelab " << command << " [" << presets[i] << "]: " << outcomes[i].message << "\n";
      status = std::max(status, outcomes[i].status);
    } else {
      combined += outcomes[i].report.to_string();
      if (fan_out) combined += "\n";
    }
  }
  log << combined;
  if (fan_out && status == kOk) {
    try {
      write_text(out / "report.txt", combined);
    } catch (const std::exception& e) {
      log << "valvelab " << command << ": " << e.what() << "\n";
      return classify(e);
    }
  }
  return status;
}

}  // namespace valvelab::cli
