#include "valvelab/adapt.hpp"

#include <cmath>

#include "valvelab/error.hpp"

namespace valvelab::adapt {

RstController DesignSpec::design(const DiscretePlantModel& model) const {
  const auto dominant = control::dominant_poles(poles);
  auto ctrl = control::bezout_design(model, dominant, poles.auxiliary, fixed_s, fixed_r);
  const double residual = control::pole_placement_residual(model, ctrl, (dominant * poles.auxiliary).trimmed());
  if (!(residual <= residual_tolerance))
    throw DesignError("redesign failed the pole-placement check (residual " + csv::format_number(residual) + ")");
  return ctrl;
}

double tracking_cost(std::span<const double> y, std::span<const double> r, std::size_t skip) {
  if (y.size() != r.size()) throw InputError("tracking_cost: y and r lengths differ");
  if (skip >= y.size()) throw InputError("tracking_cost: skip must be shorter than the record");
  double sum = 0.0;
  for (std::size_t k = skip; k < y.size(); ++k) sum += (y[k] - r[k]) * (y[k] - r[k]);
  return sum / static_cast<double>(y.size() - skip);
}

std::vector<double> EvaluationScenario::reference(double ts) const {
  if (levels.empty()) throw InputError("evaluation scenario needs at least one level");
  return signals::step_sequence(levels, hold, ts);
}

Evaluation evaluate(plant::SampledPlant& plant, const RstController& ctrl, const EvaluationScenario& scenario,
                    const control::ActuatorLimits& limits, double initial_u) {
  const double ts = plant.sampling_period();
  const auto r = scenario.reference(ts);
  if (scenario.skip >= r.size()) throw InputError("evaluation scenario: skip must be shorter than the scenario");
  control::ControllerRunner runner(ctrl, limits);
  runner.reset_history(initial_u, r.front(), r.front());
  for (std::size_t k = 0; k < scenario.warmup; ++k) plant.apply(runner.step(plant.measure(), r.front()).u);

  Evaluation ev;
  ev.r = r;
  ev.y.reserve(r.size());
  ev.u.reserve(r.size());
  std::size_t saturated = 0;
  for (double rk : r) {
    const double y = plant.measure();
    const auto out = runner.step(y, rk);
    plant.apply(out.u);
    ev.y.push_back(y);
    ev.u.push_back(out.u);
    if (out.saturated) ++saturated;
  }
  ev.cost = tracking_cost(ev.y, ev.r, scenario.skip);
  ev.saturation_fraction = static_cast<double>(saturated) / static_cast<double>(r.size());
  return ev;
}

Mode parse_mode(const std::string& name) {
  if (name == "iterative") return Mode::iterative;
  if (name == "adaptive") return Mode::adaptive;
  throw ConfigError("unknown adaptation mode '" + name + "' (expected iterative or adaptive)");
}

std::string to_string(Mode mode) { return mode == Mode::iterative ? "iterative" : "adaptive"; }

namespace {

double margin_db(const DiscretePlantModel& model, const RstController& ctrl) {
  return 20.0 * std::log10(control::sensitivity(model, ctrl).modulus_margin);
}

}  // namespace

std::vector<IterationRecord> iterate(plant::SampledPlant& plant, const DiscretePlantModel& initial_model,
                                     const DesignSpec& spec, const IterateOptions& options) {
  if (options.iterations < 1) throw InputError("iterate: at least one iteration is required");
  initial_model.validate();
  const std::size_t na = initial_model.na();
  const std::size_t nb = initial_model.nb();
  const std::size_t delay = initial_model.delay;
  const double ts = plant.sampling_period();

  DiscretePlantModel model = initial_model;
  RstController ctrl = spec.design(model);
  const auto excitation = signals::prbs_excitation(options.excitation.prbs, options.excitation.samples);

  std::vector<IterationRecord> records;
  {
    IterationRecord rec;
    rec.theta = model.theta();
    rec.controller = ctrl;
    rec.margin_db = margin_db(model, ctrl);
    rec.evaluation = evaluate(plant, ctrl, options.scenario, options.limits);
    rec.tracking_cost = rec.evaluation.cost;
    rec.saturation_fraction = rec.evaluation.saturation_fraction;
    records.push_back(std::move(rec));
  }

  for (std::size_t it = 1; it <= options.iterations; ++it) {
    const auto& last = records.back();
    const Eigen::VectorXd theta0 = Eigen::Map<const Eigen::VectorXd>(last.theta.data(), last.theta.size());
    const auto init = ident::AdaptationState::make(theta0, options.initial_gain, options.profile, options.lambda0,
                                                   options.lambda1);

    cloe::IdentifyOptions id;
    id.reference = options.excitation.reference;
    id.na = na;
    id.nb = nb;
    id.delay = delay;
    id.warmup = options.excitation.warmup;
    id.initial_u = last.evaluation.u.empty() ? 0.0 : last.evaluation.u.back();
    id.limits = options.limits;
    if (options.mode == Mode::adaptive) {
      id.redesign = [&](const ident::AdaptationState& est) -> std::optional<RstController> {
        try {
          const auto m = DiscretePlantModel::from_theta(
              std::span<const double>(est.theta.data(), static_cast<std::size_t>(est.theta.size())), na, nb, delay,
              ts);
          return spec.design(m);
        } catch (const Error&) {
          return std::nullopt;
        }
      };
    }

    IterationRecord rec;
    rec.iteration = it;
    auto session = cloe::cl_identify(plant, ctrl, excitation, init, id);
    rec.theta.assign(session.final.theta.data(), session.final.theta.data() + session.final.theta.size());
    try {
      const auto candidate = DiscretePlantModel::from_theta(rec.theta, na, nb, delay, ts);
      auto next = spec.design(candidate);
      rec.margin_db = margin_db(candidate, next);
      ctrl = std::move(next);
      model = candidate;
    } catch (const Error& e) {
      rec.error = e.what();
      rec.theta = last.theta;
      rec.margin_db = last.margin_db;
    }
    rec.controller = ctrl;
    const double u_start = session.u_ctrl.empty() ? id.initial_u : session.u_ctrl.back();
    rec.session = std::move(session);
    rec.evaluation = evaluate(plant, ctrl, options.scenario, options.limits, u_start);
    rec.tracking_cost = rec.evaluation.cost;
    rec.saturation_fraction = rec.evaluation.saturation_fraction;
    const double previous = records.back().tracking_cost;
    records.push_back(std::move(rec));

    if (options.stop_improvement > 0.0 && previous > 0.0 &&
        (previous - records.back().tracking_cost) / previous < options.stop_improvement)
      break;
  }
  return records;
}

csv::Table iteration_table(std::span<const IterationRecord> records) {
  csv::Table t;
  if (records.empty()) return t;
  std::size_t nr = 0, ns = 0;
  for (const auto& r : records) {
    nr = std::max(nr, r.controller.R().size());
    ns = std::max(ns, r.controller.S().size());
  }
  const std::size_t n = records.front().theta.size();
  t.header = {"iteration"};
  for (std::size_t i = 0; i < n; ++i) t.header.push_back("theta_" + std::to_string(i + 1));
  for (std::size_t i = 0; i < nr; ++i) t.header.push_back("r_" + std::to_string(i));
  for (std::size_t i = 0; i < ns; ++i) t.header.push_back("s_" + std::to_string(i));
  t.header.insert(t.header.end(), {"t_0", "tracking_cost", "saturation_fraction", "margin_db", "failed"});
  for (const auto& r : records) {
    std::vector<double> row{static_cast<double>(r.iteration)};
    row.insert(row.end(), r.theta.begin(), r.theta.end());
    for (std::size_t i = 0; i < nr; ++i) row.push_back(r.controller.R()[i]);
    for (std::size_t i = 0; i < ns; ++i) row.push_back(r.controller.S()[i]);
    row.insert(row.end(), {r.controller.T()[0], r.tracking_cost, r.saturation_fraction, r.margin_db,
                           r.error.empty() ? 0.0 : 1.0});
    t.rows.push_back(std::move(row));
  }
  return t;
}

OpenLoopData open_loop_run(const plant::ValveParams& params, const OpenLoopExperiment& experiment) {
  if (experiment.periods < 2) throw InputError("open-loop experiment needs at least two periods");
  experiment.prbs.validate();
  const std::size_t period = experiment.prbs.period_samples();
  const auto u = signals::prbs_generate(experiment.prbs, period * experiment.periods);
  const auto y = plant::valve_run(params, u, experiment.ts);
  OpenLoopData data;
  data.u.assign(u.end() - static_cast<std::ptrdiff_t>(period), u.end());
  data.y.assign(y.end() - static_cast<std::ptrdiff_t>(period), y.end());
  return data;
}

DiscretePlantModel open_loop_fit(const plant::ValveParams& params, const OpenLoopExperiment& experiment) {
  const auto data = open_loop_run(params, experiment);
  const auto u = ident::detrend(data.u);
  const auto y = ident::detrend(data.y);
  const auto fit = ident::batch_least_squares(ident::build_regressors(u, y, experiment.na, experiment.nb));
  std::vector<double> theta(fit.theta.data(), fit.theta.data() + fit.theta.size());
  return DiscretePlantModel::from_theta(theta, experiment.na, experiment.nb, 0, experiment.ts);
}

}  // namespace valvelab::adapt
