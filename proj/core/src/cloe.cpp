#include "valvelab/cloe.hpp"

#include <algorithm>
#include <cmath>

#include "valvelab/error.hpp"

namespace valvelab::cloe {

namespace {

double at_or_zero(const std::deque<double>& d, std::size_t k) { return k < d.size() ? d[k] : 0.0; }

void assign(std::deque<double>& d, std::span<const double> values, std::size_t depth) {
  d.assign(depth, 0.0);
  for (std::size_t k = 0; k < std::min(depth, values.size()); ++k) d[k] = values[k];
}

void push(std::deque<double>& d, double v, std::size_t depth) {
  d.push_front(v);
  if (d.size() > depth) d.resize(depth);
}

}  // namespace

ClosedLoopPredictor::ClosedLoopPredictor(RstController ctrl, std::size_t na, std::size_t nb, std::size_t delay,
                                         AdaptationState init)
    : ctrl_(std::move(ctrl)), na_(na), nb_(nb), delay_(delay), est_(std::move(init)) {
  if (nb_ == 0) throw InputError("closed-loop predictor needs nb >= 1");
  if (est_.size() != na_ + nb_) throw InputError("closed-loop predictor: parameter vector must have na + nb entries");
  est_.validate();
  y_hat_.assign(depth(), 0.0);
  u_hat_.assign(depth(), 0.0);
  u_ctrl_.assign(depth(), 0.0);
}

std::size_t ClosedLoopPredictor::depth() const {
  return std::max({na_, nb_ + delay_, ctrl_.history_depth()}) + 1;
}

void ClosedLoopPredictor::initialize(std::span<const double> y_hat, std::span<const double> u_hat,
                                     std::span<const double> u_ctrl) {
  assign(y_hat_, y_hat, depth());
  assign(u_hat_, u_hat, depth());
  assign(u_ctrl_, u_ctrl, depth());
  pending_ = false;
}

void ClosedLoopPredictor::set_controller(RstController ctrl) {
  ctrl_ = std::move(ctrl);
  const std::size_t d = depth();
  if (y_hat_.size() < d) y_hat_.resize(d, 0.0);
  if (u_hat_.size() < d) u_hat_.resize(d, 0.0);
  if (u_ctrl_.size() < d) u_ctrl_.resize(d, 0.0);
}

Prediction ClosedLoopPredictor::predict(double r_u) {
  if (pending_) throw InputError("cl_predict_step called twice without cloe_adapt_step");
  if (!std::isfinite(r_u)) throw NumericError("cl_predict_step: non-finite excitation");
  const auto& R = ctrl_.R();
  const auto& S = ctrl_.S();
  double u_c = 0.0;
  for (std::size_t k = 0; k < R.size(); ++k) u_c -= R[k] * at_or_zero(y_hat_, k);
  for (std::size_t k = 1; k < S.size(); ++k) u_c -= S[k] * at_or_zero(u_ctrl_, k - 1);
  const double u = u_c + r_u;
  push(u_ctrl_, u_c, depth());
  push(u_hat_, u, depth());

  phi_.assign(na_ + nb_, 0.0);
  for (std::size_t i = 0; i < na_; ++i) phi_[i] = -at_or_zero(y_hat_, i);
  for (std::size_t j = 0; j < nb_; ++j) phi_[na_ + j] = at_or_zero(u_hat_, delay_ + j);

  const Eigen::Map<const Eigen::VectorXd> phi(phi_.data(), static_cast<Eigen::Index>(phi_.size()));
  y_prior_ = est_.theta.dot(phi);
  pending_ = true;
  return {y_prior_, u};
}

Correction ClosedLoopPredictor::adapt(double y_next) {
  if (!pending_) throw InputError("cloe_adapt_step needs a preceding cl_predict_step");
  if (!std::isfinite(y_next)) throw NumericError("cloe_adapt_step: non-finite measurement");
  pending_ = false;
  Correction c;
  c.eps_apriori = y_next - y_prior_;
  if (adapting_) est_ = ident::rls_step(est_, phi_, y_next).state;
  const Eigen::Map<const Eigen::VectorXd> phi(phi_.data(), static_cast<Eigen::Index>(phi_.size()));
  c.y_hat = adapting_ ? est_.theta.dot(phi) : y_prior_;
  c.eps_aposteriori = y_next - c.y_hat;
  push(y_hat_, c.y_hat, depth());
  return c;
}

csv::Table Session::to_table() const {
  csv::Table t;
  t.header = {"t", "y", "y_hat", "u", "u_hat", "eps_cl"};
  const auto n = final.theta.size();
  for (Eigen::Index i = 0; i < n; ++i) t.header.push_back("theta_" + std::to_string(i + 1));
  for (std::size_t k = 0; k < y.size(); ++k) {
    std::vector<double> row{static_cast<double>(k + 1), y[k], y_hat[k], u[k], u_hat[k], eps_cl[k]};
    for (Eigen::Index i = 0; i < n; ++i) row.push_back(theta[k](i));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Session cl_identify(plant::SampledPlant& plant, const RstController& ctrl, std::span<const double> excitation,
                    const AdaptationState& init, const IdentifyOptions& options) {
  init.validate();
  if (init.size() != options.na + options.nb) throw InputError("cl_identify: initial estimate must have na + nb entries");
  control::ControllerRunner runner(ctrl, options.limits);
  runner.reset_history(options.initial_u, options.reference, options.reference);

  std::vector<double> warm_u;
  for (std::size_t k = 0; k < options.warmup; ++k) {
    const double y = plant.measure();
    const auto out = runner.step(y, options.reference);
    plant.apply(out.u);
    warm_u.push_back(out.u);
  }

  Session s;
  s.final = init;
  s.controller = ctrl;
  s.y_operating = options.reference;
  s.u_operating = options.initial_u;
  if (!warm_u.empty()) {
    const std::size_t n = std::min<std::size_t>(10, warm_u.size());
    double sum = 0.0;
    for (std::size_t k = warm_u.size() - n; k < warm_u.size(); ++k) sum += warm_u[k];
    s.u_operating = sum / static_cast<double>(n);
  }
  if (excitation.empty()) return s;

  ClosedLoopPredictor predictor(ctrl, options.na, options.nb, options.delay, init);
  predictor.set_adaptation(options.adapt);
  {
    const auto& h = runner.history();
    std::vector<double> y_hat{plant.measure() - s.y_operating};
    std::vector<double> u_hat;
    for (double y : h.y) y_hat.push_back(y - s.y_operating);
    for (double u : h.u) u_hat.push_back(u - s.u_operating);
    predictor.initialize(y_hat, u_hat, u_hat);
  }

  const std::size_t n = excitation.size();
  for (auto* v : {&s.y, &s.y_hat, &s.u, &s.u_hat, &s.eps_apriori, &s.eps_cl, &s.u_ctrl}) v->reserve(n);
  s.theta.reserve(n);

  for (std::size_t k = 0; k < n; ++k) {
    const double y = plant.measure();
    const auto out = runner.step(y, options.reference);
    const double wanted = out.u + excitation[k];
    const double u = std::clamp(wanted, options.limits.low, options.limits.high);
    if (out.saturated || u != wanted) ++s.saturated;
    plant.apply(u);

    const auto pred = predictor.predict(excitation[k]);
    const double y_next = plant.measure();
    const auto corr = predictor.adapt(y_next - s.y_operating);

    s.y.push_back(y_next);
    s.y_hat.push_back(corr.y_hat + s.y_operating);
    s.u.push_back(u);
    s.u_hat.push_back(pred.u_hat + s.u_operating);
    s.u_ctrl.push_back(out.u);
    s.eps_apriori.push_back(corr.eps_apriori);
    s.eps_cl.push_back(corr.eps_aposteriori);
    s.theta.push_back(predictor.estimator().theta);

    if (options.redesign) {
      if (auto next = options.redesign(predictor.estimator())) {
        runner.set_controller(*next);
        predictor.set_controller(*next);
      }
    }
  }
  s.final = predictor.estimator();
  s.controller = runner.controller();
  return s;
}

}  // namespace valvelab::cloe
