#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "valvelab/control.hpp"
#include "valvelab/csv.hpp"
#include "valvelab/ident.hpp"
#include "valvelab/plant.hpp"

namespace valvelab::cloe {

using control::RstController;
using ident::AdaptationState;

struct Prediction {
  double y_hat_apriori = 0.0;  ///< y^o(t+1) = theta'(t) phi_d(t)
  double u_hat = 0.0;          ///< u^(t) = -(R/S) y^(t) + r_u(t)
};

struct Correction {
  double eps_apriori = 0.0;      ///< y(t+1) - y^o(t+1)
  double eps_aposteriori = 0.0;  ///< y(t+1) - theta'(t+1) phi_d(t)
  double y_hat = 0.0;            ///< a posteriori prediction theta'(t+1) phi_d(t)
};

/**
 * Adjustable copy of the closed loop: the known controller drives an
 * estimated plant model, and only the predicted signals y^, u^ enter the
 * regressor phi_d. Signals are deviations from the operating point.
 */
class ClosedLoopPredictor {
 public:
  ClosedLoopPredictor(RstController ctrl, std::size_t na, std::size_t nb, std::size_t delay, AdaptationState init);

  /**
   * Seeds the predictor histories (most recent first): y^(t), y^(t-1), ...;
   * u^(t-1), ...; and the controller's own past outputs u^_c(t-1), ...
   * Missing entries are zero.
   */
  void initialize(std::span<const double> y_hat, std::span<const double> u_hat, std::span<const double> u_ctrl);

  /// cl_predict_step: controller output on y^(t), plant input u^(t), a priori prediction.
  Prediction predict(double r_u);
  /// cloe_adapt_step: parameter update from the measured y(t+1); must follow predict().
  Correction adapt(double y_next);

  void set_adaptation(bool enabled) { adapting_ = enabled; }
  bool adapting() const { return adapting_; }
  /// Swaps the controller of the predictor loop, keeping its signal histories.
  void set_controller(RstController ctrl);

  const AdaptationState& estimator() const { return est_; }
  const RstController& controller() const { return ctrl_; }
  /// Regressor of the last predict() call.
  const std::vector<double>& regressor() const { return phi_; }
  double y_hat() const { return y_hat_.front(); }
  std::size_t na() const { return na_; }
  std::size_t nb() const { return nb_; }
  std::size_t delay() const { return delay_; }

 private:
  std::size_t depth() const;

  RstController ctrl_;
  std::size_t na_, nb_, delay_;
  AdaptationState est_;
  bool adapting_ = true;
  bool pending_ = false;
  std::deque<double> y_hat_;   ///< y^(t), y^(t-1), ...
  std::deque<double> u_hat_;   ///< u^(t-1), u^(t-2), ... before predict(); u^(t), ... after
  std::deque<double> u_ctrl_;  ///< controller part of u^ (excitation excluded)
  std::vector<double> phi_;
  double y_prior_ = 0.0;
};

struct IdentifyOptions {
  double reference = 0.0;          ///< constant set point during the session
  std::size_t na = 1;
  std::size_t nb = 1;
  std::size_t delay = 0;
  std::size_t warmup = 0;          ///< samples of plain regulation before the excitation
  double initial_u = 0.0;          ///< past controller output assumed at the start
  bool adapt = true;               ///< false: frozen parameters
  control::ActuatorLimits limits = control::ActuatorLimits::none();
  /// Optional per-sample redesign; a value replaces the controller of both loops.
  std::function<std::optional<RstController>(const AdaptationState&)> redesign;
};

struct Session {
  AdaptationState final;
  std::vector<Eigen::VectorXd> theta;  ///< estimate after each sample
  std::vector<double> y, y_hat, u, u_hat, eps_apriori, eps_cl;
  std::vector<double> u_ctrl;  ///< controller output before the excitation is added
  std::size_t saturated = 0;   ///< samples with the applied input clamped
  double y_operating = 0.0;
  double u_operating = 0.0;
  RstController controller;    ///< controller in force at the end

  /// t, y, y_hat, u, u_hat, eps_cl, theta_1..theta_n
  csv::Table to_table() const;
};

/**
 * Runs the real loop and the predictor in lockstep for `excitation.size()`
 * samples. The excitation is added to the controller output. The operating
 * point is the reference and the mean controller output over the last ten
 * warm-up samples; predictor histories start from the measured loop.
 */
Session cl_identify(plant::SampledPlant& plant, const RstController& ctrl, std::span<const double> excitation,
                    const AdaptationState& init, const IdentifyOptions& options);

}  // namespace valvelab::cloe
