#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "valvelab/cloe.hpp"
#include "valvelab/control.hpp"
#include "valvelab/csv.hpp"
#include "valvelab/ident.hpp"
#include "valvelab/plant.hpp"
#include "valvelab/signals.hpp"

namespace valvelab::adapt {

using control::RstController;
using plant::DiscretePlantModel;

/// Closed-loop performance target and fixed parts shared by every redesign.
struct DesignSpec {
  control::PoleSpec poles;
  DelayPolynomial fixed_s = DelayPolynomial::integrator();
  DelayPolynomial fixed_r = DelayPolynomial::nyquist_opening();
  /// Largest |A S + B R - P| coefficient accepted for a redesign.
  double residual_tolerance = 1e-9;

  RstController design(const DiscretePlantModel& model) const;
};

/// Mean of (y - r)^2 over the samples after `skip`.
double tracking_cost(std::span<const double> y, std::span<const double> r, std::size_t skip);

/// Reference staircase used to score a controller.
struct EvaluationScenario {
  std::vector<double> levels{40.0, 65.0, 40.0, 15.0, 40.0};
  double hold = 3.0;      ///< s per level
  std::size_t skip = 10;  ///< samples excluded from the cost
  std::size_t warmup = 60;  ///< regulation at the first level before recording

  std::vector<double> reference(double ts) const;
};

struct Evaluation {
  std::vector<double> r, y, u;
  double cost = 0.0;
  double saturation_fraction = 0.0;
};

/**
 * Runs `ctrl` on `plant` along the scenario, continuing from the plant's
 * current state; `initial_u` seeds the controller's past outputs.
 */
Evaluation evaluate(plant::SampledPlant& plant, const RstController& ctrl, const EvaluationScenario& scenario,
                    const control::ActuatorLimits& limits = {}, double initial_u = 0.0);

/// Closed-loop excitation phase: zero-mean PRBS added to the controller output.
struct ExcitationPhase {
  signals::PrbsConfig prbs{.n_registers = 8, .taps = {}, .divider = 4, .seed = 1, .offset = 0.0, .amplitude = 8.0};
  std::size_t samples = 300;
  std::size_t warmup = 40;  ///< regulation samples at the set point before exciting
  double reference = 40.0;
};

enum class Mode {
  iterative,  ///< identify with a fixed controller, then redesign
  adaptive,   ///< redesign after every sample of the excitation phase
};

Mode parse_mode(const std::string& name);
std::string to_string(Mode mode);

struct IterateOptions {
  std::size_t iterations = 4;
  ExcitationPhase excitation;
  EvaluationScenario scenario;
  double initial_gain = ident::kDefaultInitialGain;
  ident::GainProfile profile = ident::GainProfile::variable_forgetting;
  double lambda0 = 0.97;
  double lambda1 = 0.97;
  Mode mode = Mode::iterative;
  /// Stop once the relative cost improvement drops below this value (0 disables).
  double stop_improvement = 0.0;
  control::ActuatorLimits limits;
};

struct IterationRecord {
  std::size_t iteration = 0;
  std::vector<double> theta;
  RstController controller;
  double tracking_cost = 0.0;
  double saturation_fraction = 0.0;
  double margin_db = 0.0;  ///< 20 log10 of the modulus margin on the model behind the controller
  std::string error;       ///< redesign failure, the previous controller was kept
  Evaluation evaluation;
  std::optional<cloe::Session> session;
};

/**
 * Iteration 0 scores the initial controller designed on `initial_model`.
 * Each later iteration excites the loop with the current controller,
 * identifies the plant with the closed-loop output-error method starting from
 * the previous estimate, redesigns with `spec` and scores the result.
 */
std::vector<IterationRecord> iterate(plant::SampledPlant& plant, const DiscretePlantModel& initial_model,
                                     const DesignSpec& spec, const IterateOptions& options);

/// iteration, theta_i, R_i, S_i, T_0, tracking_cost, saturation_fraction, margin_db, failed
csv::Table iteration_table(std::span<const IterationRecord> records);

/// Open-loop identification experiment on a valve.
struct OpenLoopExperiment {
  signals::PrbsConfig prbs;
  std::size_t periods = 2;  ///< the first period settles the valve and is discarded
  double ts = 0.05;
  std::size_t na = 1;
  std::size_t nb = 1;
};

struct OpenLoopData {
  std::vector<double> u, y;  ///< retained period, absolute values
};

OpenLoopData open_loop_run(const plant::ValveParams& params, const OpenLoopExperiment& experiment);
/// ARX least-squares fit on the mean-removed retained period.
DiscretePlantModel open_loop_fit(const plant::ValveParams& params, const OpenLoopExperiment& experiment);

}  // namespace valvelab::adapt
