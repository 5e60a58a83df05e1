#pragma once

#include <complex>
#include <deque>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "valvelab/csv.hpp"
#include "valvelab/plant.hpp"
#include "valvelab/polynomial.hpp"

namespace valvelab::control {

using plant::DiscretePlantModel;

/// Closed-loop specification: dominant second-order pair plus auxiliary poles.
struct PoleSpec {
  double omega0 = 5.0;   ///< rad/s
  double zeta = 1.0;
  double ts = 0.05;      ///< s
  DelayPolynomial auxiliary = DelayPolynomial::one();

  void validate() const;
};

/// P_D = (1 - z1 q^-1)(1 - z2 q^-1) with z = exp(s Ts) for the continuous pair of (omega0, zeta).
DelayPolynomial dominant_poles(const PoleSpec& spec);

/**
 * Two-degree-of-freedom controller S u = -R y + T r.
 *
 * R and S are kept both as full polynomials and as fixed * free factors so that
 * frequency evaluations of the fixed parts (integrator, Nyquist opening) are
 * exact. S(0) = 1.
 */
class RstController {
 public:
  RstController() = default;
  RstController(DelayPolynomial r, DelayPolynomial s, DelayPolynomial t, double ts);
  static RstController from_parts(DelayPolynomial fixed_r, DelayPolynomial free_r, DelayPolynomial fixed_s,
                                  DelayPolynomial free_s, DelayPolynomial t, double ts);

  const DelayPolynomial& R() const { return r_; }
  const DelayPolynomial& S() const { return s_; }
  const DelayPolynomial& T() const { return t_; }
  const DelayPolynomial& fixed_R() const { return fixed_r_; }
  const DelayPolynomial& free_R() const { return free_r_; }
  const DelayPolynomial& fixed_S() const { return fixed_s_; }
  const DelayPolynomial& free_S() const { return free_s_; }
  double ts() const { return ts_; }

  double R_at(double x) const { return fixed_r_.at(x) * free_r_.at(x); }
  double S_at(double x) const { return fixed_s_.at(x) * free_s_.at(x); }
  std::complex<double> R_at(std::complex<double> x) const { return fixed_r_.at(x) * free_r_.at(x); }
  std::complex<double> S_at(std::complex<double> x) const { return fixed_s_.at(x) * free_s_.at(x); }

  /// The fixed part of S vanishes at q^-1 = 1.
  bool has_integrator() const { return fixed_s_.at(1.0) == 0.0; }
  /// Past samples of u, y and r needed by controller_step.
  std::size_t history_depth() const;

  /// key = value block (Ts, R, S, T, H_R, H_S, R_free, S_free); round-trips exactly.
  std::string to_text() const;
  static RstController from_text(const std::string& text);

  friend bool operator==(const RstController&, const RstController&) = default;

 private:
  void check() const;

  DelayPolynomial r_, s_, t_;
  DelayPolynomial fixed_r_ = DelayPolynomial::one(), free_r_;
  DelayPolynomial fixed_s_ = DelayPolynomial::one(), free_s_;
  double ts_ = 0.0;
};

/**
 * Digital PI placing the closed-loop poles of a first-order plant
 * (1 + a1 q^-1, b1 q^-1) at P_D = 1 + p1 q^-1 + p2 q^-2:
 *   r0 = (p1 - a1 + 1) / b1,  r1 = (p2 + a1) / b1,  S = 1 - q^-1,  T = r0 + r1.
 */
RstController pi_design(double a1, double b1, const DelayPolynomial& dominant, double ts);

/// Sylvester matrices more ill-conditioned than this signal a common factor.
inline constexpr double kMaxSylvesterCondition = 1e10;

/**
 * Solves A H_S S' + q^-d B H_R R' = P_D P_F for the minimal-degree S', R'
 * (deg S' = deg(q^-d B H_R) - 1, deg R' = deg(A H_S) - 1) and returns
 * S = H_S S', R = H_R R', T = R(1).
 */
RstController bezout_design(const DiscretePlantModel& model, const DelayPolynomial& dominant,
                            const DelayPolynomial& auxiliary, const DelayPolynomial& fixed_s,
                            const DelayPolynomial& fixed_r);

/// A S + q^-d B R
DelayPolynomial closed_loop_polynomial(const DiscretePlantModel& model, const RstController& ctrl);

/// max |coefficient of (A S + q^-d B R - P)|
double pole_placement_residual(const DiscretePlantModel& model, const RstController& ctrl,
                               const DelayPolynomial& target);

struct Sensitivity {
  std::vector<double> omega;                  ///< rad/s, logarithmic, last point pi/Ts
  std::vector<std::complex<double>> syp;      ///< A S / P
  std::vector<std::complex<double>> sup;      ///< -A R / P
  std::vector<std::complex<double>> open_loop;  ///< B R / (A S)
  double modulus_margin = 0.0;                ///< 1 / max |Syp|
  double max_syp_db = 0.0;

  double sup_db_at_nyquist() const;
  /// omega_rad_s, Syp_db, Sup_db
  csv::Table to_table() const;
};

/// Evaluated on n_freq >= 64 log-spaced frequencies from 1e-3 pi/Ts to pi/Ts.
Sensitivity sensitivity(const DiscretePlantModel& model, const RstController& ctrl, std::size_t n_freq = 512);

/// Past samples, most recent first.
struct SignalHistory {
  std::deque<double> u, y, r;

  /// Shifts in the samples of the instant just completed, keeping `depth` of each.
  void push(double u_t, double y_t, double r_t, std::size_t depth);
  static SignalHistory filled(std::size_t depth, double u, double y, double r);
};

struct ActuatorLimits {
  double low = 0.0;
  double high = 100.0;
  static ActuatorLimits none() {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
};

struct ControlOutput {
  double u = 0.0;            ///< applied (saturated) value
  double unsaturated = 0.0;  ///< value given by the difference equation
  bool saturated = false;
};

/// Solves S u(t) = -R y(t) + T r(t) for u(t), then clamps to the actuator limits.
ControlOutput controller_step(const RstController& ctrl, const SignalHistory& history, double y, double r,
                              ActuatorLimits limits = {});

/**
 * Stateful controller execution. The stored input history holds the applied
 * (clamped) values; no other anti-windup is used.
 */
class ControllerRunner {
 public:
  static constexpr std::size_t kDepth = 8;

  explicit ControllerRunner(RstController ctrl, ActuatorLimits limits = {});

  ControlOutput step(double y, double r);
  /// Swaps the law while keeping the signal history.
  void set_controller(RstController ctrl);
  /// Replaces the history, e.g. to start from a steady operating point.
  void reset_history(double u, double y, double r);

  const RstController& controller() const { return ctrl_; }
  const SignalHistory& history() const { return history_; }
  const ActuatorLimits& limits() const { return limits_; }

 private:
  RstController ctrl_;
  ActuatorLimits limits_;
  SignalHistory history_;
  std::size_t depth_;
};

/**
 * Desired reference-to-output behaviour q^-d B / P with the numerator scaled
 * to unit DC gain.
 */
class ReferenceModel {
 public:
  ReferenceModel(DelayPolynomial denominator, DelayPolynomial numerator);

  double step(double r);
  const DelayPolynomial& numerator() const { return num_; }
  const DelayPolynomial& denominator() const { return den_; }

 private:
  DelayPolynomial num_, den_;
  std::deque<double> r_past_, y_past_;
};

/**
 * One sample of y = T_gain B / P_D r from explicit history (most recent first).
 * With a designed controller T_gain = P(1)/B(1), so the DC gain is one.
 */
double reference_model_step(const DelayPolynomial& denominator, double t_gain, const DelayPolynomial& b,
                            std::span<const double> y_past, std::span<const double> r_past, double r);

}  // namespace valvelab::control
