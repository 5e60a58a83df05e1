#pragma once

#include <cstdint>
#include <deque>
#include <random>
#include <span>
#include <vector>

#include "valvelab/polynomial.hpp"

namespace valvelab::plant {

/**
 * Physical parameters of the simulated throttle valve.
 *
 * The plate is modelled as a first-order torque balance: a return spring pulls
 * it towards `spring_rest_angle` (fully open), the motor torque closes it in
 * proportion to the PWM duty cycle, and a viscous term sets the time constant
 * viscous_coeff / spring_stiffness. Dry friction with different levels in the
 * opening and closing directions produces the asymmetric hysteresis; breakaway
 * from rest needs `stiction_ratio` times the kinetic level.
 */
struct ValveParams {
  double spring_stiffness = 1.0;    ///< torque per degree
  double spring_rest_angle = 90.0;  ///< degrees, reached with zero PWM
  double motor_gain = 2.0;          ///< torque per percent PWM (closes the plate)
  double viscous_coeff = 0.29;      ///< torque * s / degree
  double coulomb_open = 2.0;        ///< kinetic friction torque while opening
  double coulomb_close = 1.5;       ///< kinetic friction torque while closing
  double stiction_ratio = 1.3;      ///< breakaway / kinetic friction, >= 1
  double angle_min = 0.0;
  double angle_max = 95.0;
  int adc_bits = 10;                ///< 0 disables output quantization
  int pwm_levels = 256;             ///< 0 disables input quantization
  double output_noise_std = 0.05;   ///< degrees
  std::uint64_t rng_seed = 1000;

  /// Throws InputError when an invariant is violated.
  void validate() const;

  double time_constant() const { return viscous_coeff / spring_stiffness; }
  /// Static gain in degrees per percent PWM, ignoring friction (negative).
  double dc_gain() const { return -motor_gain / spring_stiffness; }
  /// Sensor resolution in degrees, 0 when quantization is disabled.
  double quantization_step() const;

  /// Same valve without friction, quantization and noise.
  ValveParams linearized() const;
};

struct ValveState {
  double angle = 0.0;     ///< degrees
  double velocity = 0.0;  ///< degrees per second
  bool moving = false;    ///< false: held by stiction, velocity is zero

  static ValveState at_rest(const ValveParams& params) { return {params.spring_rest_angle, 0.0, false}; }
  friend bool operator==(const ValveState&, const ValveState&) = default;
};

/// Internal integration step of the valve simulator.
inline constexpr double kInternalStep = 1e-3;

/**
 * Advances the valve by `dt` seconds with PWM `u` held constant.
 *
 * Within a step the motion is integrated exactly (constant forcing), which
 * makes the frictionless limit reproduce the zero-order-hold discretization.
 * Throws InputError for dt outside (0, 0.01] or u outside [0, 100].
 */
ValveState valve_step(const ValveState& state, const ValveParams& params, double u, double dt);

/// Driver interface shared by the valve simulator and the exact linear plants.
class SampledPlant {
 public:
  virtual ~SampledPlant() = default;
  /// Output sensed at the current sampling instant; repeated calls return the same value.
  virtual double measure() = 0;
  /// Holds `u` for one sampling period and moves to the next instant.
  virtual void apply(double u) = 0;
  virtual double sampling_period() const = 0;
};

class ValveSimulator final : public SampledPlant {
 public:
  ValveSimulator(ValveParams params, double ts, double dt = kInternalStep);

  double measure() override;
  void apply(double u) override;
  double sampling_period() const override { return ts_; }

  const ValveState& state() const { return state_; }
  const ValveParams& params() const { return params_; }

 private:
  double sense(double angle);
  double quantize_input(double u) const;

  ValveParams params_;
  double ts_;
  double dt_;
  int substeps_;
  ValveState state_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_{0.0, 1.0};
  bool have_sample_ = false;
  double sample_ = 0.0;
};

/**
 * Samples the valve at Ts: output k is sensed before input k is applied, so
 * y[k+1] is the first sample influenced by u[k]. Deterministic for a fixed seed.
 */
std::vector<double> valve_run(const ValveParams& params, std::span<const double> u, double ts);

/**
 * ARX transfer model y = q^-d B/A u with A = 1 + a1 q^-1 + ... and
 * B = b1 q^-1 + ... + bnb q^-nb. Parameter vector ordering is [a..., b...].
 */
struct DiscretePlantModel {
  std::vector<double> a;
  std::vector<double> b;
  std::size_t delay = 0;
  double ts = 0.05;

  std::size_t na() const { return a.size(); }
  std::size_t nb() const { return b.size(); }
  std::vector<double> theta() const;
  static DiscretePlantModel from_theta(std::span<const double> theta, std::size_t na, std::size_t nb,
                                       std::size_t delay, double ts);

  void validate() const;
  DelayPolynomial A() const { return DelayPolynomial::monic_from(a); }
  /// b1 q^-1 + ... (without the extra delay)
  DelayPolynomial B() const;
  /// q^-d B
  DelayPolynomial delayed_B() const;
  double dc_gain() const;
};

/**
 * y(t) from past values: y_past[0] = y(t-1), u_past[0] = u(t-1), and so on.
 * Needs at least na outputs and nb + d inputs of history.
 */
double linear_plant_step(const DiscretePlantModel& model, std::span<const double> y_past,
                         std::span<const double> u_past);

/// Exact linear plant with optional additive output noise, for oracle tests.
class LinearPlant final : public SampledPlant {
 public:
  explicit LinearPlant(DiscretePlantModel model, double noise_std = 0.0, std::uint64_t seed = 0);

  double measure() override;
  void apply(double u) override;
  double sampling_period() const override { return model_.ts; }

  /// Noise-free output at the current instant.
  double noiseless_output() const { return x_; }
  /// Switches parameters in place; histories are kept.
  void set_model(DiscretePlantModel model);
  const DiscretePlantModel& model() const { return model_; }

 private:
  DiscretePlantModel model_;
  double noise_std_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_{0.0, 1.0};
  std::deque<double> y_past_;
  std::deque<double> u_past_;
  double x_ = 0.0;
  bool have_sample_ = false;
  double sample_ = 0.0;
};

/// Simulates `model` from zero initial conditions.
std::vector<double> linear_run(const DiscretePlantModel& model, std::span<const double> u);

struct HysteresisPoint {
  double u;
  double angle_up;
  double angle_down;
};

struct SweepResult {
  std::vector<HysteresisPoint> points;
  std::vector<double> u;  ///< applied input trace at Ts
  std::vector<double> y;  ///< sensed output trace at Ts

  double max_width() const;
};

/// Samples averaged at the end of each hold to read the steady-state angle.
inline constexpr std::size_t kSteadyWindow = 10;

/**
 * Ascending then descending staircase over `levels` (ascending order), each
 * held `hold` seconds, starting from rest. The highest level is visited once.
 */
SweepResult static_sweep(const ValveParams& params, std::span<const double> levels, double hold,
                         double ts = 0.05);

}  // namespace valvelab::plant
