#include "valvelab/plant.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "valvelab/error.hpp"

namespace valvelab::plant {

namespace {

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void ValveParams::validate() const {
  const double values[] = {spring_stiffness, spring_rest_angle, motor_gain, viscous_coeff, coulomb_open,
                           coulomb_close,    stiction_ratio,    angle_min,  angle_max,     output_noise_std};
  for (double v : values)
    if (!finite(v)) throw InputError("valve parameters must be finite");
  if (spring_stiffness <= 0.0) throw InputError("spring_stiffness must be positive");
  if (motor_gain <= 0.0) throw InputError("motor_gain must be positive");
  if (viscous_coeff <= 0.0) throw InputError("viscous_coeff must be positive");
  if (coulomb_open < 0.0 || coulomb_close < 0.0) throw InputError("coulomb friction must be non-negative");
  if (stiction_ratio < 1.0) throw InputError("stiction_ratio must be >= 1");
  if (!(angle_min < angle_max)) throw InputError("angle_min must be below angle_max");
  if (spring_rest_angle < angle_min || spring_rest_angle > angle_max)
    throw InputError("spring_rest_angle must lie within [angle_min, angle_max]");
  if (adc_bits < 0 || adc_bits > 24) throw InputError("adc_bits must be in [0, 24]");
  if (pwm_levels < 0 || pwm_levels == 1) throw InputError("pwm_levels must be 0 (disabled) or >= 2");
  if (output_noise_std < 0.0) throw InputError("output_noise_std must be non-negative");
}

double ValveParams::quantization_step() const {
  if (adc_bits == 0) return 0.0;
  return (angle_max - angle_min) / (std::ldexp(1.0, adc_bits) - 1.0);
}

ValveParams ValveParams::linearized() const {
  ValveParams p = *this;
  p.coulomb_open = 0.0;
  p.coulomb_close = 0.0;
  p.stiction_ratio = 1.0;
  p.adc_bits = 0;
  p.pwm_levels = 0;
  p.output_noise_std = 0.0;
  return p;
}

ValveState valve_step(const ValveState& state, const ValveParams& params, double u, double dt) {
  if (!(dt > 0.0 && dt <= 0.01)) throw InputError("valve_step: dt must be in (0, 0.01] s");
  if (!(u >= 0.0 && u <= 100.0)) throw InputError("valve_step: u must be in [0, 100] %");

  const double k = params.spring_stiffness;
  const double drive = -params.motor_gain * u - k * (state.angle - params.spring_rest_angle);
  auto friction = [&](int dir) { return dir > 0 ? params.coulomb_open : params.coulomb_close; };

  ValveState next = state;
  int dir = 0;
  if (next.moving) {
    dir = next.velocity > 0.0 ? 1 : (next.velocity < 0.0 ? -1 : 0);
    // Motion continues only while the drive exceeds kinetic friction in the direction of travel.
    if (dir == 0 || dir * drive <= friction(dir)) {
      next.moving = false;
      next.velocity = 0.0;
      dir = 0;
    }
  }
  if (!next.moving) {
    if (drive > params.stiction_ratio * params.coulomb_open)
      dir = 1;
    else if (drive < -params.stiction_ratio * params.coulomb_close)
      dir = -1;
    else
      return next;
  }

  // Constant forcing over the step: relax exponentially towards the sliding equilibrium.
  const double target =
      params.spring_rest_angle + (-params.motor_gain * u - dir * friction(dir)) / k;
  const double decay = std::exp(-dt * k / params.viscous_coeff);
  double angle = target + (state.angle - target) * decay;

  if (angle >= params.angle_max || angle <= params.angle_min) {
    next.angle = std::clamp(angle, params.angle_min, params.angle_max);
    next.velocity = 0.0;
    next.moving = false;
    return next;
  }
  next.angle = angle;
  next.velocity = k * (target - angle) / params.viscous_coeff;
  next.moving = next.velocity != 0.0;
  if (!next.moving) next.velocity = 0.0;
  return next;
}

ValveSimulator::ValveSimulator(ValveParams params, double ts, double dt)
    : params_(std::move(params)), ts_(ts), dt_(dt), rng_(params_.rng_seed) {
  params_.validate();
  if (!(dt > 0.0 && dt <= 0.01)) throw InputError("internal step must be in (0, 0.01] s");
  if (!(ts > 0.0) || !std::isfinite(ts)) throw InputError("sampling period must be positive");
  const double ratio = ts / dt;
  substeps_ = static_cast<int>(std::lround(ratio));
  if (substeps_ < 1 || std::abs(ratio - substeps_) > 1e-9 * ratio)
    throw InputError("sampling period must be a multiple of the internal step");
  state_ = ValveState::at_rest(params_);
}

double ValveSimulator::sense(double angle) {
  double y = angle;
  if (params_.output_noise_std > 0.0) y += params_.output_noise_std * noise_(rng_);
  if (params_.adc_bits > 0) {
    const double q = params_.quantization_step();
    y = params_.angle_min + std::round((y - params_.angle_min) / q) * q;
    y = std::clamp(y, params_.angle_min, params_.angle_max);
  }
  return y;
}

double ValveSimulator::quantize_input(double u) const {
  if (params_.pwm_levels == 0) return u;
  const double steps = params_.pwm_levels - 1;
  return std::round(u / 100.0 * steps) / steps * 100.0;
}

double ValveSimulator::measure() {
  if (!have_sample_) {
    sample_ = sense(state_.angle);
    have_sample_ = true;
  }
  return sample_;
}

void ValveSimulator::apply(double u) {
  if (!(u >= 0.0 && u <= 100.0)) throw InputError("valve input must be in [0, 100] %");
  measure();  // the sample of this instant exists even if nobody read it
  const double uq = quantize_input(u);
  for (int i = 0; i < substeps_; ++i) state_ = valve_step(state_, params_, uq, dt_);
  have_sample_ = false;
}

std::vector<double> valve_run(const ValveParams& params, std::span<const double> u, double ts) {
  ValveSimulator sim(params, ts);
  std::vector<double> y;
  y.reserve(u.size());
  for (double uk : u) {
    y.push_back(sim.measure());
    sim.apply(uk);
  }
  return y;
}

std::vector<double> DiscretePlantModel::theta() const {
  std::vector<double> t(a);
  t.insert(t.end(), b.begin(), b.end());
  return t;
}

DiscretePlantModel DiscretePlantModel::from_theta(std::span<const double> theta, std::size_t na, std::size_t nb,
                                                  std::size_t delay, double ts) {
  if (theta.size() != na + nb) throw InputError("theta length must equal na + nb");
  DiscretePlantModel m;
  m.a.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(na));
  m.b.assign(theta.begin() + static_cast<std::ptrdiff_t>(na), theta.end());
  m.delay = delay;
  m.ts = ts;
  return m;
}

void DiscretePlantModel::validate() const {
  if (b.empty()) throw InputError("plant model needs nb >= 1");
  if (!(ts > 0.0) || !std::isfinite(ts)) throw InputError("plant model sampling period must be positive");
  for (double v : a)
    if (!finite(v)) throw InputError("plant model coefficients must be finite");
  for (double v : b)
    if (!finite(v)) throw InputError("plant model coefficients must be finite");
}

DelayPolynomial DiscretePlantModel::B() const {
  std::vector<double> c(b.size() + 1, 0.0);
  std::copy(b.begin(), b.end(), c.begin() + 1);
  return DelayPolynomial(std::move(c));
}

DelayPolynomial DiscretePlantModel::delayed_B() const { return DelayPolynomial::delay(delay) * B(); }

double DiscretePlantModel::dc_gain() const {
  const double den = A().at(1.0);
  if (den == 0.0) throw InputError("plant model has a pole at z = 1");
  return B().at(1.0) / den;
}

double linear_plant_step(const DiscretePlantModel& model, std::span<const double> y_past,
                         std::span<const double> u_past) {
  if (y_past.size() < model.na() || u_past.size() < model.nb() + model.delay)
    throw InputError("linear_plant_step: history too short");
  double y = 0.0;
  for (std::size_t i = 0; i < model.na(); ++i) y -= model.a[i] * y_past[i];
  for (std::size_t j = 0; j < model.nb(); ++j) y += model.b[j] * u_past[j + model.delay];
  return y;
}

LinearPlant::LinearPlant(DiscretePlantModel model, double noise_std, std::uint64_t seed)
    : model_(std::move(model)), noise_std_(noise_std), rng_(seed) {
  model_.validate();
  if (!(noise_std >= 0.0)) throw InputError("noise_std must be non-negative");
  y_past_.assign(model_.na(), 0.0);
  u_past_.assign(model_.nb() + model_.delay, 0.0);
}

double LinearPlant::measure() {
  if (!have_sample_) {
    sample_ = x_ + (noise_std_ > 0.0 ? noise_std_ * noise_(rng_) : 0.0);
    have_sample_ = true;
  }
  return sample_;
}

void LinearPlant::apply(double u) {
  if (!std::isfinite(u)) throw InputError("plant input must be finite");
  measure();
  y_past_.push_front(x_);
  u_past_.push_front(u);
  const std::vector<double> y(y_past_.begin(), y_past_.end());
  const std::vector<double> uu(u_past_.begin(), u_past_.end());
  x_ = linear_plant_step(model_, y, uu);
  y_past_.resize(model_.na());
  u_past_.resize(model_.nb() + model_.delay);
  have_sample_ = false;
}

void LinearPlant::set_model(DiscretePlantModel model) {
  model.validate();
  model_ = std::move(model);
  y_past_.resize(model_.na(), 0.0);
  u_past_.resize(model_.nb() + model_.delay, 0.0);
}

std::vector<double> linear_run(const DiscretePlantModel& model, std::span<const double> u) {
  LinearPlant p(model);
  std::vector<double> y;
  y.reserve(u.size());
  for (double uk : u) {
    y.push_back(p.measure());
    p.apply(uk);
  }
  return y;
}

double SweepResult::max_width() const {
  double w = 0.0;
  for (const auto& p : points) w = std::max(w, std::abs(p.angle_up - p.angle_down));
  return w;
}

SweepResult static_sweep(const ValveParams& params, std::span<const double> levels, double hold, double ts) {
  if (levels.empty()) throw InputError("static_sweep: no levels");
  if (!(hold >= 2.5)) throw InputError("static_sweep: hold must be at least 2.5 s");
  if (!std::is_sorted(levels.begin(), levels.end())) throw InputError("static_sweep: levels must ascend");
  const double ratio = hold / ts;
  const auto per_level = static_cast<std::size_t>(std::lround(ratio));
  if (std::abs(ratio - static_cast<double>(per_level)) > 1e-9 * ratio)
    throw InputError("static_sweep: hold must be a multiple of Ts");

  std::vector<double> schedule(levels.begin(), levels.end());
  for (std::size_t i = levels.size() - 1; i-- > 0;) schedule.push_back(levels[i]);

  SweepResult out;
  ValveSimulator sim(params, ts);
  std::vector<double> steady;
  for (double level : schedule) {
    double acc = 0.0;
    const std::size_t window = std::min(kSteadyWindow, per_level);
    for (std::size_t k = 0; k < per_level; ++k) {
      out.u.push_back(level);
      out.y.push_back(sim.measure());
      sim.apply(level);
      // Read the settled angle from the last samples inside the hold.
      if (k + window >= per_level) acc += sim.measure();
    }
    steady.push_back(acc / static_cast<double>(window));
  }
  const std::size_t n = levels.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double up = steady[i];
    const double down = steady[schedule.size() - 1 - i];
    out.points.push_back({levels[i], up, down});
  }
  return out;
}

}  // namespace valvelab::plant
