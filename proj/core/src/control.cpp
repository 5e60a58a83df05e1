#include "valvelab/control.hpp"

#include <algorithm>
#include <cmath>
#include <Eigen/Dense>
#include <numbers>
#include <sstream>

#include "valvelab/error.hpp"
#include "valvelab/spectral.hpp"

namespace valvelab::control {

void PoleSpec::validate() const {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw InputError("omega0 must be positive");
  if (!(zeta > 0.0) || !std::isfinite(zeta)) throw InputError("zeta must be positive");
  if (!(ts > 0.0) || !std::isfinite(ts)) throw InputError("Ts must be positive");
  if (!(omega0 * ts < std::numbers::pi)) throw InputError("omega0 * Ts must be below pi");
  if (auxiliary.empty() || auxiliary[0] != 1.0) throw InputError("auxiliary poles must be monic (P_F(0) = 1)");
}

DelayPolynomial dominant_poles(const PoleSpec& spec) {
  spec.validate();
  const double w = spec.omega0;
  const double z = spec.zeta;
  const double ts = spec.ts;
  double p1 = 0.0, p2 = 0.0;
  if (z < 1.0) {
    const double radius = std::exp(-z * w * ts);
    const double angle = w * std::sqrt(1.0 - z * z) * ts;
    p1 = -2.0 * radius * std::cos(angle);
    p2 = radius * radius;
  } else {
    const double root = z > 1.0 ? w * std::sqrt(z * z - 1.0) : 0.0;
    const double z1 = std::exp((-z * w + root) * ts);
    const double z2 = std::exp((-z * w - root) * ts);
    p1 = -(z1 + z2);
    p2 = z1 * z2;
  }
  return DelayPolynomial{1.0, p1, p2};
}

RstController::RstController(DelayPolynomial r, DelayPolynomial s, DelayPolynomial t, double ts)
    : r_(r), s_(s), t_(std::move(t)), free_r_(std::move(r)), free_s_(std::move(s)), ts_(ts) {
  check();
}

RstController RstController::from_parts(DelayPolynomial fixed_r, DelayPolynomial free_r, DelayPolynomial fixed_s,
                                        DelayPolynomial free_s, DelayPolynomial t, double ts) {
  RstController c;
  c.r_ = fixed_r * free_r;
  c.s_ = fixed_s * free_s;
  c.t_ = std::move(t);
  c.fixed_r_ = std::move(fixed_r);
  c.free_r_ = std::move(free_r);
  c.fixed_s_ = std::move(fixed_s);
  c.free_s_ = std::move(free_s);
  c.ts_ = ts;
  c.check();
  return c;
}

void RstController::check() const {
  if (!(ts_ > 0.0) || !std::isfinite(ts_)) throw InputError("controller Ts must be positive");
  if (s_.empty() || s_[0] != 1.0) throw InputError("controller S must satisfy S(0) = 1");
  for (const auto* p : {&r_, &s_, &t_})
    for (double c : p->coefficients())
      if (!std::isfinite(c)) throw NumericError("controller coefficients must be finite");
}

std::size_t RstController::history_depth() const {
  return std::max({r_.size(), s_.size(), t_.size(), std::size_t{1}});
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string RstController::to_text() const {
  std::ostringstream out;
  out << "# RST controller: S u = -R y + T r (coefficients of q^0, q^-1, ...)\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", ts_);
  out << "Ts = " << buf << '\n';
  out << "R = " << format_coefficients(r_) << '\n';
  out << "S = " << format_coefficients(s_) << '\n';
  out << "T = " << format_coefficients(t_) << '\n';
  out << "H_R = " << format_coefficients(fixed_r_) << '\n';
  out << "H_S = " << format_coefficients(fixed_s_) << '\n';
  out << "R_free = " << format_coefficients(free_r_) << '\n';
  out << "S_free = " << format_coefficients(free_s_) << '\n';
  return out.str();
}

RstController RstController::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  double ts = 0.0;
  bool have_ts = false;
  DelayPolynomial r, s, t, hr, hs, rf, sf;
  bool have[7] = {};
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("controller line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "Ts") {
        ts = parse_coefficients(value)[0];
        have_ts = true;
      } else if (key == "R") { r = parse_coefficients(value); have[0] = true; }
      else if (key == "S") { s = parse_coefficients(value); have[1] = true; }
      else if (key == "T") { t = parse_coefficients(value); have[2] = true; }
      else if (key == "H_R") { hr = parse_coefficients(value); have[3] = true; }
      else if (key == "H_S") { hs = parse_coefficients(value); have[4] = true; }
      else if (key == "R_free") { rf = parse_coefficients(value); have[5] = true; }
      else if (key == "S_free") { sf = parse_coefficients(value); have[6] = true; }
      else throw ConfigError("unknown key '" + key + "'");
    } catch (const InputError& e) {
      throw ConfigError("controller line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError("controller line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_ts || !have[0] || !have[1] || !have[2]) throw ConfigError("controller text needs Ts, R, S and T");
  if (!(have[3] && have[5]) && !(have[4] && have[6])) return RstController(r, s, t, ts);
  if (!have[3]) { hr = DelayPolynomial::one(); rf = r; }
  if (!have[4]) { hs = DelayPolynomial::one(); sf = s; }
  if (!have[5] || !have[6]) throw ConfigError("controller text: fixed parts need matching R_free / S_free");
  RstController c = from_parts(hr, rf, hs, sf, t, ts);
  const double tol = 1e-12 * (1.0 + std::max(max_abs_difference(r, {}), max_abs_difference(s, {})));
  if (max_abs_difference(c.R(), r) > tol || max_abs_difference(c.S(), s) > tol)
    throw ConfigError("controller text: R, S do not match their fixed and free factors");
  c.r_ = r;
  c.s_ = s;
  return c;
}

RstController pi_design(double a1, double b1, const DelayPolynomial& dominant, double ts) {
  if (b1 == 0.0 || !std::isfinite(b1)) throw DesignError("pi_design: b1 must be nonzero (pole placement unreachable)");
  if (!std::isfinite(a1)) throw DesignError("pi_design: a1 must be finite");
  if (dominant.degree() > 2 || dominant[0] != 1.0) throw DesignError("pi_design: P_D must be monic of degree <= 2");
  const double p1 = dominant[1];
  const double p2 = dominant[2];
  const double r0 = (p1 - a1 + 1.0) / b1;
  const double r1 = (p2 + a1) / b1;
  return RstController::from_parts(DelayPolynomial::one(), DelayPolynomial{r0, r1}, DelayPolynomial::integrator(),
                                   DelayPolynomial::one(), DelayPolynomial{r0 + r1}, ts);
}

DelayPolynomial closed_loop_polynomial(const DiscretePlantModel& model, const RstController& ctrl) {
  return model.A() * ctrl.S() + model.delayed_B() * ctrl.R();
}

double pole_placement_residual(const DiscretePlantModel& model, const RstController& ctrl,
                               const DelayPolynomial& target) {
  return max_abs_difference(closed_loop_polynomial(model, ctrl), target);
}

RstController bezout_design(const DiscretePlantModel& model, const DelayPolynomial& dominant,
                            const DelayPolynomial& auxiliary, const DelayPolynomial& fixed_s,
                            const DelayPolynomial& fixed_r) {
  model.validate();
  if (fixed_s.empty() || fixed_s[0] != 1.0) throw SpecificationError("bezout_design: H_S must satisfy H_S(0) = 1");
  if (fixed_r.is_zero()) throw SpecificationError("bezout_design: H_R must be nonzero");

  const DelayPolynomial a_ext = (model.A() * fixed_s).trimmed();
  const DelayPolynomial b_ext = (model.delayed_B() * fixed_r).trimmed();
  const DelayPolynomial target = (dominant * auxiliary).trimmed();
  if (b_ext.is_zero()) throw CommonFactorError("bezout_design: plant has no input gain (B = 0)");
  if (target.empty() || target[0] != 1.0) throw SpecificationError("bezout_design: P must be monic");

  const int na = a_ext.degree();
  const int nb = b_ext.degree();
  const int unknowns = na + nb;  // deg S' = nb - 1, deg R' = na - 1
  if (target.degree() > unknowns - 1)
    throw SpecificationError("bezout_design: deg(P_D P_F) = " + std::to_string(target.degree()) +
                             " exceeds deg(A H_S) + deg(B H_R) - 1 = " + std::to_string(unknowns - 1));

  Eigen::MatrixXd sylvester = Eigen::MatrixXd::Zero(unknowns, unknowns);
  for (int i = 0; i < nb; ++i)
    for (int k = 0; k <= na; ++k) sylvester(i + k, i) = a_ext[static_cast<std::size_t>(k)];
  for (int j = 0; j < na; ++j)
    for (int k = 0; k <= nb; ++k) sylvester(j + k, nb + j) = b_ext[static_cast<std::size_t>(k)];
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(unknowns);
  for (int k = 0; k < unknowns; ++k) rhs(k) = target[static_cast<std::size_t>(k)];

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sylvester);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || sv(0) / smin > kMaxSylvesterCondition)
    throw CommonFactorError("bezout_design: A H_S and B H_R share a common factor (singular Sylvester matrix)");
  const Eigen::VectorXd x = sylvester.fullPivLu().solve(rhs);

  std::vector<double> s_free(x.data(), x.data() + nb);
  std::vector<double> r_free(x.data() + nb, x.data() + unknowns);
  if (r_free.empty()) r_free.push_back(0.0);
  const double s0 = s_free.front();
  if (s0 == 0.0 || !std::isfinite(s0)) throw DesignError("bezout_design: S'(0) vanished");
  if (s0 != 1.0) {
    for (double& v : s_free) v /= s0;
    for (double& v : r_free) v /= s0;
  }
  const DelayPolynomial rf(std::move(r_free));
  const double t0 = fixed_r.at(1.0) * rf.at(1.0);
  return RstController::from_parts(fixed_r, rf, fixed_s, DelayPolynomial(std::move(s_free)), DelayPolynomial{t0},
                                   model.ts);
}

double Sensitivity::sup_db_at_nyquist() const { return spectral::to_db(sup.back()); }

csv::Table Sensitivity::to_table() const {
  csv::Table t;
  t.header = {"omega_rad_s", "Syp_db", "Sup_db"};
  for (std::size_t i = 0; i < omega.size(); ++i)
    t.rows.push_back({omega[i], spectral::to_db(syp[i]), spectral::to_db(sup[i])});
  return t;
}

Sensitivity sensitivity(const DiscretePlantModel& model, const RstController& ctrl, std::size_t n_freq) {
  if (n_freq < 64) throw InputError("sensitivity: need at least 64 frequencies");
  model.validate();
  const double nyquist = std::numbers::pi / model.ts;
  const auto A = model.A();
  const auto B = model.delayed_B();

  Sensitivity out;
  out.omega.reserve(n_freq);
  double peak = 0.0;
  for (std::size_t i = 0; i < n_freq; ++i) {
    const double x = i + 1 == n_freq ? 1.0 : std::pow(10.0, -3.0 * (1.0 - static_cast<double>(i) / (n_freq - 1)));
    const auto q = unit_delay_at(x);
    const auto as = A.at(q) * ctrl.S_at(q);
    const auto ar = A.at(q) * ctrl.R_at(q);
    const auto br = B.at(q) * ctrl.R_at(q);
    const auto p = as + br;
    out.omega.push_back(x * nyquist);
    out.syp.push_back(as / p);
    out.sup.push_back(-ar / p);
    out.open_loop.push_back(br / as);
    peak = std::max(peak, std::abs(out.syp.back()));
  }
  out.modulus_margin = 1.0 / peak;
  out.max_syp_db = 20.0 * std::log10(peak);
  return out;
}

void SignalHistory::push(double u_t, double y_t, double r_t, std::size_t depth) {
  u.push_front(u_t);
  y.push_front(y_t);
  r.push_front(r_t);
  if (u.size() > depth) u.resize(depth);
  if (y.size() > depth) y.resize(depth);
  if (r.size() > depth) r.resize(depth);
}

SignalHistory SignalHistory::filled(std::size_t depth, double u, double y, double r) {
  SignalHistory h;
  h.u.assign(depth, u);
  h.y.assign(depth, y);
  h.r.assign(depth, r);
  return h;
}

ControlOutput controller_step(const RstController& ctrl, const SignalHistory& history, double y, double r,
                              ActuatorLimits limits) {
  if (!std::isfinite(y) || !std::isfinite(r)) throw NumericError("controller_step: non-finite measurement");
  const auto& R = ctrl.R();
  const auto& S = ctrl.S();
  const auto& T = ctrl.T();
  auto past = [](const std::deque<double>& h, std::size_t k) { return k < h.size() ? h[k] : 0.0; };
  if (history.u.size() + 1 < S.size() || history.y.size() + 1 < R.size() || history.r.size() + 1 < T.size())
    throw InputError("controller_step: history shorter than the controller degrees");

  double acc = -R[0] * y + T[0] * r;
  for (std::size_t k = 1; k < S.size(); ++k) acc -= S[k] * past(history.u, k - 1);
  for (std::size_t k = 1; k < R.size(); ++k) acc -= R[k] * past(history.y, k - 1);
  for (std::size_t k = 1; k < T.size(); ++k) acc += T[k] * past(history.r, k - 1);

  ControlOutput out;
  out.unsaturated = acc;  // S(0) = 1
  out.u = std::clamp(acc, limits.low, limits.high);
  out.saturated = out.u != acc;
  return out;
}

ControllerRunner::ControllerRunner(RstController ctrl, ActuatorLimits limits)
    : ctrl_(std::move(ctrl)), limits_(limits), depth_(std::max(kDepth, ctrl_.history_depth())) {
  history_ = SignalHistory::filled(depth_, 0.0, 0.0, 0.0);
}

ControlOutput ControllerRunner::step(double y, double r) {
  const auto out = controller_step(ctrl_, history_, y, r, limits_);
  history_.push(out.u, y, r, depth_);
  return out;
}

void ControllerRunner::set_controller(RstController ctrl) {
  ctrl_ = std::move(ctrl);
  const std::size_t need = ctrl_.history_depth();
  if (need > depth_) {
    depth_ = need;
    history_.u.resize(depth_, history_.u.empty() ? 0.0 : history_.u.back());
    history_.y.resize(depth_, history_.y.empty() ? 0.0 : history_.y.back());
    history_.r.resize(depth_, history_.r.empty() ? 0.0 : history_.r.back());
  }
}

void ControllerRunner::reset_history(double u, double y, double r) { history_ = SignalHistory::filled(depth_, u, y, r); }

ReferenceModel::ReferenceModel(DelayPolynomial denominator, DelayPolynomial numerator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (den_.empty() || den_[0] != 1.0) throw InputError("reference model denominator must be monic");
  const double dc_num = num_.at(1.0);
  const double dc_den = den_.at(1.0);
  if (dc_num == 0.0 || dc_den == 0.0) throw InputError("reference model needs a finite nonzero DC gain");
  num_ *= dc_den / dc_num;
  r_past_.assign(num_.size(), 0.0);
  y_past_.assign(den_.size(), 0.0);
}

double ReferenceModel::step(double r) {
  double y = num_[0] * r;
  for (std::size_t k = 1; k < num_.size(); ++k) y += num_[k] * r_past_[k - 1];
  for (std::size_t k = 1; k < den_.size(); ++k) y -= den_[k] * y_past_[k - 1];
  r_past_.push_front(r);
  r_past_.pop_back();
  y_past_.push_front(y);
  y_past_.pop_back();
  return y;
}

double reference_model_step(const DelayPolynomial& denominator, double t_gain, const DelayPolynomial& b,
                            std::span<const double> y_past, std::span<const double> r_past, double r) {
  if (denominator.empty() || denominator[0] != 1.0) throw InputError("reference_model_step: P must be monic");
  if (y_past.size() + 1 < denominator.size() || r_past.size() + 1 < b.size())
    throw InputError("reference_model_step: history too short");
  double y = t_gain * b[0] * r;
  for (std::size_t k = 1; k < b.size(); ++k) y += t_gain * b[k] * r_past[k - 1];
  for (std::size_t k = 1; k < denominator.size(); ++k) y -= denominator[k] * y_past[k - 1];
  return y;
}

}  // namespace valvelab::control
