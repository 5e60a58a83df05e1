// End-to-end acceptance checks. Prints one PASS/FAIL line per check and exits
// nonzero if any check fails.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "valvelab/adapt.hpp"
#include "valvelab/cloe.hpp"
#include "valvelab/control.hpp"
#include "valvelab/csv.hpp"
#include "valvelab/ident.hpp"
#include "valvelab/plant.hpp"
#include "valvelab/presets.hpp"
#include "valvelab/signals.hpp"
#include "valvelab/spectral.hpp"

namespace fs = std::filesystem;
using namespace valvelab;

namespace {

constexpr double kA1 = -0.9152;
constexpr double kB1 = -0.0609;
constexpr double kTs = 0.05;

const plant::DiscretePlantModel kPlant{{kA1}, {kB1}, 0, kTs};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

control::PoleSpec nominal_spec() { return {5.0, 1.0, kTs, DelayPolynomial::one()}; }

control::RstController robust_design(const plant::DiscretePlantModel& m, const control::PoleSpec& spec) {
  return control::bezout_design(m, control::dominant_poles(spec), spec.auxiliary, DelayPolynomial::integrator(),
                                DelayPolynomial::nyquist_opening());
}

// ---------------------------------------------------------------------------

void pi_gains(Outcome& o) {
  const auto P = control::dominant_poles(nominal_spec());
  const auto c = control::pi_design(kA1, kB1, P, kTs);
  o.detail << "p1=" << num(P[1]) << " p2=" << num(P[2]) << " r0=" << num(c.R()[0]) << " r1=" << num(c.R()[1]);
  o.require(std::abs(P[1] - -1.5576) <= 1e-4, "p1");
  o.require(std::abs(P[2] - 0.6065) <= 1e-4, "p2");
  o.require(std::abs(c.R()[0] - -5.8719) <= 1e-3, "r0");
  o.require(std::abs(c.R()[1] - 5.0685) <= 1e-3, "r1");
}

void robust_rst(Outcome& o) {
  const auto c = robust_design(kPlant, nominal_spec());
  const std::vector<double> r{-3.0157, -0.4017, 2.6140};
  const std::vector<double> s{1.0, -0.8261, -0.1739};
  o.detail << "R=(" << num(c.R()[0]) << ", " << num(c.R()[1]) << ", " << num(c.R()[2]) << ") S=(" << num(c.S()[0])
           << ", " << num(c.S()[1]) << ", " << num(c.S()[2]) << ")";
  o.require(c.R().size() == 3 && c.S().size() == 3, "degrees");
  for (std::size_t i = 0; i < 3; ++i) {
    o.require(std::abs(c.R()[i] - r[i]) <= 1e-3, "R coefficient " + std::to_string(i));
    o.require(std::abs(c.S()[i] - s[i]) <= 1e-3, "S coefficient " + std::to_string(i));
  }
  o.require(c.R_at(-1.0) == 0.0, "R(-1) = 0");
  o.require(c.S_at(1.0) == 0.0, "S(1) = 0");
}

void pole_placement(Outcome& o) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> pole(-0.98, 0.98), gain(0.02, 2.0), coin(0.0, 1.0);
  std::uniform_real_distribution<double> omega(1.0, 20.0), aux(0.05, 0.5);
  double worst_pi = 0.0, worst_rst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double a1 = -pole(rng);
    const double b1 = gain(rng) * (coin(rng) < 0.5 ? -1.0 : 1.0);
    // keep zeta away from 1 so the dominant roots are simple
    const double zeta = coin(rng) < 0.5 ? 0.3 + 0.6 * coin(rng) : 1.1 + 0.9 * coin(rng);
    control::PoleSpec spec{omega(rng), zeta, kTs, DelayPolynomial{1.0, -aux(rng)}};
    const plant::DiscretePlantModel m{{a1}, {b1}, 0, kTs};
    const auto PD = control::dominant_poles(spec);

    const auto pi = control::pi_design(a1, b1, PD, kTs);
    const auto cl_pi = oracle::add(oracle::multiply({1.0, a1}, pi.S().coefficients()),
                                   oracle::multiply({0.0, b1}, pi.R().coefficients()));
    worst_pi = std::max(worst_pi, oracle::root_distance(oracle::roots(cl_pi), oracle::roots(PD.coefficients())));

    const auto rst = robust_design(m, spec);
    const auto cl_rst = oracle::add(oracle::multiply({1.0, a1}, rst.S().coefficients()),
                                    oracle::multiply({0.0, b1}, rst.R().coefficients()));
    const auto P = oracle::multiply(PD.coefficients(), spec.auxiliary.coefficients());
    worst_rst = std::max(worst_rst, oracle::root_distance(oracle::roots(cl_rst), oracle::roots(P)));
  }
  o.detail << "100 plants, worst root distance PI " << num(worst_pi, 3) << ", RST " << num(worst_rst, 3);
  o.require(worst_pi < 1e-9, "PI roots");
  o.require(worst_rst < 1e-9, "RST roots");
}

void sensitivity(Outcome& o) {
  const auto rst = robust_design(kPlant, nominal_spec());
  const auto pi = control::pi_design(kA1, kB1, control::dominant_poles(nominal_spec()), kTs);
  const auto s_rst = control::sensitivity(kPlant, rst);
  const auto s_pi = control::sensitivity(kPlant, pi);
  o.detail << "max|Syp|=" << num(s_rst.max_syp_db, 4) << " dB margin=" << num(s_rst.modulus_margin, 4)
           << " |Sup(pi/Ts)| RST=" << num(s_rst.sup_db_at_nyquist(), 4) << " dB PI=" << num(s_pi.sup_db_at_nyquist(), 4)
           << " dB";
  o.require(s_rst.max_syp_db < 6.0, "max |Syp| < 6 dB");
  o.require(s_rst.modulus_margin > 0.5, "modulus margin > 0.5");
  o.require(s_rst.sup_db_at_nyquist() < -300.0, "|Sup| at Nyquist < -300 dB");
  o.require(s_pi.sup_db_at_nyquist() - s_rst.sup_db_at_nyquist() >= 40.0, "PI exceeds RST by 40 dB");
}

void prbs(Outcome& o) {
  signals::PrbsConfig c;
  c.n_registers = 9;
  c.divider = 1;
  const auto bits = signals::prbs_bits(c);
  const auto ones = std::count(bits.begin(), bits.end(), 1);
  const auto ref = oracle::lfsr_bits(9, c.effective_taps(), c.seed);
  const bool same = ref.size() == bits.size() && std::equal(ref.begin(), ref.end(), bits.begin(),
                                                            [](int a, std::uint8_t b) { return a == b; });
  signals::PrbsConfig p2 = c, p1 = c;
  p2.divider = 2;
  const bool rule2 = signals::check_prbs_constraint(p2, kTs, 0.8);
  const bool rule1 = signals::check_prbs_constraint(p1, kTs, 0.8);
  o.detail << "period=" << bits.size() << " ones=" << ones << " rule(p=2)=" << rule2 << " rule(p=1)=" << rule1;
  o.require(bits.size() == 511 && c.period_bits() == 511, "period 511");
  o.require(ones == 256, "256 ones");
  o.require(same, "matches brute-force register");
  o.require(rule2 && !rule1, "design rule");
}

void etfe(Outcome& o) {
  signals::PrbsConfig c;  // Nr = 9, p = 2: one period is 1022 samples
  const std::size_t n = c.period_samples();
  const auto u = signals::prbs_generate(c, 2 * n);
  const auto y = plant::linear_run(kPlant, u);
  const std::vector<double> uu(u.end() - static_cast<std::ptrdiff_t>(n), u.end());
  const std::vector<double> yy(y.end() - static_cast<std::ptrdiff_t>(n), y.end());
  const auto fr = spectral::etfe(uu, yy, kTs);
  double mag = 0.0, phase = 0.0;
  std::size_t bins = 0;
  for (std::size_t i = 0; i < fr.size() && fr.omega[i] < 45.0; ++i, ++bins) {
    const auto g = oracle::arx_response({kA1}, {kB1}, fr.omega[i], kTs);
    mag = std::max(mag, std::abs(spectral::to_db(fr.values[i]) - 20.0 * std::log10(std::abs(g))));
    phase = std::max(phase, std::abs(std::arg(fr.values[i] / g)) * 180.0 / std::numbers::pi);
  }
  o.detail << n << " samples, " << bins << " bins below 45 rad/s, max error " << num(mag, 3) << " dB, " << num(phase, 3)
           << " deg";
  o.require(bins > 0, "bins");
  o.require(mag <= 0.5, "magnitude within 0.5 dB");
  o.require(phase <= 3.0, "phase within 3 deg");
}

// Independent batch fit by QR on the stacked regressors.
Eigen::VectorXd qr_fit(const std::vector<ident::Regressor>& regs) {
  const auto n = static_cast<Eigen::Index>(regs.front().phi.size());
  Eigen::MatrixXd phi(static_cast<Eigen::Index>(regs.size()), n);
  Eigen::VectorXd y(static_cast<Eigen::Index>(regs.size()));
  for (std::size_t k = 0; k < regs.size(); ++k) {
    for (Eigen::Index i = 0; i < n; ++i) phi(static_cast<Eigen::Index>(k), i) = regs[k].phi[static_cast<std::size_t>(i)];
    y(static_cast<Eigen::Index>(k)) = regs[k].y;
  }
  return phi.householderQr().solve(y);
}

void rls_batch(Outcome& o) {
  signals::PrbsConfig c;
  c.offset = 0.0;
  c.amplitude = 10.0;
  const auto u = signals::prbs_excitation(c, 500);
  const auto y = oracle::arx_simulate({-1.3, 0.45}, {0.2, -0.05}, u);
  const auto regs = ident::build_regressors(u, y, 2, 2);
  auto init = ident::AdaptationState::make(Eigen::VectorXd::Zero(4), 1e6, ident::GainProfile::decreasing_gain);
  init.lambda1 = init.lambda2 = 1.0;
  const auto trace = ident::rls_run(regs, init);
  const auto batch = ident::batch_least_squares(regs);
  const Eigen::VectorXd ref = qr_fit(regs);
  const double diff = (trace.final.theta - batch.theta).cwiseAbs().maxCoeff();
  const double diff_ref = (batch.theta - ref).cwiseAbs().maxCoeff();
  bool spd = true;
  double min_eig = std::numeric_limits<double>::infinity();
  for (const auto& F : trace.F) {
    spd = spd && F == F.transpose();
    const double e = ident::min_eigenvalue(F);
    min_eig = std::min(min_eig, e);
    spd = spd && e > 0.0;
  }
  o.detail << "samples=" << u.size() << " |theta_rls - theta_batch|max=" << num(diff, 3)
           << " |batch - QR|max=" << num(diff_ref, 3) << " min eig(F)=" << num(min_eig, 3);
  o.require(diff <= 1e-6, "recursive equals batch");
  o.require(diff_ref <= 1e-9, "batch equals QR oracle");
  o.require(spd, "F symmetric positive definite");
}

// Plain-arithmetic recursive least squares for two parameters, used as an oracle.
struct Rls2 {
  double t0 = 0.0, t1 = 0.0;
  double f00, f01, f11;
  double l1, l0;
  bool forgetting;
  Rls2(double gain, bool vf, double lambda) : f00(gain), f01(0.0), f11(gain), l1(vf ? lambda : 1.0), l0(lambda), forgetting(vf) {}
  void step(double p0, double p1, double y) {
    const double fp0 = f00 * p0 + f01 * p1, fp1 = f01 * p0 + f11 * p1;
    const double g = p0 * fp0 + p1 * fp1;
    const double e = (y - t0 * p0 - t1 * p1) / (1.0 + g);
    t0 += fp0 * e;
    t1 += fp1 * e;
    const double d = l1 + g;
    f00 = (f00 - fp0 * fp0 / d) / l1;
    f01 = (f01 - fp0 * fp1 / d) / l1;
    f11 = (f11 - fp1 * fp1 / d) / l1;
    if (forgetting) l1 = l0 * l1 + 1.0 - l0;
  }
};

void variable_forgetting(Outcome& o) {
  // closed form of the forgetting sequence
  auto s = ident::AdaptationState::make(Eigen::Vector2d::Zero(), 1000.0, ident::GainProfile::variable_forgetting, 0.97, 0.97);
  double worst = 0.0;
  bool monotone = true;
  double previous = s.lambda1;
  const std::vector<double> phi{1.0, 0.5};
  for (int t = 1; t <= 500; ++t) {
    s = ident::rls_step(s, phi, 0.0).state;
    worst = std::max(worst, std::abs(s.lambda1 - (1.0 - std::pow(0.97, t) * 0.03)));
    monotone = monotone && s.lambda1 >= previous;
    previous = s.lambda1;
    if (t == 1) o.detail << "lambda1(1)=" << num(s.lambda1, 6);
  }
  o.require(worst < 1e-12, "closed form");
  o.require(monotone, "monotone");
  o.require(1.0 - s.lambda1 < 1e-6, "1 - lambda1(500) < 1e-6");
  o.detail << " 1-lambda1(500)=" << num(1.0 - s.lambda1, 3);

  // parameter jump; settling takes 11043 samples with variable forgetting and 12669 with lambda1 = 1
  constexpr std::size_t kJump = 250;
  constexpr std::size_t kHorizon = 12000;
  constexpr std::size_t kRun = 30000;
  constexpr double kTol = 1e-3;
  signals::PrbsConfig c{.n_registers = 9, .taps = {}, .divider = 1, .seed = 1, .offset = 0.0, .amplitude = 10.0};
  const auto u = signals::prbs_excitation(c, kRun);
  const plant::DiscretePlantModel after{{-0.85}, {-0.09}, 0, kTs};
  plant::LinearPlant p(kPlant);
  std::vector<double> y;
  for (std::size_t k = 0; k < kRun; ++k) {
    if (k == kJump) p.set_model(after);
    y.push_back(p.measure());
    p.apply(u[k]);
  }
  const auto regs = ident::build_regressors(u, y, 1, 1);
  auto settle = [&](ident::GainProfile profile) {
    const auto init = ident::AdaptationState::make(Eigen::Vector2d::Zero(), 1000.0, profile, 0.97, 0.97);
    const auto trace = ident::rls_run(regs, init);
    Rls2 oracle_rls(1000.0, profile == ident::GainProfile::variable_forgetting, 0.97);
    std::size_t last_bad = 0, oracle_bad = 0;
    double agree = 0.0;
    for (std::size_t i = 0; i < regs.size(); ++i) {
      oracle_rls.step(regs[i].phi[0], regs[i].phi[1], regs[i].y);
      const auto& th = trace.theta[i];
      if (std::max(std::abs(th(0) - -0.85), std::abs(th(1) - -0.09)) >= kTol) last_bad = i + 1;
      if (std::max(std::abs(oracle_rls.t0 - -0.85), std::abs(oracle_rls.t1 - -0.09)) >= kTol) oracle_bad = i + 1;
      agree = std::max(agree, std::max(std::abs(oracle_rls.t0 - th(0)), std::abs(oracle_rls.t1 - th(1))));
    }
    // regressor i has its target at sample i + 1
    const std::size_t since_jump = last_bad + 1 > kJump ? last_bad + 1 - kJump : 0;
    return std::tuple{since_jump, last_bad == oracle_bad, agree};
  };
  const auto [vf, vf_same, vf_agree] = settle(ident::GainProfile::variable_forgetting);
  const auto [ls, ls_same, ls_agree] = settle(ident::GainProfile::decreasing_gain);
  o.detail << "; jump at " << kJump << ", horizon " << kHorizon << ": settled after " << vf
           << " (variable forgetting) vs " << ls << " (lambda1 = 1) samples";
  o.require(vf_same && ls_same && std::max(vf_agree, ls_agree) < 1e-7, "matches plain-arithmetic oracle");
  o.require(vf <= kHorizon, "variable forgetting settles within horizon");
  o.require(ls > kHorizon, "lambda1 = 1 does not settle within horizon");
}

void cloe_checks(Outcome& o) {
  const auto ctrl = adapt::DesignSpec{}.design(kPlant);
  signals::PrbsConfig c{.n_registers = 8, .taps = {}, .divider = 4, .seed = 1, .offset = 0.0, .amplitude = 10.0};
  const auto excitation = signals::prbs_excitation(c, 300);
  const Eigen::Vector2d truth(kA1, kB1);
  const auto init = ident::AdaptationState::make(Eigen::Vector2d(-0.8, -0.12), 1000.0, ident::GainProfile::variable_forgetting);

  plant::LinearPlant clean(kPlant);
  const auto s = cloe::cl_identify(clean, ctrl, excitation, init, {});
  const double err = (s.final.theta - truth).cwiseAbs().maxCoeff();
  std::size_t first = s.theta.size();
  for (std::size_t k = s.theta.size(); k-- > 0;) {
    if ((s.theta[k] - truth).cwiseAbs().maxCoeff() >= 1e-4) break;
    first = k;
  }
  o.detail << "noiseless error after 300 samples " << num(err, 3) << " (within 1e-4 from sample " << first + 1 << ")";
  o.require(s.theta.size() == 300 && err < 1e-4, "noiseless convergence in 300 samples");

  double cloe_err = 0.0, rls_err = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    plant::LinearPlant noisy(kPlant, 0.5, seed);
    const auto sn = cloe::cl_identify(noisy, ctrl, excitation, init, {});
    cloe_err += (sn.final.theta - truth).norm();
    // open-loop regressors on the same closed-loop record: phi = [-y(k), u(k)], target y(k+1)
    std::vector<ident::Regressor> regs;
    for (std::size_t k = 1; k < sn.y.size(); ++k) regs.push_back({{-sn.y[k - 1], sn.u[k]}, sn.y[k]});
    rls_err += (ident::rls_run(regs, init).final.theta - truth).norm();
  }
  o.detail << "; sigma 0.5, 20 seeds: mean error CLOE " << num(cloe_err / 20.0, 4) << " vs open-loop RLS "
           << num(rls_err / 20.0, 4);
  o.require(cloe_err < rls_err, "CLOE beats open-loop RLS under noise");
}

void valve_envelope(Outcome& o) {
  std::vector<double> levels;
  for (int i = 0; i <= 8; ++i) levels.push_back(5.0 * i);
  for (const auto& name : plant::preset_names()) {
    const auto params = plant::builtin_preset(name);
    const auto sweep = plant::static_sweep(params, levels, 2.5, kTs);
    const double width = sweep.max_width();

    std::vector<double> step(20, 0.0);
    step.resize(120, 30.0);
    const auto y = plant::valve_run(params, step, kTs);
    const double rise = signals::rise_time(y, kTs, 20);

    const adapt::OpenLoopExperiment ex;
    const auto model = adapt::open_loop_fit(params, ex);
    const double static_gain = (sweep.points.back().angle_up - sweep.points.front().angle_up) / 40.0;

    const auto data = adapt::open_loop_run(params, ex);
    const auto smoothed = spectral::smooth(spectral::etfe(data.u, data.y, kTs), 25);
    const double slope = spectral::slope_fit(smoothed, 3.0, 30.0);
    const double corner = spectral::corner_frequency(smoothed);

    o.detail << "\n    " << name << ": width " << num(width, 4) << " deg, rise " << num(rise, 3) << " s, gain "
             << num(model.dc_gain(), 4) << " (static " << num(static_gain, 4) << "), slope " << num(slope, 4)
             << " dB/dec, corner " << num(corner, 4) << " rad/s";
    o.require(width > 2.0, name + " hysteresis");
    o.require(rise >= 0.2 && rise <= 0.8, name + " rise time");
    o.require(model.dc_gain() < 0.0 && static_gain < 0.0, name + " negative gain");
    o.require(slope >= -26.0 && slope <= -14.0, name + " slope");
    o.require(corner >= 1.0 && corner <= 10.0, name + " corner");
  }
}

#ifdef VALVELAB_CLI_PATH
fs::path scratch_dir() {
  static const fs::path dir = fs::temp_directory_path() / ("valvelab-acceptance-" + std::to_string(::getpid()));
  return dir;
}

int run_adapt(const fs::path& out) {
  fs::create_directories(out.parent_path());
  const std::string cmd = std::string("\"") + VALVELAB_CLI_PATH +
                          "\" adapt --seed 7 --set valve.preset=valve6 --set model.identify_preset=valve0 --out \"" +
                          out.string() + "\" > \"" + (out.string() + ".log") + "\" 2>&1";
  return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void iterative_adaptation(Outcome& o) {
  const auto out = scratch_dir() / "run_a";
  const int status = run_adapt(out);
  o.require(status == 0, "adapt command succeeded");
  if (status != 0) return;
  const auto table = csv::read(out / "iterations.csv");
  const auto cost = table.column("tracking_cost");
  o.detail << "tracking_cost by iteration:";
  for (double j : cost) o.detail << " " << num(j, 5);
  o.require(cost.size() >= 5, "five records");
  if (cost.size() < 5) return;
  const auto [lo, hi] = std::minmax_element(cost.begin() + 2, cost.begin() + 5);
  const double spread = (*hi - *lo) / *lo;
  o.detail << "; spread over iterations 2-4 " << num(100.0 * spread, 3) << "%";
  o.require(cost[1] < cost[0] && cost[2] < cost[0], "cost below iteration 0 at iterations 1 and 2");
  o.require(spread < 0.10, "iterations 2-4 within 10%");
}

void determinism(Outcome& o) {
  const auto a = scratch_dir() / "run_a";
  const auto b = scratch_dir() / "run_b";
  if (!fs::exists(a / "iterations.csv")) o.require(run_adapt(a) == 0, "first adapt run");
  o.require(run_adapt(b) == 0, "second adapt run");
  std::size_t compared = 0;
  bool identical = true;
  for (const auto& entry : fs::directory_iterator(a)) {
    if (entry.path().extension() != ".csv") continue;
    ++compared;
    const auto other = b / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
      identical = false;
      o.detail << " differs: " << entry.path().filename().string();
    }
  }
  for (const auto& entry : fs::directory_iterator(b))
    if (entry.path().extension() == ".csv" && !fs::exists(a / entry.path().filename())) identical = false;
  o.detail << compared << " CSV files compared";
  o.require(compared >= 3, "CSV outputs present");
  o.require(identical, "byte-identical");
}
#endif

}  // namespace

int main() {
  struct Check {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
  };
  std::vector<Check> checks{
      {1, "PI gain reproduction", pi_gains},
      {2, "robust RST reproduction", robust_rst},
      {3, "pole-placement soundness", pole_placement},
      {4, "sensitivity and robustness", sensitivity},
      {5, "PRBS properties", prbs},
      {6, "ETFE against analytic response", etfe},
      {7, "recursive and batch least squares", rls_batch},
      {8, "variable forgetting", variable_forgetting},
      {9, "closed-loop output error identification", cloe_checks},
      {10, "valve behavioural envelope", valve_envelope},
#ifdef VALVELAB_CLI_PATH
      {11, "iterative adaptation", iterative_adaptation},
      {12, "end-to-end determinism", determinism},
#endif
  };

  int failures = 0;
  for (const auto& check : checks) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      check.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << check.id << " (" << check.name << ", "
              << num(seconds, 2) << " s): " << o.detail.str() << "\n";
  }
#ifdef VALVELAB_CLI_PATH
  std::error_code ec;
  fs::remove_all(scratch_dir(), ec);
#else
  std::cout << "FAIL criteria 11-12: command-line tool not built\n";
  ++failures;
#endif
  std::cout << (failures ? std::to_string(failures) + " check(s) failed" : std::string("all checks passed")) << "\n";
  return failures ? 1 : 0;
}
