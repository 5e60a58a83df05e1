#include "valvelab/ident.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "valvelab/error.hpp"

namespace valvelab::ident {

std::vector<Regressor> build_regressors(std::span<const double> u, std::span<const double> y, std::size_t na,
                                        std::size_t nb) {
  return build_regressors(u, y, na, nb, std::max(na, nb));
}

std::vector<Regressor> build_regressors(std::span<const double> u, std::span<const double> y, std::size_t na,
                                        std::size_t nb, std::size_t start) {
  if (u.size() != y.size()) throw InputError("build_regressors: u and y lengths differ");
  if (na + nb == 0) throw InputError("build_regressors: empty model");
  if (start < std::max(na, nb)) throw InputError("build_regressors: start leaves regressors without history");
  std::vector<Regressor> regs;
  const std::size_t n = y.size();
  if (n <= start) return regs;
  regs.reserve(n - start);
  for (std::size_t t = start; t < n; ++t) {
    Regressor r;
    r.phi.reserve(na + nb);
    for (std::size_t i = 1; i <= na; ++i) r.phi.push_back(-y[t - i]);
    for (std::size_t j = 1; j <= nb; ++j) r.phi.push_back(u[t - j]);
    r.y = y[t];
    regs.push_back(std::move(r));
  }
  return regs;
}

double criterion(std::span<const Regressor> regs, const Eigen::VectorXd& theta) {
  if (regs.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& r : regs) {
    const Eigen::Map<const Eigen::VectorXd> phi(r.phi.data(), static_cast<Eigen::Index>(r.phi.size()));
    const double e = r.y - phi.dot(theta);
    acc += 0.5 * e * e;
  }
  return acc / static_cast<double>(regs.size());
}

LeastSquaresFit batch_least_squares(std::span<const Regressor> regs) {
  if (regs.empty()) throw IdentifiabilityError("batch_least_squares: no regressors");
  const auto n = static_cast<Eigen::Index>(regs.front().phi.size());
  if (static_cast<Eigen::Index>(regs.size()) < n)
    throw IdentifiabilityError("batch_least_squares: fewer regressors than parameters");

  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (const auto& r : regs) {
    if (static_cast<Eigen::Index>(r.phi.size()) != n) throw InputError("batch_least_squares: ragged regressors");
    const Eigen::Map<const Eigen::VectorXd> phi(r.phi.data(), n);
    if (!phi.allFinite() || !std::isfinite(r.y)) throw NumericError("batch_least_squares: non-finite data");
    normal.selfadjointView<Eigen::Lower>().rankUpdate(phi);
    rhs += phi * r.y;
  }
  normal = normal.selfadjointView<Eigen::Lower>();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxCondition)
    throw IdentifiabilityError("batch_least_squares: data not informative enough (condition number above 1e12)");

  Eigen::LLT<Eigen::MatrixXd> llt(normal);
  if (llt.info() != Eigen::Success) throw IdentifiabilityError("batch_least_squares: normal equations not positive definite");

  LeastSquaresFit fit;
  fit.theta = llt.solve(rhs);
  fit.criterion = criterion(regs, fit.theta);
  fit.condition = hi / lo;
  return fit;
}

double OrderScan::at(std::size_t na, std::size_t nb) const {
  for (std::size_t i = 0; i < na_values.size(); ++i)
    for (std::size_t j = 0; j < nb_values.size(); ++j)
      if (na_values[i] == na && nb_values[j] == nb) return criterion[i][j];
  throw InputError("order scan has no entry for the requested orders");
}

double OrderScan::normalized(std::size_t na, std::size_t nb) const { return at(na, nb) / at(1, 1); }

csv::Table OrderScan::to_table() const {
  csv::Table t;
  t.header = {"na", "nb", "V", "V_normalized"};
  double base = 0.0;
  bool have_base = true;
  try {
    base = at(1, 1);
  } catch (const InputError&) {
    have_base = false;
  }
  for (std::size_t i = 0; i < na_values.size(); ++i)
    for (std::size_t j = 0; j < nb_values.size(); ++j)
      t.rows.push_back({static_cast<double>(na_values[i]), static_cast<double>(nb_values[j]), criterion[i][j],
                        have_base && base > 0.0 ? criterion[i][j] / base : std::nan("")});
  return t;
}

OrderScan order_scan(std::span<const double> u, std::span<const double> y, std::span<const std::size_t> na_values,
                     std::span<const std::size_t> nb_values) {
  if (na_values.empty() || nb_values.empty()) throw InputError("order_scan: empty order range");
  OrderScan scan;
  scan.na_values.assign(na_values.begin(), na_values.end());
  scan.nb_values.assign(nb_values.begin(), nb_values.end());
  scan.start = std::max(*std::max_element(na_values.begin(), na_values.end()),
                        *std::max_element(nb_values.begin(), nb_values.end()));
  for (std::size_t na : na_values) {
    std::vector<double> row;
    for (std::size_t nb : nb_values) {
      if (nb == 0) throw InputError("order_scan: nb must be >= 1");
      const auto regs = build_regressors(u, y, na, nb, scan.start);
      row.push_back(batch_least_squares(regs).criterion);
    }
    scan.criterion.push_back(std::move(row));
  }
  return scan;
}

GainProfile parse_profile(const std::string& name) {
  if (name == "constant-gain") return GainProfile::constant_gain;
  if (name == "decreasing") return GainProfile::decreasing_gain;
  if (name == "variable-forgetting") return GainProfile::variable_forgetting;
  throw ConfigError("unknown adaptation profile: '" + name + "' (constant-gain | decreasing | variable-forgetting)");
}

std::string to_string(GainProfile profile) {
  switch (profile) {
    case GainProfile::constant_gain: return "constant-gain";
    case GainProfile::decreasing_gain: return "decreasing";
    case GainProfile::variable_forgetting: return "variable-forgetting";
  }
  return "unknown";
}

AdaptationState AdaptationState::make(const Eigen::VectorXd& theta0, double initial_gain, GainProfile profile,
                                      double lambda0, double lambda1) {
  if (!(initial_gain > 0.0)) throw InputError("initial adaptation gain must be positive");
  AdaptationState s;
  s.theta = theta0;
  s.F = initial_gain * Eigen::MatrixXd::Identity(theta0.size(), theta0.size());
  s.profile = profile;
  s.lambda0 = lambda0;
  s.lambda2 = 1.0;
  s.lambda1 = profile == GainProfile::variable_forgetting ? lambda1 : 1.0;
  s.validate();
  return s;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

void AdaptationState::validate() const {
  if (F.rows() != theta.size() || F.cols() != theta.size()) throw InputError("adaptation gain has the wrong shape");
  if (!theta.allFinite() || !F.allFinite()) throw NumericError("adaptation state is not finite");
  if (!(lambda1 > 0.0 && lambda1 <= 1.0)) throw InputError("lambda1 must be in (0, 1]");
  if (!(lambda2 >= 0.0 && lambda2 < 2.0)) throw InputError("lambda2 must be in [0, 2)");
  if (profile == GainProfile::variable_forgetting && !(lambda0 > 0.0 && lambda0 < 1.0))
    throw InputError("lambda0 must be in (0, 1)");
  if (theta.size() > 0) {
    if ((F - F.transpose()).cwiseAbs().maxCoeff() > 1e-9 * F.cwiseAbs().maxCoeff())
      throw InputError("adaptation gain must be symmetric");
    if (!(min_eigenvalue(F) > 0.0)) throw InputError("adaptation gain must be positive definite");
  }
}

RlsStep rls_step(const AdaptationState& state, std::span<const double> phi_in, double y) {
  const auto n = state.theta.size();
  if (static_cast<Eigen::Index>(phi_in.size()) != n) throw InputError("rls_step: regressor length mismatch");
  const Eigen::Map<const Eigen::VectorXd> phi(phi_in.data(), n);
  if (!phi.allFinite() || !std::isfinite(y)) throw NumericError("rls_step: non-finite regressor or measurement");

  RlsStep out{state, 0.0, 0.0};
  const Eigen::VectorXd Fphi = state.F * phi;
  const double gain = phi.dot(Fphi);
  out.eps_apriori = y - state.theta.dot(phi);
  out.eps_aposteriori = out.eps_apriori / (1.0 + gain);
  out.state.theta = state.theta + Fphi * out.eps_aposteriori;

  const double l1 = state.lambda1;
  switch (state.profile) {
    case GainProfile::constant_gain:
      break;
    case GainProfile::decreasing_gain:
    case GainProfile::variable_forgetting: {
      const double l2 = state.profile == GainProfile::variable_forgetting ? 1.0 : state.lambda2;
      Eigen::MatrixXd F = state.F;
      if (l2 > 0.0) F -= (Fphi * Fphi.transpose()) / (l1 / l2 + gain);
      F /= l1;
      out.state.F = 0.5 * (F + F.transpose());
      break;
    }
  }
  if (state.profile == GainProfile::variable_forgetting) {
    out.state.lambda2 = 1.0;
    out.state.lambda1 = state.lambda0 * l1 + 1.0 - state.lambda0;
  }
  if (!out.state.theta.allFinite() || !out.state.F.allFinite()) throw NumericError("rls_step: update diverged");
  return out;
}

RlsTrace rls_run(std::span<const Regressor> regs, const AdaptationState& init) {
  init.validate();
  RlsTrace trace;
  trace.final = init;
  for (const auto& r : regs) {
    auto step = rls_step(trace.final, r.phi, r.y);
    trace.final = std::move(step.state);
    trace.theta.push_back(trace.final.theta);
    trace.F.push_back(trace.final.F);
    trace.lambda1.push_back(trace.final.lambda1);
    trace.eps_apriori.push_back(step.eps_apriori);
    trace.eps_aposteriori.push_back(step.eps_aposteriori);
  }
  return trace;
}

RlsTrace rls_run(std::span<const double> u, std::span<const double> y, std::size_t na, std::size_t nb,
                 const AdaptationState& init) {
  if (init.size() != na + nb) throw InputError("rls_run: initial state size must equal na + nb");
  if (u.empty() && y.empty()) {
    init.validate();
    RlsTrace trace;
    trace.final = init;
    return trace;
  }
  const auto regs = build_regressors(u, y, na, nb);
  return rls_run(regs, init);
}

csv::Table RlsTrace::to_table() const {
  csv::Table t;
  t.header = {"t"};
  const auto n = final.theta.size();
  for (Eigen::Index i = 0; i < n; ++i) t.header.push_back("theta_" + std::to_string(i + 1));
  t.header.insert(t.header.end(), {"trace_F", "eps_apriori", "eps_aposteriori"});
  for (std::size_t k = 0; k < theta.size(); ++k) {
    std::vector<double> row{static_cast<double>(k + 1)};
    for (Eigen::Index i = 0; i < n; ++i) row.push_back(theta[k](i));
    row.push_back(F[k].trace());
    row.push_back(eps_apriori[k]);
    row.push_back(eps_aposteriori[k]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<double> detrend(std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  if (out.empty()) return out;
  const double mean = std::accumulate(out.begin(), out.end(), 0.0) / static_cast<double>(out.size());
  for (double& v : out) v -= mean;
  return out;
}

}  // namespace valvelab::ident
