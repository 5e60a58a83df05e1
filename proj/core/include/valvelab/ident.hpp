#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "valvelab/csv.hpp"

namespace valvelab::ident {

/// phi(t) = [-y(t-1) .. -y(t-na), u(t-1) .. u(t-nb)] and the target y(t).
struct Regressor {
  std::vector<double> phi;
  double y = 0.0;
};

/**
 * All regressors with targets at t = start, start+1, ..., N-1 (zero-based).
 * The default start is max(na, nb), the first instant with full history.
 */
std::vector<Regressor> build_regressors(std::span<const double> u, std::span<const double> y, std::size_t na,
                                        std::size_t nb);
std::vector<Regressor> build_regressors(std::span<const double> u, std::span<const double> y, std::size_t na,
                                        std::size_t nb, std::size_t start);

struct LeastSquaresFit {
  Eigen::VectorXd theta;
  /// (1/Nbar) * sum 1/2 (y - phi' theta)^2
  double criterion = 0.0;
  /// Condition number of the normal-equations matrix.
  double condition = 0.0;
};

inline constexpr double kMaxCondition = 1e12;

/// Normal equations solved by Cholesky; throws IdentifiabilityError when ill-posed.
LeastSquaresFit batch_least_squares(std::span<const Regressor> regs);

/// Least-squares criterion of a given parameter vector.
double criterion(std::span<const Regressor> regs, const Eigen::VectorXd& theta);

struct OrderScan {
  std::vector<std::size_t> na_values;
  std::vector<std::size_t> nb_values;
  /// criterion[i][j] for (na_values[i], nb_values[j])
  std::vector<std::vector<double>> criterion;
  std::size_t start = 0;

  double at(std::size_t na, std::size_t nb) const;
  /// V(na, nb) / V(1, 1); throws when (1, 1) was not scanned.
  double normalized(std::size_t na, std::size_t nb) const;
  /// na, nb, V, V_normalized
  csv::Table to_table() const;
};

/// Criterion for every (na, nb) pair over one shared window of targets.
OrderScan order_scan(std::span<const double> u, std::span<const double> y, std::span<const std::size_t> na_values,
                     std::span<const std::size_t> nb_values);

enum class GainProfile {
  constant_gain,        ///< F held at F(0)
  decreasing_gain,      ///< fixed lambda1, lambda2 (1, 1 is plain recursive least squares)
  variable_forgetting,  ///< lambda1(t+1) = lambda0 lambda1(t) + 1 - lambda0, lambda2 = 1
};

GainProfile parse_profile(const std::string& name);
std::string to_string(GainProfile profile);

/// Default initial adaptation gain F(0) = GI * I.
inline constexpr double kDefaultInitialGain = 1000.0;

struct AdaptationState {
  Eigen::VectorXd theta;
  Eigen::MatrixXd F;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double lambda0 = 0.97;
  GainProfile profile = GainProfile::decreasing_gain;

  /// theta = theta0, F = gain * I.
  static AdaptationState make(const Eigen::VectorXd& theta0, double initial_gain = kDefaultInitialGain,
                              GainProfile profile = GainProfile::decreasing_gain, double lambda0 = 0.97,
                              double lambda1 = 0.97);
  std::size_t size() const { return static_cast<std::size_t>(theta.size()); }
  /// Throws InputError unless F is symmetric positive definite and the weights are admissible.
  void validate() const;
};

struct RlsStep {
  AdaptationState state;
  double eps_apriori = 0.0;
  double eps_aposteriori = 0.0;
};

/**
 * One parameter-adaptation step:
 *   eps0  = y - theta' phi
 *   eps   = eps0 / (1 + phi' F phi)
 *   theta += F phi eps
 *   F    <- (1/lambda1) [F - F phi phi' F / (lambda1/lambda2 + phi' F phi)]
 * followed by the forgetting-factor update of the active profile.
 */
RlsStep rls_step(const AdaptationState& state, std::span<const double> phi, double y);

struct RlsTrace {
  std::vector<Eigen::VectorXd> theta;  ///< estimate after each step
  std::vector<Eigen::MatrixXd> F;      ///< gain after each step
  std::vector<double> lambda1;         ///< forgetting factor after each step
  std::vector<double> eps_apriori;
  std::vector<double> eps_aposteriori;
  AdaptationState final;

  /// t, theta_1..theta_n, trace_F, eps_apriori, eps_aposteriori
  csv::Table to_table() const;
};

RlsTrace rls_run(std::span<const Regressor> regs, const AdaptationState& init);
RlsTrace rls_run(std::span<const double> u, std::span<const double> y, std::size_t na, std::size_t nb,
                 const AdaptationState& init);

/// Smallest eigenvalue of the symmetrized matrix.
double min_eigenvalue(const Eigen::MatrixXd& m);

/// Removes the sample mean; identification around an operating point.
std::vector<double> detrend(std::span<const double> x);

}  // namespace valvelab::ident
