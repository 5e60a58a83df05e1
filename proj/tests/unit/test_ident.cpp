#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "valvelab/error.hpp"
#include "valvelab/ident.hpp"
#include "valvelab/signals.hpp"

using namespace valvelab;
using ident::AdaptationState;
using ident::GainProfile;

namespace {

std::vector<double> excitation(std::size_t n, int divider = 1) {
  signals::PrbsConfig c;
  c.divider = divider;
  c.offset = 0.0;
  c.amplitude = 10.0;
  return signals::prbs_excitation(c, n);
}

Eigen::VectorXd qr_fit(const std::vector<ident::Regressor>& regs) {
  Eigen::MatrixXd phi(static_cast<Eigen::Index>(regs.size()), static_cast<Eigen::Index>(regs[0].phi.size()));
  Eigen::VectorXd y(static_cast<Eigen::Index>(regs.size()));
  for (std::size_t k = 0; k < regs.size(); ++k) {
    for (std::size_t i = 0; i < regs[k].phi.size(); ++i)
      phi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = regs[k].phi[i];
    y(static_cast<Eigen::Index>(k)) = regs[k].y;
  }
  return phi.colPivHouseholderQr().solve(y);
}

}  // namespace

TEST(Regressors, Layout) {
  const std::vector<double> u{1, 2, 3, 4, 5};
  const std::vector<double> y{10, 20, 30, 40, 50};
  const auto regs = ident::build_regressors(u, y, 2, 1);
  ASSERT_EQ(regs.size(), 3u);
  EXPECT_EQ(regs[0].phi, (std::vector<double>{-20, -10, 2}));
  EXPECT_EQ(regs[0].y, 30.0);
  EXPECT_EQ(regs[2].phi, (std::vector<double>{-40, -30, 4}));
  EXPECT_THROW(ident::build_regressors(u, y, 2, 1, 1), InputError);
  EXPECT_THROW(ident::build_regressors(u, std::vector<double>(4), 1, 1), InputError);
}

TEST(BatchLeastSquares, RecoversNoiselessSecondOrderPlant) {
  const auto u = excitation(400);
  const auto y = oracle::arx_simulate({-1.2, 0.5}, {0.3, 0.1}, u);
  const auto fit = ident::batch_least_squares(ident::build_regressors(u, y, 2, 2));
  const Eigen::Vector4d truth(-1.2, 0.5, 0.3, 0.1);
  EXPECT_LT((fit.theta - truth).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(fit.criterion, 1e-20);
  EXPECT_GT(fit.condition, 1.0);
}

TEST(BatchLeastSquares, MatchesQrOnNoisyData) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.3);
  const auto u = excitation(300);
  auto y = oracle::arx_simulate({-0.9}, {-0.06}, u);
  for (double& v : y) v += noise(rng);
  const auto regs = ident::build_regressors(u, y, 2, 2);
  const auto fit = ident::batch_least_squares(regs);
  EXPECT_LT((fit.theta - qr_fit(regs)).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(fit.criterion, ident::criterion(regs, fit.theta), 1e-15);
  EXPECT_GT(ident::criterion(regs, fit.theta + Eigen::Vector4d::Constant(1e-3)), fit.criterion);
}

TEST(BatchLeastSquares, RejectsUninformativeData) {
  const std::vector<double> u(100, 1.0);
  const std::vector<double> y(100, 0.0);
  EXPECT_THROW(ident::batch_least_squares(ident::build_regressors(u, y, 1, 2)), IdentifiabilityError);
  EXPECT_THROW(ident::batch_least_squares({}), IdentifiabilityError);
}

TEST(OrderScan, TrueOrderReachesFloor) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 0.01);
  const auto u = excitation(500, 2);
  auto y = oracle::arx_simulate({-1.2, 0.5}, {0.3, 0.1}, u);
  for (double& v : y) v += noise(rng);
  const std::vector<std::size_t> orders{1, 2, 3};
  const auto scan = ident::order_scan(u, y, orders, orders);
  EXPECT_EQ(scan.start, 3u);
  EXPECT_LT(scan.normalized(2, 2), 1e-2);
  EXPECT_LT(scan.at(2, 2), 0.1 * scan.at(2, 1));
  EXPECT_LE(scan.at(3, 3), scan.at(2, 2));
  EXPECT_GT(scan.at(1, 1), scan.at(2, 1));
  EXPECT_NEAR(scan.normalized(1, 1), 1.0, 0.0);
  EXPECT_EQ(scan.to_table().rows.size(), 9u);
  EXPECT_THROW(scan.at(4, 1), InputError);
}

TEST(Profiles, Names) {
  for (auto p : {GainProfile::constant_gain, GainProfile::decreasing_gain, GainProfile::variable_forgetting})
    EXPECT_EQ(ident::parse_profile(ident::to_string(p)), p);
  EXPECT_THROW(ident::parse_profile("fast"), ConfigError);
}

TEST(Rls, StepMatchesHandComputation) {
  auto s = AdaptationState::make(Eigen::Vector2d(0.5, -1.0), 2.0);
  const std::vector<double> phi{1.0, 2.0};
  const auto step = ident::rls_step(s, phi, 3.0);
  // eps0 = 3 - (0.5 - 2) = 4.5, phi'F phi = 10
  EXPECT_DOUBLE_EQ(step.eps_apriori, 4.5);
  EXPECT_DOUBLE_EQ(step.eps_aposteriori, 4.5 / 11.0);
  EXPECT_NEAR(step.state.theta(0), 0.5 + 2.0 * 4.5 / 11.0, 1e-15);
  EXPECT_NEAR(step.state.theta(1), -1.0 + 4.0 * 4.5 / 11.0, 1e-15);
  // F - F phi phi' F / (1 + 10)
  EXPECT_NEAR(step.state.F(0, 0), 2.0 - 4.0 / 11.0, 1e-15);
  EXPECT_NEAR(step.state.F(0, 1), -8.0 / 11.0, 1e-15);
  EXPECT_NEAR(step.state.F(1, 1), 2.0 - 16.0 / 11.0, 1e-15);
  // a posteriori error evaluated with the new estimate
  EXPECT_NEAR(3.0 - step.state.theta.dot(Eigen::Vector2d(1.0, 2.0)), step.eps_aposteriori, 1e-14);
}

TEST(Rls, ConstantGainKeepsF) {
  auto s = AdaptationState::make(Eigen::Vector2d::Zero(), 0.01, GainProfile::constant_gain);
  const std::vector<double> phi{1.0, -1.0};
  const auto step = ident::rls_step(s, phi, 1.0);
  EXPECT_EQ(step.state.F, s.F);
  EXPECT_EQ(step.state.lambda1, 1.0);
}

TEST(Rls, DecreasingGainEqualsBatch) {
  const auto u = excitation(500);
  const auto y = oracle::arx_simulate({-0.9152}, {-0.0609}, u);
  const auto regs = ident::build_regressors(u, y, 1, 1);
  const auto trace = ident::rls_run(regs, AdaptationState::make(Eigen::Vector2d::Zero(), 1e6));
  const auto batch = ident::batch_least_squares(regs);
  EXPECT_LT((trace.final.theta - batch.theta).cwiseAbs().maxCoeff(), 1e-6);
  for (const auto& F : trace.F) {
    EXPECT_EQ(F, F.transpose());
    EXPECT_GT(ident::min_eigenvalue(F), 0.0);
  }
}

TEST(Rls, VariableForgettingSequence) {
  auto s = AdaptationState::make(Eigen::Vector2d::Zero(), 100.0, GainProfile::variable_forgetting, 0.97, 0.97);
  const auto u = excitation(600);
  const auto y = oracle::arx_simulate({-0.9}, {0.1}, u);
  const auto trace = ident::rls_run(u, y, 1, 1, s);
  EXPECT_NEAR(trace.lambda1[0], 0.9709, 1e-12);
  for (std::size_t t = 0; t < trace.lambda1.size(); ++t) {
    const double closed = 1.0 - std::pow(0.97, static_cast<double>(t + 1)) * 0.03;
    EXPECT_NEAR(trace.lambda1[t], closed, 1e-14);
    if (t) EXPECT_GE(trace.lambda1[t], trace.lambda1[t - 1]);
  }
  EXPECT_LT(1.0 - trace.lambda1[498], 1e-6);
}

TEST(Rls, ForgettingTracksParameterJump) {
  // after a jump, forgetting must shrink the error faster than plain least squares
  auto u = excitation(3000);
  auto y1 = oracle::arx_simulate({-0.9}, {0.1}, u);
  auto y2 = oracle::arx_simulate({-0.8}, {0.2}, u);
  std::vector<double> y(y1.begin(), y1.begin() + 1000);
  y.insert(y.end(), y2.begin() + 1000, y2.end());
  auto error = [&](GainProfile p, double l1) {
    auto s = AdaptationState::make(Eigen::Vector2d::Zero(), 1000.0, p, 0.97, l1);
    if (p == GainProfile::decreasing_gain) s.lambda1 = l1;
    const auto trace = ident::rls_run(u, y, 1, 1, s);
    return (trace.theta[1400] - Eigen::Vector2d(-0.8, 0.2)).norm();
  };
  EXPECT_LT(error(GainProfile::decreasing_gain, 0.98), 1e-3);
  EXPECT_GT(error(GainProfile::decreasing_gain, 1.0), 1e-3);
}

TEST(AdaptationStateTest, Validation) {
  EXPECT_THROW(AdaptationState::make(Eigen::Vector2d::Zero(), 0.0), InputError);
  auto s = AdaptationState::make(Eigen::Vector2d::Zero());
  s.F(0, 1) = 5.0;
  EXPECT_THROW(s.validate(), InputError);
  s = AdaptationState::make(Eigen::Vector2d::Zero());
  s.lambda1 = 1.5;
  EXPECT_THROW(s.validate(), InputError);
  s = AdaptationState::make(Eigen::Vector2d::Zero());
  const std::vector<double> bad{std::nan(""), 1.0};
  EXPECT_THROW(ident::rls_step(s, bad, 1.0), NumericError);
}

TEST(Detrend, RemovesMean) {
  const std::vector<double> x{1, 2, 3, 6};
  EXPECT_EQ(ident::detrend(x), (std::vector<double>{-2, -1, 0, 3}));
}
