#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "stats.hpp"
#include "uavsg/analytic.hpp"
#include "uavsg/montecarlo.hpp"

using namespace uavsg;

namespace {

NetworkConfig base(double lambda_per_km2, double rh) {
  NetworkConfig c;
  c.lambda_uav = lambda_per_km2 / 1e6;
  c.lambda_gu = 1e-2;
  c.hover_radius = rh;
  c.seed = 17;
  return c;
}

std::vector<TrialOutcome> outcomes(const NetworkConfig& c, AssociationRule rule, AntennaMode mode, long long n) {
  const TrialContext ctx(c, mode);
  std::vector<TrialOutcome> out(static_cast<std::size_t>(n));
  run_trials(ctx, rule, n, McOptions{1}, [&](long long t, const TrialOutcome& o) { out[static_cast<std::size_t>(t)] = o; });
  return out;
}

}  // namespace

TEST(TrialRng, DistinctStreamsPerTrial) {
  Rng a = trial_rng(1, 0), b = trial_rng(1, 1), c = trial_rng(2, 0), a2 = trial_rng(1, 0);
  const auto x = a();
  EXPECT_NE(x, b());
  EXPECT_NE(x, c());
  EXPECT_EQ(x, a2());
}

TEST(RunTrial, LoneUavCoveredExactlyWhenInsideProjection) {
  NetworkConfig c = base(0.1, 0);
  c.half_beamwidth = kPi / 6;
  c.sim_region_radius = 200.0;
  const auto v = outcomes(c, AssociationRule::rtna, AntennaMode::directional, 20000);
  long long inside = 0;
  for (const auto& o : v) {
    if (o.active_count == 1) EXPECT_EQ(o.covered, o.in_projection);
    inside += o.in_projection;
  }
  // A single UAV uniform on the 200 m disk lands within R_p = dh tan(pi/6).
  const double expect = (100.0 * 100.0 + 400.0 / 12.0) / 3.0 / (200.0 * 200.0);
  const double se = std::sqrt(expect * (1 - expect) / 20000.0);
  EXPECT_NEAR(static_cast<double>(inside) / 20000.0, expect, 4 * se + 0.002);
}

TEST(RunTrial, CoveredImpliesInProjection) {
  NetworkConfig c = base(40, 50);
  c.half_beamwidth = kPi / 6;
  for (auto rule : {AssociationRule::rtna, AssociationRule::semi}) {
    long long covered = 0;
    for (const auto& o : outcomes(c, rule, AntennaMode::directional, 3000)) {
      if (o.covered) EXPECT_TRUE(o.in_projection);
      if (o.covered) EXPECT_GT(o.sir, c.tau);
      covered += o.covered;
    }
    EXPECT_GT(covered, 0);
  }
}

TEST(Estimate, HugeThresholdNeverCovers) {
  NetworkConfig c = base(20, 0);
  c.tau = 1e300;
  const auto e = estimate(c, AssociationRule::rtna, AntennaMode::omni, 200);
  EXPECT_EQ(e.cp.value, 0.0);
  EXPECT_EQ(e.st.value, 0.0);
}

TEST(Estimate, TinyThresholdAlwaysCoversOmni) {
  NetworkConfig c = base(20, 50);
  c.tau = 1e-300;
  for (auto rule : {AssociationRule::rtna, AssociationRule::semi})
    EXPECT_EQ(estimate(c, rule, AntennaMode::omni, 100).cp.value, 1.0);
}

TEST(Estimate, RejectsTooFewTrials) {
  EXPECT_THROW(estimate(base(20, 0), AssociationRule::rtna, AntennaMode::omni, 99), ValidationError);
}

TEST(Estimate, DeterministicForSeed) {
  const NetworkConfig c = base(20, 50);
  const auto a = estimate(c, AssociationRule::semi, AntennaMode::omni, 600, McOptions{1});
  const auto b = estimate(c, AssociationRule::semi, AntennaMode::omni, 600, McOptions{1});
  EXPECT_EQ(a.cp.value, b.cp.value);
  EXPECT_EQ(a.q_a_hat.value, b.q_a_hat.value);
  NetworkConfig d = c;
  d.seed = 18;
  const auto x = outcomes(c, AssociationRule::semi, AntennaMode::omni, 5);
  const auto y = outcomes(d, AssociationRule::semi, AntennaMode::omni, 5);
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NE(x[k].serving_distance, y[k].serving_distance);
}

TEST(Estimate, IndependentOfThreadCount) {
  const NetworkConfig c = base(20, 50);
  const auto a = estimate(c, AssociationRule::rtna, AntennaMode::omni, 5000, McOptions{1});
  const auto b = estimate(c, AssociationRule::rtna, AntennaMode::omni, 5000, McOptions{3});
  EXPECT_EQ(a.cp.value, b.cp.value);
  EXPECT_EQ(a.cp.std_error, b.cp.std_error);
  EXPECT_EQ(a.q_a_hat.value, b.q_a_hat.value);
  EXPECT_EQ(a.q_a_hat.std_error, b.q_a_hat.std_error);
  EXPECT_EQ(a.st.value, b.st.value);
}

TEST(RunTrial, ServingDistanceFollowsNearestNeighbourLaw) {
  const NetworkConfig c = base(20, 100);
  const double lam = c.lambda_uav;
  for (auto rule : {AssociationRule::rtna, AssociationRule::semi}) {
    std::vector<double> r;
    for (const auto& o : outcomes(c, rule, AntennaMode::omni, 2000)) r.push_back(o.serving_distance);
    const double d = stats::ks_statistic(r, [&](double x) { return 1.0 - std::exp(-kPi * lam * x * x); });
    EXPECT_LT(d, stats::ks_critical_1pct(r.size())) << to_string(rule);
  }
}

TEST(Estimate, ActivationMatchesClosedForm) {
  for (double eta : {0.1, 0.5, 1.0, 2.0}) {
    NetworkConfig c = base(100, 0);
    c.lambda_gu = c.lambda_uav / eta;
    const auto e = estimate(c, AssociationRule::rtna, AntennaMode::omni, 500, McOptions{1});
    EXPECT_NEAR(e.q_a_hat.value, activation_probability(eta), 0.03) << eta;
  }
}

TEST(Estimate, RtnaOmniIgnoresHoverRadius) {
  const auto a = estimate(base(20, 0), AssociationRule::rtna, AntennaMode::omni, 20000);
  const auto b = estimate(base(20, 150), AssociationRule::rtna, AntennaMode::omni, 20000);
  EXPECT_NEAR(a.cp.value, b.cp.value, 4.0 * std::hypot(a.cp.std_error, b.cp.std_error));
}

TEST(ApplyBackhaul, RescoresThroughput) {
  NetworkConfig c = base(20, 50);
  auto e = estimate(c, AssociationRule::semi, AntennaMode::omni, 1000);
  const double unlimited = e.st.value;
  EXPECT_NEAR(unlimited, e.lambda_active_hat * e.cp.value, 1e-18);
  c.backhaul.c_t = 1e-3;
  apply_backhaul(e, c);
  EXPECT_LT(e.c_b, 1.0);
  EXPECT_NEAR(e.st.value, e.lambda_active_hat * e.cp.value * e.c_b, 1e-18);
  EXPECT_LT(e.st.value, unlimited);
}

TEST(TrialContext, FarFieldTableMatchesQuadrature) {
  const TrialContext ctx(base(60, 50), AntennaMode::omni);
  for (double dh : {90.0, 97.3, 110.0}) EXPECT_NEAR(ctx.far_field(dh) / ctx.far_field_exact(dh), 1.0, 1e-4);
  const TrialContext d([] {
    NetworkConfig c = base(60, 50);
    c.half_beamwidth = kPi / 6;
    return c;
  }(), AntennaMode::directional);
  EXPECT_EQ(d.far_field(100.0), 0.0);
}
