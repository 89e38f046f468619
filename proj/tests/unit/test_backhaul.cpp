#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "uavsg/backhaul.hpp"

using namespace uavsg;

TEST(MmwaveBeamwidth, Examples) {
  EXPECT_THROW(mmwave_beamwidth(100, 100), BeamDomain);
  EXPECT_NEAR(mmwave_beamwidth(100, 1000), 0.19933, 1e-5);
  EXPECT_EQ(mmwave_beamwidth(0, 120), 0.0);
}

TEST(MmwaveBeamwidth, MonotoneInRadiusAndAltitude) {
  double prev = 0.0;
  for (double rh = 5; rh < 40; rh += 5) {
    const double t = mmwave_beamwidth(rh, 100);
    EXPECT_GT(t, prev);
    prev = t;
  }
  prev = kHalfPi;
  for (double h = 100; h < 1000; h += 50) {
    const double t = mmwave_beamwidth(30, h);
    EXPECT_LT(t, prev);
    prev = t;
  }
}

TEST(MainlobeGain, Examples) {
  EXPECT_NEAR(mainlobe_gain(kPi / 3), 6.0, 1e-12);
  EXPECT_GT(mainlobe_gain(1e-6), 1e6);
  EXPECT_NEAR(mainlobe_gain(0.19933), 31.52, 0.01);
  EXPECT_THROW(mainlobe_gain(0.0), BeamDomain);
  EXPECT_THROW(mainlobe_gain(kHalfPi), BeamDomain);
}

TEST(EffectiveFunction, Examples) {
  EXPECT_GT(effective_function(0.2, 1e-6), 1.0 - 1e-12);
  EXPECT_NEAR(effective_function(0.2, 0.1745), 0.4362, 1e-4);
  EXPECT_THROW(effective_function(2.0, 0.1), BeamDomain);
}

TEST(EffectiveFunction, EqualsIntegralOfErrorDensity) {
  for (double eps : {0.05, 0.1745, 0.5})
    for (double t : {0.05, 0.2, 0.8, 1.5}) {
      const double q = oracle::gk([&](double e) { return std::exp(-e / eps); }, 0.0, t / 2, 1e-14) /
                       oracle::gk([&](double e) { return std::exp(-e / eps); }, 0.0, kPi, 1e-14);
      EXPECT_NEAR(effective_function(t, eps), q, 1e-12) << eps << " " << t;
    }
}

TEST(EffectiveFunction, DensityNormalised) {
  for (double eps : {0.05, 0.1745, 0.5, 3.0}) {
    const double q = oracle::gk([&](double e) { return orientation_error_pdf(e, eps); }, 0.0, kPi, 1e-14);
    EXPECT_NEAR(q, 1.0, 1e-12);
  }
}

TEST(EffectiveFunction, BoundedAndMonotone) {
  for (double eps : {0.05, 0.1745, 0.5}) {
    double prev = 0.0;
    for (double t = 0.01; t < kHalfPi; t += 0.01) {
      const double f = effective_function(t, eps);
      EXPECT_GT(f, 0.0);
      EXPECT_LT(f, 1.0);
      EXPECT_GT(f, prev);
      EXPECT_LT(effective_function(t, eps * 1.1), f);
      prev = f;
    }
  }
}

TEST(BackhaulGainProduct, DecreasingInBeamwidth) {
  for (double eps : {0.05, 0.1745, 0.5}) {
    double prev = kInf;
    for (double t = 1e-3; t < kHalfPi; t += 1e-3) {
      const double v = mainlobe_gain(t) * effective_function(t, eps);
      EXPECT_LT(v, prev) << eps << " " << t;
      prev = v;
    }
  }
}

TEST(BackhaulCapacity, Examples) {
  BackhaulConfig b;
  EXPECT_TRUE(std::isinf(backhaul_capacity(b, 100, 1000, 1e-4)));
  b.c_t = 10;
  b.r_m = 500;
  const double cb = backhaul_capacity(b, 100, 1000, 1e-4);
  EXPECT_NEAR(backhaul_capacity(b, 100, 1000, 2e-4), cb / 2, 1e-12 * cb);
  const double t = 2 * std::atan(0.1);
  const double expect = (2 * kPi / t) * effective_function(t, b.eps_bar) * 10 / (1e-4 * kPi * 500 * 500);
  EXPECT_NEAR(cb, expect, 1e-12 * expect);
  EXPECT_NEAR(1e-4 * kPi * 500 * 500, 78.54, 0.01);
}

TEST(BackhaulCapacity, ZeroActiveDensityIsUnlimited) {
  BackhaulConfig b;
  b.c_t = 10;
  EXPECT_TRUE(std::isinf(backhaul_capacity(b, 50, 100, 0.0)));
}

TEST(BackhaulCapacity, ZeroHoverRadiusClampsBeam) {
  BackhaulConfig b;
  b.c_t = 10;
  const BackhaulState s = backhaul_state(b, 0.0, 100, 1e-4);
  EXPECT_EQ(s.theta_beam, kMinBeamwidth);
  EXPECT_TRUE(std::isfinite(s.c_b));
}

TEST(BackhaulCapacity, NonincreasingInHoverRadius) {
  BackhaulConfig b;
  b.c_t = 10;
  double prev = kInf;
  for (double rh = 0; rh <= 200; rh += 5) {
    const double c = backhaul_capacity(b, rh, 300, 5e-5);
    EXPECT_LE(c, prev);
    prev = c;
  }
}

TEST(BackhaulCapacity, UnlimitedSkipsBeamGeometry) {
  BackhaulConfig b;
  EXPECT_EQ(backhaul_capacity(b, 200.0, 100.0, 1e-4), kInf);
  b.c_t = 10.0;
  EXPECT_THROW(backhaul_capacity(b, 200.0, 100.0, 1e-4), BeamDomain);
}
