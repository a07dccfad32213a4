#include <gtest/gtest.h>

#include <cmath>

#include "dpmod/error.hpp"
#include "dpmod/oracle.hpp"
#include "test_support.hpp"

namespace dpmod {
namespace {

using test::Rng;

TEST(BruteForce, SingleEdgeFree) {
  const MeshPtr m = build_mesh({{0.0}, {1.0}}, {{0, 1}});
  const MetricField id = MetricField::identity(m);
  const BruteForceResult r = brute_force_dp(0, 1, id, id, GaugeParams(id, 2.0, 10.0));
  EXPECT_NEAR(r.value, 1.0, 10 * r.pitch);
  EXPECT_LE(energy_p(r.point, id, 2.0), 1.0);
}

TEST(BruteForce, SingleEdgeCapped) {
  const MeshPtr m = build_mesh({{0.0}, {1.0}}, {{0, 1}});
  const MetricField id = MetricField::identity(m);
  const BruteForceResult r = brute_force_dp(0, 1, id, id, GaugeParams(id, 2.0, 0.3));
  EXPECT_NEAR(r.value, 0.3, r.pitch + 1e-12);
}

TEST(BruteForce, ScalingFactor) {
  const MeshPtr m = test::uniform_chain(3);
  const MetricField id = MetricField::identity(m);
  const double p = 3.0;
  const double base = brute_force_dp(0, 3, id, id, GaugeParams(id, p, 10.0)).value;
  const MetricField four = scale_metric(id, 2.0);
  const double scaled = brute_force_dp(0, 3, four, four, GaugeParams(four, p, 10.0)).value;
  EXPECT_NEAR(scaled / base, std::pow(2.0, (p - 1) / p), 1e-3);
}

TEST(BruteForce, Errors) {
  const MeshPtr big = test::uniform_chain(6);
  const MetricField id = MetricField::identity(big);
  try {
    (void)brute_force_dp(0, 6, id, id, GaugeParams(id, 2.0, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooManyVertices);
  }
  const MeshPtr m = test::uniform_chain(2);
  const MetricField small = MetricField::identity(m);
  EXPECT_THROW((void)brute_force_dp(1, 1, small, small, GaugeParams(small, 2.0, 1.0)), Error);
  EXPECT_THROW((void)brute_force_dp(0, 2, small, small, GaugeParams(small, 2.0, HUGE_VAL)), Error);
}

TEST(BruteForceProperty, MonotoneInDAndCapped) {
  Rng rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<double> lengths, a;
    for (int c = 0; c < 3; ++c) {
      lengths.push_back(test::uniform(rng, 0.2, 1.0));
      a.push_back(test::uniform(rng, 0.5, 3.0));
    }
    const MeshPtr m = test::chain(lengths);
    const MetricField g = test::density_metric(m, a);
    const MetricField g0 = MetricField::identity(m);
    // The true value is monotone and each lower bound is within two of its
    // own pitches of it.
    double last = 0.0;
    for (double D : {0.2, 0.5, 1.0, 3.0}) {
      const GaugeParams params(g0, 3.0, D);
      const BruteForceResult r = brute_force_dp(0, 3, g, g0, params);
      EXPECT_LE(r.value, D * params.holder_weight(0, 3));
      EXPECT_LE(holder_seminorm(r.point, params), D);
      EXPECT_LE(energy_p(r.point, g, 3.0), 1.0);
      EXPECT_GE(r.value, last - 2 * r.pitch);
      last = r.value;
    }
  }
}

TEST(Analytic1D, Examples) {
  const std::vector<double> one{1.0}, len{1.0}, two{2.0};
  EXPECT_NEAR(analytic_1d_dp(one, len, 2.0, HUGE_VAL, one).value, 1.0, 1e-15);
  EXPECT_NEAR(analytic_1d_dp(two, len, 4.0, HUGE_VAL, one).value, std::pow(2.0, 0.75), 1e-14);
  const Analytic1DResult capped = analytic_1d_dp(one, len, 2.0, 0.3, one);
  EXPECT_NEAR(capped.value, 0.3, 1e-15);
  EXPECT_TRUE(capped.cap_active);
  EXPECT_FALSE(capped.interior_binding);
}

TEST(Analytic1D, PiecewiseDensity) {
  const std::vector<double> a{1.0, 3.0}, len{0.5, 0.5}, a0{1.0, 1.0};
  for (double p : {2.0, 4.0, 8.0}) {
    EXPECT_NEAR(analytic_1d_dp(a, len, p, HUGE_VAL, a0).value, std::pow(2.0, (p - 1) / p), 1e-14);
  }
}

TEST(Analytic1D, MeshOverload) {
  const MeshPtr m = test::uniform_chain(8);
  const MetricField g = test::density_metric(m, std::vector<double>(8, 2.0));
  const MetricField g0 = MetricField::identity(m);
  EXPECT_NEAR(analytic_1d_dp(0, 8, g, g0, 3.0, HUGE_VAL).value, std::pow(2.0, 2.0 / 3), 1e-14);
  EXPECT_NEAR(analytic_1d_dp(2, 6, g, g0, 3.0, HUGE_VAL).value, std::pow(1.0, 2.0 / 3), 1e-14);
  const MeshPtr sq = test::unit_square();
  const MetricField id = MetricField::identity(sq);
  try {
    (void)analytic_1d_dp(0, 2, id, id, 3.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotOneDimensional);
  }
}

// The two oracles share no code; on every small chain they must agree to a
// couple of final pitches.
TEST(OracleAgreement, BruteForceMatchesClosedForm) {
  Rng rng(17);
  int compared = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int cells = test::uniform_int(rng, 1, 4);
    std::vector<double> lengths, a;
    for (int c = 0; c < cells; ++c) {
      lengths.push_back(test::uniform(rng, 0.3, 1.0));
      a.push_back(test::uniform(rng, 0.5, 2.5));
    }
    const double p = std::vector<double>{2, 3, 5}[static_cast<std::size_t>(trial % 3)];
    const MeshPtr m = test::chain(lengths);
    const MetricField g = test::density_metric(m, a);
    const MetricField g0 = MetricField::identity(m);
    const double D = test::uniform(rng, 0.3, 3.0);
    const Analytic1DResult exact = analytic_1d_dp(0, cells, g, g0, p, D);
    if (exact.interior_binding) continue;
    const BruteForceResult brute = brute_force_dp(0, cells, g, g0, GaugeParams(g0, p, D));
    EXPECT_NEAR(brute.value, exact.value, 2 * brute.pitch + 1e-12) << "trial " << trial;
    ++compared;
  }
  EXPECT_GE(compared, 10);
}

}  // namespace
}  // namespace dpmod
