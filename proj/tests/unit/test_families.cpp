#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "dpmod/error.hpp"
#include "dpmod/families.hpp"
#include "dpmod/geodesic.hpp"

namespace dpmod {
namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

TEST(MakeFlat, Examples) {
  const Domain line = make_flat(1, 64, false);
  EXPECT_EQ(line.mesh->num_cells(), 64);
  EXPECT_NEAR(line.metric.volume(), 1.0, 1e-12);

  const Domain torus = make_flat(2, 8, true);
  EXPECT_EQ(torus.mesh->num_cells(), 128);
  EXPECT_EQ(torus.mesh->num_vertices(), 64);
  EXPECT_NEAR(torus.metric.volume(), 1.0, 1e-12);

  const Domain box = make_flat(2, 8, false);
  EXPECT_GE(diameter(all_pairs_distances(box.metric)), std::sqrt(2.0) - 1e-12);

  const Domain cube = make_flat(3, 3, true);
  EXPECT_EQ(cube.mesh->num_cells(), 6 * 27);
  EXPECT_NEAR(cube.metric.volume(), 1.0, 1e-12);
}

TEST(MakeFlat, Errors) {
  EXPECT_EQ(code_of([] { make_flat(4, 4, true); }), ErrorCode::BadDimension);
  EXPECT_EQ(code_of([] { make_flat(0, 4, true); }), ErrorCode::BadDimension);
  EXPECT_EQ(code_of([] { make_flat(2, 1, true); }), ErrorCode::BadConfig);
}

TEST(Spike, ZeroAmplitudeIsIdentity) {
  const Domain d = make_flat(2, 8, true);
  const MetricField g = make_spike(d, {0.0, 0.25, {}, SpikeProfile::Point});
  for (int c = 0; c < g.num_cells(); ++c) EXPECT_EQ(g[c], d.metric[c]);
  EXPECT_EQ(hypothesis_functionals(g, d.metric, 7).I_inv, 0.0);
}

TEST(Spike, FirstMemberHasFiniteInverseIntegral) {
  const Domain d = make_flat(2, 8, true);
  const MetricField g = make_spike(d, {1.0, 0.25, {}, SpikeProfile::Point});
  const HypothesisReport r = hypothesis_functionals(g, d.metric, 7);
  EXPECT_GT(r.I_inv, 0.0);
  EXPECT_TRUE(std::isfinite(r.I_inv));
  // The spike only ever stretches the metric.
  for (int c = 0; c < g.num_cells(); ++c) EXPECT_GE(g[c](0, 0), 1.0);
}

TEST(Spike, Errors) {
  const Domain d = make_flat(2, 4, true);
  EXPECT_EQ(code_of([&] { make_spike(d, {-1.0, 0.25, {}, SpikeProfile::Point}); }), ErrorCode::BadSchedule);
  EXPECT_EQ(code_of([&] { make_spike(d, {1.0, 0.0, {}, SpikeProfile::Point}); }), ErrorCode::BadSchedule);
  EXPECT_EQ(code_of([&] { make_spike(d, {1.0, 0.5, {}, SpikeProfile::Point}); }), ErrorCode::BadSchedule);
  EXPECT_EQ(code_of([&] { make_spike(d, {1.0, 0.2, {0.5}, SpikeProfile::Point}); }), ErrorCode::BadSchedule);
  EXPECT_EQ(code_of([&] { make_spike_sequence(d, SpikeSchedule::defaults(2), 0, 7.0); }), ErrorCode::BadSchedule);
}

TEST(SpikeSchedule, DefaultShapes) {
  const SpikeSchedule s = SpikeSchedule::defaults(2);
  const SpikeShape first = s.shape(1);
  const SpikeShape third = s.shape(3);
  EXPECT_DOUBLE_EQ(third.amplitude, 3 * first.amplitude);
  EXPECT_LT(third.radius, first.radius);
  EXPECT_EQ(SpikeSchedule::defaults(3).profile, SpikeProfile::Tube);
}

// The default schedule must make I_inv strictly decrease along j = 1..8.
TEST(SpikeSchedule, DefaultInverseIntegralDecreases) {
  for (int n : {1, 2}) {
    const Domain d = make_flat(n, n == 1 ? 64 : 8, true);
    const double p = 3 * n + 1;
    double last = HUGE_VAL;
    for (int j = 1; j <= 8; ++j) {
      const SequenceMember m = make_spike_sequence(d, SpikeSchedule::defaults(n), j, p);
      EXPECT_LT(m.report.I_inv, last) << "n = " << n << ", j = " << j;
      EXPECT_EQ(m.j, j);
      last = m.report.I_inv;
    }
  }
}

TEST(SpikeSchedule, TubeProfileNeverIncreases) {
  const Domain d = make_flat(3, 4, true);
  double last = HUGE_VAL;
  for (int j = 1; j <= 8; ++j) {
    const SequenceMember m = make_spike_sequence(d, SpikeSchedule::defaults(3), j, 10.0);
    EXPECT_LE(m.report.I_inv, last) << "j = " << j;
    last = m.report.I_inv;
  }
}

TEST(Conformal, Examples) {
  const Domain d = make_flat(2, 4, true);
  const MetricField same = make_conformal_constant(d.metric, 1.0);
  for (int c = 0; c < same.num_cells(); ++c) EXPECT_EQ(same[c], d.metric[c]);
  EXPECT_NEAR(make_conformal_constant(d.metric, 3.0).volume(), 9.0, 1e-12);
  EXPECT_EQ(code_of([&] { make_conformal_constant(d.metric, 0.0); }), ErrorCode::NonpositiveScale);
}

TEST(ScaledPair, Examples) {
  const Domain d = make_flat(2, 4, false);
  auto [g3, g03] = make_scaled_pair(d.metric, d.metric, 3.0);
  EXPECT_NEAR(g3.volume(), 9.0, 1e-12);
  EXPECT_NEAR(g03.volume(), 9.0, 1e-12);

  auto [g2, g02] = make_scaled_pair(d.metric, d.metric, 2.0);
  const DistanceMatrix base = all_pairs_distances(d.metric);
  const DistanceMatrix doubled = all_pairs_distances(g2);
  for (std::size_t k = 0; k < base.values().size(); ++k) EXPECT_EQ(doubled.values()[k], 2 * base.values()[k]);
  EXPECT_EQ(code_of([&] { make_scaled_pair(d.metric, d.metric, -2.0); }), ErrorCode::NonpositiveScale);
}

TEST(Oscillation, TwoByTwoTorus) {
  const Domain d = make_flat(2, 2, true);
  const MetricField g = make_oscillation(d, 1);
  std::map<double, int> counts;
  for (int c = 0; c < g.num_cells(); ++c) {
    EXPECT_EQ(g[c](0, 1), 0.0);
    EXPECT_EQ(g[c](0, 0), g[c](1, 1));
    ++counts[g[c](0, 0)];
  }
  ASSERT_EQ(counts.size(), 2u);
  EXPECT_EQ(counts[0.25], 4);  // two grid squares of two triangles each
  EXPECT_EQ(counts[4.0], 4);
}

TEST(Oscillation, InverseIntegralIndependentOfJ) {
  const Domain d = make_flat(2, 8, true);
  const double first = make_oscillation_sequence(d, 1, 7).report.I_inv;
  EXPECT_GT(first, 1.0);
  for (int j = 2; j <= 8; ++j) {
    EXPECT_NEAR(make_oscillation_sequence(d, j, 7).report.I_inv, first, 1e-9 * first) << "j = " << j;
  }
  EXPECT_EQ(code_of([&] { make_oscillation(d, 0); }), ErrorCode::BadSchedule);
}

TEST(CornerPairs, Layout) {
  const Domain line = make_flat(1, 16, false);
  const auto p1 = corner_pairs(line);
  ASSERT_EQ(p1.size(), 1u);
  EXPECT_EQ(line.mesh->position(p1[0].first)[0], 0.0);
  EXPECT_EQ(line.mesh->position(p1[0].second)[0], 1.0);

  const Domain torus = make_flat(2, 8, true);
  const auto p2 = corner_pairs(torus);
  ASSERT_EQ(p2.size(), 4u);
  const Vector a = torus.mesh->position(p2[0].first);
  const Vector b = torus.mesh->position(p2[0].second);
  EXPECT_DOUBLE_EQ(a[0], 0.25);
  EXPECT_DOUBLE_EQ(b[1], 0.75);

  EXPECT_EQ(corner_pairs(make_flat(3, 4, true)).size(), 4u);
}

TEST(Generate, EveryFamily) {
  FamilySpec spec;
  spec.resolution = 4;
  for (const char* name : {"flat", "conformal-constant", "spike", "oscillation", "scaled"}) {
    spec.family = name;
    spec.conformal = 2.0;
    spec.lambda = 3.0;
    const Generated gen = generate(spec);
    EXPECT_EQ(gen.g.mesh(), gen.domain.mesh) << name;
    EXPECT_EQ(gen.g0.mesh(), gen.domain.mesh) << name;
  }
  spec.family = "scaled";
  EXPECT_NEAR(generate(spec).g0.volume(), 9.0, 1e-12);
  spec.family = "bogus";
  EXPECT_EQ(code_of([&] { generate(spec); }), ErrorCode::BadConfig);
}

}  // namespace
}  // namespace dpmod
