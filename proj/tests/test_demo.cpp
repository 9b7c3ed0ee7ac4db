#include <gtest/gtest.h>

#include <cmath>

#include "persplab/demo.hpp"
#include "persplab/errors.hpp"
#include "persplab/matching.hpp"
#include "support.hpp"

namespace persplab {
namespace {

Perspective axis(int k, int i) {
  Matrix m = Matrix::Zero(1, k);
  m(0, i) = 1.0;
  return {m, "axis", PerspectiveKind::basis};
}

struct ExpertFixture {
  GridWorldInstance world = testing::make_world(21);
  Policy expert = Policy::uniform(1, 1);
  Vector psi;

  ExpertFixture() {
    const OptimalPlan plan = solve_optimal_policy(world.mdp, world.reward_vector());
    expert = extract_policy(plan.occupancy, world.mdp.n_actions());
    psi = world.features.expectations(occupancy_of_policy(world.mdp, expert));
  }
};

TEST(Rollout, LengthsAndValidIndices) {
  const GridWorldInstance world = testing::make_world(1);
  Rng rng = make_stream(1, Stream::demonstrations);
  const Demonstration d = rollout(world.mdp, Policy::uniform(100, 4), 30, rng);
  EXPECT_EQ(d.horizon, 30);
  ASSERT_EQ(d.states.size(), 30u);
  ASSERT_EQ(d.actions.size(), 30u);
  for (int t = 0; t < 30; ++t) {
    EXPECT_GE(d.states[t], 0);
    EXPECT_LT(d.states[t], 100);
    EXPECT_GE(d.actions[t], 0);
    EXPECT_LT(d.actions[t], 4);
    if (t > 0) {
      EXPECT_GT(world.mdp.transition(d.states[t - 1], d.actions[t - 1], d.states[t]), 0.0);
    }
  }
  EXPECT_GT(world.mdp.initial_dist()[d.states[0]], 0.0);
}

TEST(Rollout, DeterministicUnderSeed) {
  const GridWorldInstance world = testing::make_world(1);
  Rng a = make_stream(8, Stream::demonstrations);
  Rng b = make_stream(8, Stream::demonstrations);
  const Demonstration x = rollout(world.mdp, Policy::uniform(100, 4), 30, a);
  const Demonstration y = rollout(world.mdp, Policy::uniform(100, 4), 30, b);
  EXPECT_EQ(x.states, y.states);
  EXPECT_EQ(x.actions, y.actions);
}

TEST(Rollout, RejectsBadHorizonAndShape) {
  const GridWorldInstance world = testing::make_world(1);
  Rng rng = make_stream(1, Stream::demonstrations);
  EXPECT_THROW(rollout(world.mdp, Policy::uniform(100, 4), 0, rng), InvalidParam);
  EXPECT_THROW(rollout(world.mdp, Policy::uniform(99, 4), 5, rng), DimensionMismatch);
}

TEST(DiscountedFeatures, LongHorizonSingleStateApproachesGeometricLimit) {
  const TabularMdp mdp = testing::single_state_mdp(0.3);
  const FeatureMap f{Matrix::Ones(1, 1)};
  Rng rng = make_stream(1, Stream::demonstrations);
  const FeatureSample s = sample_demonstration(mdp, Policy::uniform(1, 1), f, 200, rng);
  EXPECT_NEAR(s.psi[0], 1.0 / 0.7, 1e-14);
}

TEST(DiscountedFeatures, HorizonOneIsFirstFeatureColumn) {
  const GridWorldInstance world = testing::make_world(2);
  Rng a = make_stream(2, Stream::demonstrations);
  Rng b = make_stream(2, Stream::demonstrations);
  const Policy pi = Policy::uniform(100, 4);
  const Demonstration d = rollout(world.mdp, pi, 1, a);
  const FeatureSample s = sample_demonstration(world.mdp, pi, world.features, 1, b);
  EXPECT_EQ(s.psi, Vector(world.features.column(world.mdp.pair_index(d.states[0], d.actions[0]))));
}

TEST(DiscountedFeatures, SupNormBoundedByTruncatedGeometricSum) {
  const GridWorldInstance world = testing::make_world(3);
  Rng rng = make_stream(3, Stream::demonstrations);
  const double gamma = world.mdp.discount();
  const double bound = (1.0 - std::pow(gamma, 30)) / (1.0 - gamma);
  for (int i = 0; i < 200; ++i) {
    const FeatureSample s =
        sample_demonstration(world.mdp, Policy::uniform(100, 4), world.features, 30, rng);
    EXPECT_LE(s.psi.lpNorm<Eigen::Infinity>(), bound + 1e-15);
    EXPECT_GE(s.psi.minCoeff(), 0.0);
  }
}

TEST(DiscountedFeatures, SampleMeanMatchesOccupancyExpectation) {
  ExpertFixture fx;
  Rng rng = make_stream(4, Stream::demonstrations);
  const int n = 10000;
  const int k = fx.world.features.feature_dim();
  Vector sum = Vector::Zero(k), sum_sq = Vector::Zero(k);
  for (int i = 0; i < n; ++i) {
    const Vector psi =
        sample_demonstration(fx.world.mdp, fx.expert, fx.world.features, 30, rng).psi;
    sum += psi;
    sum_sq += psi.cwiseProduct(psi);
  }
  const Vector mean = sum / n;
  for (int j = 0; j < k; ++j) {
    const double var = (sum_sq[j] / n - mean[j] * mean[j]) * n / (n - 1.0);
    const double se = std::sqrt(std::max(var, 0.0) / n);
    EXPECT_LE(std::abs(mean[j] - fx.psi[j]), 3.0 * se + 1e-12) << "coordinate " << j;
  }
}

TEST(DiscountedFeatures, TruncationBiasIsNegligible) {
  const GridWorldInstance world = testing::make_world(4);
  const Policy pi = Policy::uniform(100, 4);
  for (std::uint64_t i = 0; i < 50; ++i) {
    Rng a = make_stream(i, Stream::demonstrations);
    Rng b = make_stream(i, Stream::demonstrations);
    // Same prefix; the longer rollout only adds the discounted tail.
    const Vector short_psi = sample_demonstration(world.mdp, pi, world.features, 30, a).psi;
    const Vector long_psi = sample_demonstration(world.mdp, pi, world.features, 90, b).psi;
    EXPECT_LE((long_psi - short_psi).lpNorm<Eigen::Infinity>(), 1e-15);
  }
}

TEST(Observe, SelectsCoordinate) {
  Vector psi(4);
  psi << 0.1, 0.5, 0.0, 0.0;
  const Vector o = observe(FeatureSample{psi}, axis(4, 1));
  ASSERT_EQ(o.size(), 1);
  EXPECT_EQ(o[0], 0.5);
}

TEST(Observe, ZeroAndIdentity) {
  EXPECT_TRUE(observe(FeatureSample{Vector::Zero(4)}, axis(4, 2)).isZero(0.0));
  Vector psi(4);
  psi << 0.3, 0.1, 0.4, 0.2;
  const Perspective id{Matrix::Identity(4, 4), "id", PerspectiveKind::basis};
  EXPECT_EQ(observe(FeatureSample{psi}, id), psi);
}

TEST(Observe, RejectsWrongWidth) {
  EXPECT_THROW(observe(FeatureSample{Vector::Zero(3)}, axis(4, 0)), DimensionMismatch);
}

TEST(Observe, NoisyObservationHasRequestedSpread) {
  Rng rng = make_stream(5, Stream::noise);
  const Vector psi = Vector::Constant(4, 0.25);
  const int n = 20000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double o = observe_noisy(psi, axis(4, 3), 0.1, rng)[0];
    sum += o;
    sum_sq += o * o;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum_sq / n - mean * mean);
  EXPECT_NEAR(mean, 0.25, 3.0 * 0.1 / std::sqrt(n));
  EXPECT_NEAR(sd, 0.1, 0.003);
  EXPECT_EQ(observe_noisy(psi, axis(4, 3), 0.0, rng)[0], 0.25);
}

TEST(ObservationStore, RunningMean) {
  ObservationStore store(std::vector<int>{1});
  EXPECT_EQ(store.count(0), 0);
  EXPECT_THROW(store.mean(0), NoObservations);
  store.record(0, Vector::Constant(1, 2.0));
  EXPECT_EQ(store.count(0), 1);
  EXPECT_EQ(store.mean(0)[0], 2.0);

  ObservationStore two(std::vector<int>{1});
  two.record(0, Vector::Constant(1, 1.0));
  two.record(0, Vector::Constant(1, 3.0));
  EXPECT_EQ(two.count(0), 2);
  EXPECT_DOUBLE_EQ(two.mean(0)[0], 2.0);
}

TEST(ObservationStore, RejectsUnknownIdAndWrongLength) {
  ObservationStore store(basis_perspectives(4, 0));
  EXPECT_EQ(store.size(), 4);
  EXPECT_THROW(store.record(4, Vector::Zero(1)), InvalidParam);
  EXPECT_THROW(store.record(0, Vector::Zero(2)), DimensionMismatch);
}

TEST(ObservationStore, MeanOfManyDemonstrationsConverges) {
  ExpertFixture fx;
  const Perspective p = axis(4, 0);
  ObservationStore store(PerspectiveSet{p});
  Rng rng = make_stream(6, Stream::demonstrations);
  const int n = 1000;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vector o = observe(sample_demonstration(fx.world.mdp, fx.expert, fx.world.features, 30, rng), p);
    store.record(0, o);
    sum_sq += o[0] * o[0];
  }
  const double mean = store.mean(0)[0];
  const double se = std::sqrt((sum_sq / n - mean * mean) / (n - 1.0));
  EXPECT_LE(std::abs(mean - fx.psi[0]), 3.0 * se + 1e-12);
}

}  // namespace
}  // namespace persplab
