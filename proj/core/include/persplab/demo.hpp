#pragma once

#include <vector>

#include "persplab/features.hpp"
#include "persplab/mdp.hpp"
#include "persplab/perspective.hpp"
#include "persplab/rng.hpp"

namespace persplab {

inline constexpr int kDefaultHorizon = 30;

/// One truncated trajectory.
struct Demonstration {
  std::vector<int> states;
  std::vector<int> actions;
  int horizon = 0;
};

/// Discounted feature sum of one trajectory.
struct FeatureSample {
  Vector psi;
};

Demonstration rollout(const TabularMdp& mdp, const Policy& policy, int horizon, Rng& rng);

/// sum_t gamma^t phi(s_t, a_t) over the trajectory.
FeatureSample discounted_features(const TabularMdp& mdp, const FeatureMap& features,
                                  const Demonstration& demo);

/// Rolls out `horizon` steps from the initial distribution and returns the
/// discounted feature sum.
FeatureSample sample_demonstration(const TabularMdp& mdp, const Policy& policy,
                                   const FeatureMap& features, int horizon, Rng& rng);

/// A_nu * psi.
Vector observe(const FeatureSample& sample, const Perspective& perspective);

/// A_nu * psi plus i.i.d. Gaussian noise of standard deviation `noise_sd`.
Vector observe_noisy(const Vector& psi, const Perspective& perspective, double noise_sd, Rng& rng);

/// Per-perspective running means of observed vectors.
class ObservationStore {
 public:
  explicit ObservationStore(const PerspectiveSet& perspectives);
  explicit ObservationStore(std::vector<int> observation_dims);

  void record(int perspective, const Vector& observation);

  int size() const { return static_cast<int>(counts_.size()); }
  int count(int perspective) const { return counts_.at(static_cast<std::size_t>(perspective)); }
  /// Throws NoObservations when nothing was recorded for `perspective`.
  const Vector& mean(int perspective) const;
  const std::vector<int>& counts() const { return counts_; }

 private:
  std::vector<int> dims_;
  std::vector<int> counts_;
  std::vector<Vector> means_;
};

}  // namespace persplab
