#include "persplab/demo.hpp"

#include <string>

#include "persplab/errors.hpp"

namespace persplab {

namespace {

int sample_index(Rng& rng, const Eigen::Ref<const Vector>& probs) {
  const double u = uniform01(rng);
  double acc = 0.0;
  int last = 0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last = static_cast<int>(i);
    if (u < acc) return last;
  }
  return last;
}

int sample_successor(Rng& rng, const std::vector<std::pair<int, double>>& succ) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (const auto& [next, p] : succ) {
    acc += p;
    if (u < acc) return next;
  }
  return succ.back().first;
}

}  // namespace

Demonstration rollout(const TabularMdp& mdp, const Policy& policy, int horizon, Rng& rng) {
  if (horizon < 1) throw InvalidParam("horizon must be at least 1");
  if (policy.n_states() != mdp.n_states() || policy.n_actions() != mdp.n_actions()) {
    throw DimensionMismatch("policy shape differs from MDP");
  }
  Demonstration demo;
  demo.horizon = horizon;
  demo.states.reserve(static_cast<std::size_t>(horizon));
  demo.actions.reserve(static_cast<std::size_t>(horizon));
  int state = sample_index(rng, mdp.initial_dist());
  for (int t = 0; t < horizon; ++t) {
    const int action = sample_index(rng, policy.action_probs().row(state).transpose());
    demo.states.push_back(state);
    demo.actions.push_back(action);
    if (t + 1 < horizon) state = sample_successor(rng, mdp.successors(state, action));
  }
  return demo;
}

FeatureSample discounted_features(const TabularMdp& mdp, const FeatureMap& features,
                                  const Demonstration& demo) {
  if (features.n_pairs() != mdp.n_pairs()) {
    throw DimensionMismatch("feature map width differs from state-action count");
  }
  FeatureSample sample{Vector::Zero(features.feature_dim())};
  double weight = 1.0;
  for (std::size_t t = 0; t < demo.states.size(); ++t) {
    sample.psi += weight * features.column(mdp.pair_index(demo.states[t], demo.actions[t]));
    weight *= mdp.discount();
  }
  return sample;
}

FeatureSample sample_demonstration(const TabularMdp& mdp, const Policy& policy,
                                   const FeatureMap& features, int horizon, Rng& rng) {
  return discounted_features(mdp, features, rollout(mdp, policy, horizon, rng));
}

Vector observe(const FeatureSample& sample, const Perspective& perspective) {
  if (perspective.feature_dim() != sample.psi.size()) {
    throw DimensionMismatch("perspective expects " + std::to_string(perspective.feature_dim()) +
                            " features, sample has " + std::to_string(sample.psi.size()));
  }
  return perspective.transform * sample.psi;
}

Vector observe_noisy(const Vector& psi, const Perspective& perspective, double noise_sd,
                     Rng& rng) {
  Vector o = observe(FeatureSample{psi}, perspective);
  for (Eigen::Index i = 0; i < o.size(); ++i) o[i] += noise_sd * standard_normal(rng);
  return o;
}

ObservationStore::ObservationStore(const PerspectiveSet& perspectives) {
  dims_.reserve(perspectives.size());
  for (const auto& p : perspectives) dims_.push_back(p.observation_dim());
  counts_.assign(dims_.size(), 0);
  means_.resize(dims_.size());
}

ObservationStore::ObservationStore(std::vector<int> observation_dims)
    : dims_(std::move(observation_dims)), counts_(dims_.size(), 0), means_(dims_.size()) {}

void ObservationStore::record(int perspective, const Vector& observation) {
  if (perspective < 0 || perspective >= size()) throw InvalidParam("unknown perspective id");
  const auto idx = static_cast<std::size_t>(perspective);
  if (observation.size() != dims_[idx]) {
    throw DimensionMismatch("observation dimension differs from perspective " +
                            std::to_string(perspective));
  }
  const int n = ++counts_[idx];
  if (n == 1) {
    means_[idx] = observation;
  } else {
    means_[idx] += (observation - means_[idx]) / n;
  }
}

const Vector& ObservationStore::mean(int perspective) const {
  if (count(perspective) == 0) {
    throw NoObservations("perspective " + std::to_string(perspective) + " has no observations");
  }
  return means_[static_cast<std::size_t>(perspective)];
}

}  // namespace persplab
