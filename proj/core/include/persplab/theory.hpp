#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <type_traits>
#include <utility>

#include <boost/rational.hpp>

#include "persplab/gridworld.hpp"
#include "persplab/mdp.hpp"
#include "persplab/perspective.hpp"

namespace persplab {

using Rational = boost::rational<std::int64_t>;

/**
 * Five-state episodic MDP whose reward is the conjunction of two features.
 *
 *   S0 [2,2] --left-->  S1 [1,1] or S2 [0,0]   (1/2 each)
 *            --right--> S3 [0,1] or S4 [1,0]   (1/2 each)
 *
 * Horizon 2, undiscounted, start S0; reward 1 in S1 only. Successor states
 * are absorbing. Each single feature dimension has the same trajectory
 * distribution under every policy, yet the return depends on the policy.
 */
struct CounterexampleMdp {
  static constexpr int kStates = 5;
  static constexpr int kActions = 2;
  static constexpr int kHorizon = 2;
  static constexpr int kStart = 0;
  static constexpr int kLeft = 0;
  static constexpr int kRight = 1;

  std::array<std::array<std::array<Rational, kStates>, kActions>, kStates> transitions{};
  std::array<std::array<int, 2>, kStates> features{};

  int reward(int state) const { return features[state] == std::array<int, 2>{1, 1} ? 1 : 0; }
};

CounterexampleMdp build_counterexample();

template <typename Scalar>
Scalar to_scalar(const Rational& r) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return r;
  } else {
    return static_cast<Scalar>(r.numerator()) / static_cast<Scalar>(r.denominator());
  }
}

/// Per feature dimension: probability of each (phi(S_t0)_d, phi(S_t1)_d) pair.
template <typename Scalar>
using MarginalTable = std::array<std::map<std::pair<int, int>, Scalar>, 2>;

/// Exact per-dimension trajectory distributions when "left" is taken with
/// probability `p_left` in S0.
template <typename Scalar>
MarginalTable<Scalar> counterexample_marginals(const CounterexampleMdp& mdp, Scalar p_left) {
  MarginalTable<Scalar> table;
  const std::array<Scalar, 2> action_probs{p_left, Scalar(1) - p_left};
  const int s0 = CounterexampleMdp::kStart;
  for (int a = 0; a < CounterexampleMdp::kActions; ++a) {
    for (int s1 = 0; s1 < CounterexampleMdp::kStates; ++s1) {
      const Rational& p = mdp.transitions[s0][a][s1];
      if (p.numerator() == 0) continue;
      const Scalar mass = action_probs[a] * to_scalar<Scalar>(p);
      for (int d = 0; d < 2; ++d) {
        auto [it, inserted] =
            table[d].try_emplace({mdp.features[s0][d], mdp.features[s1][d]}, Scalar(0));
        it->second += mass;
      }
    }
  }
  return table;
}

/// Joint two-dimensional feature trajectory distribution (policy dependent).
template <typename Scalar>
std::map<std::pair<std::array<int, 2>, std::array<int, 2>>, Scalar> counterexample_joint(
    const CounterexampleMdp& mdp, Scalar p_left) {
  std::map<std::pair<std::array<int, 2>, std::array<int, 2>>, Scalar> joint;
  const std::array<Scalar, 2> action_probs{p_left, Scalar(1) - p_left};
  const int s0 = CounterexampleMdp::kStart;
  for (int a = 0; a < CounterexampleMdp::kActions; ++a) {
    for (int s1 = 0; s1 < CounterexampleMdp::kStates; ++s1) {
      const Rational& p = mdp.transitions[s0][a][s1];
      if (p.numerator() == 0) continue;
      auto [it, inserted] = joint.try_emplace({mdp.features[s0], mdp.features[s1]}, Scalar(0));
      it->second += action_probs[a] * to_scalar<Scalar>(p);
    }
  }
  return joint;
}

/// Expected undiscounted return over the two steps.
template <typename Scalar>
Scalar counterexample_value(const CounterexampleMdp& mdp, Scalar p_left) {
  const std::array<Scalar, 2> action_probs{p_left, Scalar(1) - p_left};
  const int s0 = CounterexampleMdp::kStart;
  Scalar value = Scalar(mdp.reward(s0));
  for (int a = 0; a < CounterexampleMdp::kActions; ++a) {
    for (int s1 = 0; s1 < CounterexampleMdp::kStates; ++s1) {
      value += action_probs[a] * to_scalar<Scalar>(mdp.transitions[s0][a][s1]) *
               Scalar(mdp.reward(s1));
    }
  }
  return value;
}

struct Theorem1Report {
  double epsilon = 0.0;
  double sigma = 0.0;
  double rho = 0.0;
  int rank = 0;
  double diam_bound = 0.0;
  double bound_value = 0.0;  // epsilon / sigma + rho * diam_bound
  double actual_gap = 0.0;   // |<w, F (mu_E - mu_L)>|
  /// w* is rescaled to unit norm when longer, as the bound assumes ||w*|| <= 1;
  /// this is the factor applied.
  double reward_scale = 1.0;
  bool holds = false;
};

/**
 * Instantiates the matching-precision premise with the smallest epsilon
 * that makes it true, epsilon = |V| max_nu ||A_nu F (mu_E - mu_L)||_2, and
 * checks the resulting bound on the value gap. `diam_bound` defaults to
 * diam_upper_bound() of the instance.
 */
Theorem1Report theorem1_report(const GridWorldInstance& world, const PerspectiveSet& perspectives,
                               const Occupancy& expert, const Occupancy& learner,
                               std::optional<double> diam_bound = std::nullopt);

}  // namespace persplab
