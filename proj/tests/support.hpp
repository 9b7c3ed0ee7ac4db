#pragma once

// Independent reference computations used by the tests: value iteration,
// iterative policy evaluation and Monte-Carlo returns. None of them goes
// through the LP or the linear flow solve.

#include <cmath>
#include <vector>

#include "persplab/demo.hpp"
#include "persplab/gridworld.hpp"
#include "persplab/mdp.hpp"
#include "persplab/rng.hpp"

namespace persplab::testing {

/// Dense random MDP; each next-state row keeps about half of its entries.
inline TabularMdp random_mdp(int n_states, int n_actions, double discount, Rng& rng) {
  Matrix t = Matrix::Zero(static_cast<Eigen::Index>(n_states) * n_actions, n_states);
  for (Eigen::Index row = 0; row < t.rows(); ++row) {
    double total = 0.0;
    for (int s = 0; s < n_states; ++s) {
      const double u = uniform01(rng);
      t(row, s) = u < 0.5 ? 0.0 : u;
      total += t(row, s);
    }
    if (total == 0.0) {
      t(row, uniform_index(rng, n_states)) = 1.0;
      total = 1.0;
    }
    t.row(row) /= total;
  }
  Vector rho(n_states);
  for (int s = 0; s < n_states; ++s) rho[s] = 0.1 + uniform01(rng);
  rho /= rho.sum();
  return TabularMdp(n_states, n_actions, std::move(t), std::move(rho), discount);
}

inline Vector random_reward(int n_pairs, Rng& rng) {
  Vector r(n_pairs);
  for (int i = 0; i < n_pairs; ++i) r[i] = uniform01(rng);
  return r;
}

/// Optimal state values by value iteration.
inline Vector value_iteration(const TabularMdp& mdp, const Vector& reward, double tol = 1e-14) {
  Vector v = Vector::Zero(mdp.n_states());
  for (int iter = 0; iter < 100000; ++iter) {
    Vector next(mdp.n_states());
    for (int s = 0; s < mdp.n_states(); ++s) {
      double best = -1e300;
      for (int a = 0; a < mdp.n_actions(); ++a) {
        double q = reward[mdp.pair_index(s, a)];
        for (const auto& [sp, p] : mdp.successors(s, a)) q += mdp.discount() * p * v[sp];
        best = std::max(best, q);
      }
      next[s] = best;
    }
    const double change = (next - v).cwiseAbs().maxCoeff();
    v = next;
    if (change < tol) break;
  }
  return v;
}

inline double optimal_value_vi(const TabularMdp& mdp, const Vector& reward) {
  return mdp.initial_dist().dot(value_iteration(mdp, reward));
}

/// State values of a fixed policy by iterating its Bellman operator.
inline Vector policy_evaluation(const TabularMdp& mdp, const Policy& policy, const Vector& reward,
                                double tol = 1e-14) {
  Vector v = Vector::Zero(mdp.n_states());
  for (int iter = 0; iter < 100000; ++iter) {
    Vector next = Vector::Zero(mdp.n_states());
    for (int s = 0; s < mdp.n_states(); ++s) {
      for (int a = 0; a < mdp.n_actions(); ++a) {
        double q = reward[mdp.pair_index(s, a)];
        for (const auto& [sp, p] : mdp.successors(s, a)) q += mdp.discount() * p * v[sp];
        next[s] += policy(s, a) * q;
      }
    }
    const double change = (next - v).cwiseAbs().maxCoeff();
    v = next;
    if (change < tol) break;
  }
  return v;
}

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Mean discounted return of `n` truncated rollouts.
inline MonteCarloEstimate monte_carlo_return(const TabularMdp& mdp, const Policy& policy,
                                             const Vector& reward, int horizon, int n, Rng& rng) {
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const Demonstration demo = rollout(mdp, policy, horizon, rng);
    double ret = 0.0, disc = 1.0;
    for (int t = 0; t < horizon; ++t) {
      ret += disc * reward[mdp.pair_index(demo.states[static_cast<std::size_t>(t)],
                                          demo.actions[static_cast<std::size_t>(t)])];
      disc *= mdp.discount();
    }
    sum += ret;
    sum_sq += ret * ret;
  }
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean) * n / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

inline GridWorldInstance make_world(std::uint64_t seed, const GridSpec& spec = {}) {
  Rng rng = make_stream(seed, Stream::world);
  return build_gridworld(spec, rng);
}

/// Single state, single action, all mass looping back.
inline TabularMdp single_state_mdp(double discount) {
  return TabularMdp(1, 1, Matrix::Ones(1, 1), Vector::Ones(1), discount);
}

}  // namespace persplab::testing
