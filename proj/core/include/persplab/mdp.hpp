#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace persplab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/**
 * Finite discounted MDP with dense transition probabilities.
 *
 * State-action pairs are flattened as `s * n_actions + a`; this ordering is
 * shared by occupancies, reward vectors and feature maps.
 */
class TabularMdp {
 public:
  /// \param transitions matrix of shape (n_states * n_actions) x n_states,
  ///        row (s, a) holding the next-state distribution.
  TabularMdp(int n_states, int n_actions, Matrix transitions, Vector initial_dist,
             double discount);

  int n_states() const { return n_states_; }
  int n_actions() const { return n_actions_; }
  int n_pairs() const { return n_states_ * n_actions_; }
  double discount() const { return discount_; }

  int pair_index(int state, int action) const { return state * n_actions_ + action; }

  double transition(int state, int action, int next) const {
    return transitions_(pair_index(state, action), next);
  }
  const Matrix& transitions() const { return transitions_; }
  const Vector& initial_dist() const { return initial_dist_; }

  /// Nonzero successors of (s, a) as (next state, probability).
  const std::vector<std::pair<int, double>>& successors(int state, int action) const {
    return successors_[pair_index(state, action)];
  }

  /// Flow constraint matrix M (n_states x n_pairs) such that every
  /// occupancy satisfies M mu = initial_dist.
  Matrix flow_matrix() const;

 private:
  int n_states_;
  int n_actions_;
  Matrix transitions_;
  Vector initial_dist_;
  double discount_;
  std::vector<std::vector<std::pair<int, double>>> successors_;
};

/// Stationary stochastic policy, row-stochastic (state x action).
class Policy {
 public:
  explicit Policy(Matrix action_probs);

  static Policy uniform(int n_states, int n_actions);
  static Policy deterministic(const std::vector<int>& actions, int n_actions);

  const Matrix& action_probs() const { return probs_; }
  double operator()(int state, int action) const { return probs_(state, action); }
  int n_states() const { return static_cast<int>(probs_.rows()); }
  int n_actions() const { return static_cast<int>(probs_.cols()); }

  /// Most probable action per state, lowest index on ties.
  std::vector<int> greedy_actions() const;

 private:
  Matrix probs_;
};

/// Discounted state-action occupancy measure.
struct Occupancy {
  Vector mu;
};

struct FlowCheck {
  double residual;  // sup-norm of M mu - rho
  double mass;      // sum of mu
};

FlowCheck check_flow(const TabularMdp& mdp, const Occupancy& occupancy);

/// Solves the linear flow system induced by `policy`.
Occupancy occupancy_of_policy(const TabularMdp& mdp, const Policy& policy);

/// pi(a|s) = mu(s,a) / sum_a mu(s,a); rows with mass <= 1e-12 are uniform.
Policy extract_policy(const Occupancy& occupancy, int n_actions);

/// <reward, mu>.
double policy_value(const Occupancy& occupancy, const Vector& reward);

}  // namespace persplab
