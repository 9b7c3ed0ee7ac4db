#include "persplab/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "persplab/errors.hpp"

namespace persplab {

namespace {

constexpr double kStochasticTol = 1e-12;

void require_distribution(const Eigen::Ref<const Vector>& row, const std::string& what) {
  for (Eigen::Index i = 0; i < row.size(); ++i) {
    if (!(row[i] >= 0.0 && row[i] <= 1.0)) {
      throw InvalidParam(what + " has an entry outside [0, 1]");
    }
  }
  if (std::abs(row.sum() - 1.0) > kStochasticTol) {
    throw InvalidParam(what + " does not sum to 1");
  }
}

}  // namespace

TabularMdp::TabularMdp(int n_states, int n_actions, Matrix transitions, Vector initial_dist,
                       double discount)
    : n_states_(n_states),
      n_actions_(n_actions),
      transitions_(std::move(transitions)),
      initial_dist_(std::move(initial_dist)),
      discount_(discount) {
  if (n_states <= 0 || n_actions <= 0) {
    throw InvalidParam("MDP needs at least one state and one action");
  }
  if (!(discount > 0.0 && discount < 1.0)) {
    throw InvalidParam("discount must lie in (0, 1)");
  }
  if (transitions_.rows() != n_pairs() || transitions_.cols() != n_states) {
    throw DimensionMismatch("transition matrix must be (states*actions) x states");
  }
  if (initial_dist_.size() != n_states) {
    throw DimensionMismatch("initial distribution length differs from state count");
  }
  for (int row = 0; row < n_pairs(); ++row) {
    require_distribution(transitions_.row(row).transpose(),
                         "transition row " + std::to_string(row));
  }
  require_distribution(initial_dist_, "initial distribution");

  successors_.resize(n_pairs());
  for (int row = 0; row < n_pairs(); ++row) {
    for (int next = 0; next < n_states; ++next) {
      const double p = transitions_(row, next);
      if (p > 0.0) successors_[row].emplace_back(next, p);
    }
  }
}

Matrix TabularMdp::flow_matrix() const {
  Matrix m = -discount_ * transitions_.transpose();
  for (int s = 0; s < n_states_; ++s) {
    for (int a = 0; a < n_actions_; ++a) m(s, pair_index(s, a)) += 1.0;
  }
  return m;
}

Policy::Policy(Matrix action_probs) : probs_(std::move(action_probs)) {
  if (probs_.rows() == 0 || probs_.cols() == 0) throw InvalidParam("empty policy");
  for (Eigen::Index s = 0; s < probs_.rows(); ++s) {
    require_distribution(probs_.row(s).transpose(), "policy row " + std::to_string(s));
  }
}

Policy Policy::uniform(int n_states, int n_actions) {
  return Policy(Matrix::Constant(n_states, n_actions, 1.0 / n_actions));
}

Policy Policy::deterministic(const std::vector<int>& actions, int n_actions) {
  Matrix probs = Matrix::Zero(static_cast<Eigen::Index>(actions.size()), n_actions);
  for (std::size_t s = 0; s < actions.size(); ++s) {
    if (actions[s] < 0 || actions[s] >= n_actions) throw InvalidParam("action out of range");
    probs(static_cast<Eigen::Index>(s), actions[s]) = 1.0;
  }
  return Policy(std::move(probs));
}

std::vector<int> Policy::greedy_actions() const {
  std::vector<int> actions(static_cast<std::size_t>(probs_.rows()));
  for (Eigen::Index s = 0; s < probs_.rows(); ++s) {
    Eigen::Index best = 0;
    probs_.row(s).maxCoeff(&best);
    actions[static_cast<std::size_t>(s)] = static_cast<int>(best);
  }
  return actions;
}

FlowCheck check_flow(const TabularMdp& mdp, const Occupancy& occupancy) {
  if (occupancy.mu.size() != mdp.n_pairs()) {
    throw DimensionMismatch("occupancy length differs from state-action count");
  }
  const Vector residual = mdp.flow_matrix() * occupancy.mu - mdp.initial_dist();
  return {residual.lpNorm<Eigen::Infinity>(), occupancy.mu.sum()};
}

Occupancy occupancy_of_policy(const TabularMdp& mdp, const Policy& policy) {
  if (policy.n_states() != mdp.n_states() || policy.n_actions() != mdp.n_actions()) {
    throw DimensionMismatch("policy shape differs from MDP");
  }
  const int n = mdp.n_states();
  Matrix state_transitions = Matrix::Zero(n, n);
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < mdp.n_actions(); ++a) {
      const double pa = policy(s, a);
      if (pa == 0.0) continue;
      for (const auto& [next, p] : mdp.successors(s, a)) state_transitions(s, next) += pa * p;
    }
  }
  // Discounted state visitation d solves (I - gamma P^T) d = rho.
  const Matrix system =
      Matrix::Identity(n, n) - mdp.discount() * state_transitions.transpose();
  const Eigen::PartialPivLU<Matrix> lu(system);
  const Vector visitation = lu.solve(mdp.initial_dist());
  const double err = (system * visitation - mdp.initial_dist()).lpNorm<Eigen::Infinity>();
  if (!visitation.allFinite() || err > 1e-9) {
    throw SingularSystem("flow system of the policy could not be solved");
  }

  Occupancy occ{Vector(mdp.n_pairs())};
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < mdp.n_actions(); ++a) {
      occ.mu[mdp.pair_index(s, a)] = std::max(0.0, visitation[s]) * policy(s, a);
    }
  }
  return occ;
}

Policy extract_policy(const Occupancy& occupancy, int n_actions) {
  if (n_actions <= 0 || occupancy.mu.size() % n_actions != 0) {
    throw DimensionMismatch("occupancy length is not a multiple of the action count");
  }
  const auto n_states = static_cast<int>(occupancy.mu.size() / n_actions);
  Matrix probs(n_states, n_actions);
  for (int s = 0; s < n_states; ++s) {
    double mass = 0.0;
    for (int a = 0; a < n_actions; ++a) mass += std::max(0.0, occupancy.mu[s * n_actions + a]);
    for (int a = 0; a < n_actions; ++a) {
      probs(s, a) = mass > 1e-12 ? std::max(0.0, occupancy.mu[s * n_actions + a]) / mass
                                 : 1.0 / n_actions;
    }
    // Renormalize so the row passes the 1e-12 stochasticity check.
    probs.row(s) /= probs.row(s).sum();
  }
  return Policy(std::move(probs));
}

double policy_value(const Occupancy& occupancy, const Vector& reward) {
  if (occupancy.mu.size() != reward.size()) {
    throw DimensionMismatch("reward length differs from occupancy length");
  }
  return reward.dot(occupancy.mu);
}

}  // namespace persplab
