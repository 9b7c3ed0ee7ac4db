#include "persplab/matching.hpp"

#include <string>

#include "persplab/errors.hpp"

namespace persplab {

namespace {

const LpSolver& solver_of(const PlanningOptions& options) {
  return options.solver != nullptr ? *options.solver : default_lp_solver();
}

std::vector<int> policy_hint(const TabularMdp& mdp, const std::vector<int>& actions) {
  std::vector<int> hint;
  hint.reserve(static_cast<std::size_t>(mdp.n_states()));
  for (int s = 0; s < mdp.n_states(); ++s) {
    int a = 0;
    if (static_cast<std::size_t>(s) < actions.size()) a = actions[static_cast<std::size_t>(s)];
    if (a < 0 || a >= mdp.n_actions()) a = 0;
    hint.push_back(mdp.pair_index(s, a));
  }
  return hint;
}

}  // namespace

OptimalPlan solve_optimal_policy(const TabularMdp& mdp, const Vector& reward,
                                 const PlanningOptions& options) {
  if (reward.size() != mdp.n_pairs()) {
    throw DimensionMismatch("reward length differs from state-action count");
  }
  LinearProgram lp;
  lp.objective = -reward;
  lp.eq_matrix = mdp.flow_matrix();
  lp.eq_rhs = mdp.initial_dist();
  LpOptions lp_options;
  lp_options.basis_hint = policy_hint(mdp, options.warm_start_actions);
  const LpSolution sol = solver_of(options).solve(lp, lp_options);

  OptimalPlan plan{Occupancy{sol.x.cwiseMax(0.0)}, 0.0};
  plan.value = policy_value(plan.occupancy, reward);
  return plan;
}

MatchResult match_features(const TabularMdp& mdp, const FeatureMap& features,
                           const PerspectiveSet& perspectives, const ObservationStore& store,
                           std::span<const double> weights, const PlanningOptions& options) {
  const auto n_persp = static_cast<int>(perspectives.size());
  if (store.size() != n_persp || static_cast<int>(weights.size()) != n_persp) {
    throw DimensionMismatch("perspectives, observation store and weights differ in length");
  }
  if (features.n_pairs() != mdp.n_pairs()) {
    throw DimensionMismatch("feature map width differs from state-action count");
  }

  std::vector<int> active;
  int n_rows = 0;
  for (int i = 0; i < n_persp; ++i) {
    const double w = weights[static_cast<std::size_t>(i)];
    if (!(w >= 0.0)) throw InvalidParam("perspective weights must be nonnegative");
    if (perspectives[static_cast<std::size_t>(i)].feature_dim() != features.feature_dim()) {
      throw DimensionMismatch("perspective " + std::to_string(i) +
                              " disagrees with the feature dimension");
    }
    if (store.count(i) == 0) {
      if (w > 0.0) {
        throw InvalidParam("perspective " + std::to_string(i) +
                           " has positive weight but no observations");
      }
      continue;
    }
    active.push_back(i);
    n_rows += 2 * perspectives[static_cast<std::size_t>(i)].observation_dim();
  }
  if (active.empty()) throw NoObservations("no perspective has observations");

  const int n_mu = mdp.n_pairs();
  const auto n_eps = static_cast<int>(active.size());
  LinearProgram lp;
  lp.objective = Vector::Zero(n_mu + n_eps);
  lp.eq_matrix = Matrix::Zero(mdp.n_states(), n_mu + n_eps);
  lp.eq_matrix.leftCols(n_mu) = mdp.flow_matrix();
  lp.eq_rhs = mdp.initial_dist();
  lp.ineq_matrix = Matrix::Zero(n_rows, n_mu + n_eps);
  lp.ineq_rhs = Vector::Zero(n_rows);

  int row = 0;
  for (int e = 0; e < n_eps; ++e) {
    const int i = active[static_cast<std::size_t>(e)];
    const auto& persp = perspectives[static_cast<std::size_t>(i)];
    lp.objective[n_mu + e] = weights[static_cast<std::size_t>(i)];
    const Matrix view = persp.transform * features.matrix;
    const Vector& target = store.mean(i);
    for (int j = 0; j < persp.observation_dim(); ++j) {
      lp.ineq_matrix.row(row).head(n_mu) = view.row(j);
      lp.ineq_matrix(row, n_mu + e) = -1.0;
      lp.ineq_rhs[row] = target[j];
      ++row;
      lp.ineq_matrix.row(row).head(n_mu) = -view.row(j);
      lp.ineq_matrix(row, n_mu + e) = -1.0;
      lp.ineq_rhs[row] = -target[j];
      ++row;
    }
  }

  LpOptions lp_options;
  lp_options.basis_hint = policy_hint(mdp, options.warm_start_actions);
  const LpSolution sol = solver_of(options).solve(lp, lp_options);

  MatchResult result;
  result.occupancy = Occupancy{sol.x.head(n_mu).cwiseMax(0.0)};
  result.residuals.assign(static_cast<std::size_t>(n_persp), 0.0);
  result.constrained.assign(static_cast<std::size_t>(n_persp), false);
  for (int e = 0; e < n_eps; ++e) {
    const auto i = static_cast<std::size_t>(active[static_cast<std::size_t>(e)]);
    result.constrained[i] = true;
    // Report the slack as at least the realized sup-norm mismatch so the
    // residual bound holds exactly for the clamped occupancy.
    const Vector mismatch = perspectives[i].transform * features.expectations(result.occupancy) -
                            store.mean(static_cast<int>(i));
    result.residuals[i] = std::max(std::max(0.0, sol.x[n_mu + e]),
                                   mismatch.lpNorm<Eigen::Infinity>());
  }
  result.objective = sol.objective;
  return result;
}

}  // namespace persplab
