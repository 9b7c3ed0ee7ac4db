#pragma once

#include <span>
#include <vector>

#include "persplab/demo.hpp"
#include "persplab/features.hpp"
#include "persplab/lp.hpp"
#include "persplab/mdp.hpp"
#include "persplab/perspective.hpp"

namespace persplab {

struct PlanningOptions {
  const LpSolver* solver = nullptr;  // null: default_lp_solver()
  /// Deterministic policy whose occupancy columns seed the simplex basis.
  std::vector<int> warm_start_actions;
};

struct OptimalPlan {
  Occupancy occupancy;
  double value = 0.0;
};

/// max <reward, mu> over the flow polytope.
OptimalPlan solve_optimal_policy(const TabularMdp& mdp, const Vector& reward,
                                 const PlanningOptions& options = {});

struct MatchResult {
  Occupancy occupancy;
  /// Per perspective slack eps_i; zero for perspectives left out of the LP.
  std::vector<double> residuals;
  /// Whether perspective i had observations and entered the LP.
  std::vector<bool> constrained;
  double objective = 0.0;
};

/**
 * Weighted multi-perspective feature matching:
 *
 *   min  sum_i w_i eps_i
 *   s.t. flow equalities, mu >= 0,
 *        -eps_i <= (A_i F mu - psi_hat_i)_j <= eps_i   for every coordinate j,
 *
 * where psi_hat_i is the stored mean for perspective i. Perspectives without
 * observations are left out. The slacks make the LP feasible whenever the
 * flow polytope is nonempty.
 */
MatchResult match_features(const TabularMdp& mdp, const FeatureMap& features,
                           const PerspectiveSet& perspectives, const ObservationStore& store,
                           std::span<const double> weights,
                           const PlanningOptions& options = {});

}  // namespace persplab
