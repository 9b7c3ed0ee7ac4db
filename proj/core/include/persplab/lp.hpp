#pragma once

#include <vector>

#include "persplab/mdp.hpp"

namespace persplab {

/**
 * minimize    objective' x
 * subject to  eq_matrix x   =  eq_rhs
 *             ineq_matrix x <= ineq_rhs
 *             x >= lower_bounds   (empty: all zero)
 *
 * Every variable has a finite lower bound and no upper bound.
 */
struct LinearProgram {
  Vector objective;
  Matrix eq_matrix;
  Vector eq_rhs;
  Matrix ineq_matrix;
  Vector ineq_rhs;
  Vector lower_bounds;

  int n_vars() const { return static_cast<int>(objective.size()); }
  int n_eq() const { return static_cast<int>(eq_rhs.size()); }
  int n_ineq() const { return static_cast<int>(ineq_rhs.size()); }

  /// Throws DimensionMismatch on inconsistent shapes.
  void validate() const;
  /// Largest violation of any constraint or bound at `x`.
  double max_violation(const Vector& x) const;
};

struct LpOptions {
  int max_iterations = 100000;
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  /// Structural variables to pivot into the starting basis before phase one.
  /// A good guess (e.g. the occupancy columns of some deterministic policy)
  /// removes most phase-one work.
  std::vector<int> basis_hint;
};

struct LpSolution {
  Vector x;
  double objective = 0.0;
  int iterations = 0;
  /// Basic structural variables at the optimum; usable as a later hint.
  std::vector<int> basic_structurals;
};

/// Swappable solver backend.
class LpSolver {
 public:
  virtual ~LpSolver() = default;
  /// Throws Infeasible, Unbounded or IterationLimit.
  virtual LpSolution solve(const LinearProgram& lp, const LpOptions& options) const = 0;
};

/// Two-phase primal simplex on a dense tableau with Dantzig pricing and a
/// Bland fallback on degenerate stalls. The final basic solution is
/// recomputed from the original data to shed accumulated pivot error.
class DenseSimplexSolver final : public LpSolver {
 public:
  LpSolution solve(const LinearProgram& lp, const LpOptions& options) const override;
};

const LpSolver& default_lp_solver();

inline LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options = {}) {
  return default_lp_solver().solve(lp, options);
}

}  // namespace persplab
