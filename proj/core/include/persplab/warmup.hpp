#pragma once

#include "persplab/mdp.hpp"
#include "persplab/perspective.hpp"

namespace persplab {

/// Penalized least-squares estimate of the expert's feature expectations
/// from linear views o = A psi + noise:
///   psi_hat = argmin sum ||o - A psi||^2 + lambda ||psi||^2 = V^{-1} b,
/// with V = lambda I + sum A^T A and b = sum A^T o.
class RidgeState {
 public:
  RidgeState(int feature_dim, double lambda);

  const Matrix& design() const { return design_; }
  const Vector& moment() const { return moment_; }
  double lambda() const { return lambda_; }
  int steps() const { return steps_; }

  friend void ridge_update(RidgeState& state, const Matrix& transform, const Vector& observation);

 private:
  Matrix design_;
  Vector moment_;
  double lambda_;
  int steps_ = 0;
};

/// V += A^T A, b += A^T o.
void ridge_update(RidgeState& state, const Matrix& transform, const Vector& observation);

/// V^{-1} b via a symmetric solve.
Vector ridge_estimate(const RidgeState& state);

/// log det V.
double ridge_log_det(const RidgeState& state);

/// argmax_nu log det(V + A_nu^T A_nu); same rule as active(var).
int greedy_logdet_select(const RidgeState& state, const PerspectiveSet& perspectives);

}  // namespace persplab
