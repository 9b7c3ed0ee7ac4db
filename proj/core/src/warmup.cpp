#include "persplab/warmup.hpp"

#include "persplab/errors.hpp"
#include "persplab/selection.hpp"

namespace persplab {

RidgeState::RidgeState(int feature_dim, double lambda)
    : design_(lambda * Matrix::Identity(feature_dim, feature_dim)),
      moment_(Vector::Zero(feature_dim)),
      lambda_(lambda) {
  if (feature_dim < 1) throw InvalidParam("feature dimension must be positive");
  if (!(lambda > 0.0)) throw InvalidParam("lambda must be positive");
}

void ridge_update(RidgeState& state, const Matrix& transform, const Vector& observation) {
  if (transform.cols() != state.design_.rows() || transform.rows() != observation.size()) {
    throw DimensionMismatch("transform/observation shapes do not fit the ridge state");
  }
  state.design_.noalias() += transform.transpose() * transform;
  state.moment_.noalias() += transform.transpose() * observation;
  ++state.steps_;
}

Vector ridge_estimate(const RidgeState& state) {
  const Eigen::LDLT<Matrix> ldlt(state.design());
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw SingularSystem("ridge design matrix is not positive definite");
  }
  Vector estimate = ldlt.solve(state.moment());
  if (!estimate.allFinite()) throw SingularSystem("ridge solve produced non-finite values");
  return estimate;
}

double ridge_log_det(const RidgeState& state) { return log_det_spd(state.design()); }

int greedy_logdet_select(const RidgeState& state, const PerspectiveSet& perspectives) {
  return greedy_logdet_index(state.design(), perspectives);
}

}  // namespace persplab
