#include "persplab/perspective.hpp"

#include <cmath>

#include "persplab/errors.hpp"
#include "persplab/lp.hpp"

namespace persplab {

FeatureMap feature_map(const GridWorldInstance& world) {
  return object_indicator_features(world.n_cells(), world.mdp.n_actions(), world.object_types,
                                   world.objects);
}

PerspectiveSet basis_perspectives(int k, int duplicate_first) {
  if (k < 1 || duplicate_first < 0) {
    throw InvalidParam("basis perspectives need k >= 1 and a nonnegative duplicate count");
  }
  PerspectiveSet set;
  set.reserve(static_cast<std::size_t>(k + duplicate_first));
  const auto kind = duplicate_first > 0 ? PerspectiveKind::duplicated_basis : PerspectiveKind::basis;
  for (int i = 0; i < k + duplicate_first; ++i) {
    const int axis = i < k ? i : 0;
    Matrix row = Matrix::Zero(1, k);
    row(0, axis) = 1.0;
    set.push_back({std::move(row), "e" + std::to_string(axis + 1) + "#" + std::to_string(i), kind});
  }
  return set;
}

PerspectiveSet random_perspectives(int k, int n, std::optional<double> threshold, Rng& rng) {
  if (k < 1 || n < 1) throw InvalidParam("random perspectives need k >= 1 and n >= 1");
  if (threshold && !(*threshold >= 0.0 && *threshold < 1.0)) {
    throw InvalidParam("threshold must lie in [0, 1)");
  }
  const auto kind =
      threshold ? PerspectiveKind::random_thresholded : PerspectiveKind::random_uniform;
  PerspectiveSet set;
  set.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Matrix row(1, k);
    do {
      for (int j = 0; j < k; ++j) {
        const double v = uniform01(rng);
        row(0, j) = (threshold && v < *threshold) ? 0.0 : v;
      }
    } while (row.isZero(0.0));
    set.push_back({std::move(row), "r" + std::to_string(i), kind});
  }
  return set;
}

Matrix stack_transforms(const PerspectiveSet& perspectives) {
  if (perspectives.empty()) throw DegenerateStack("no perspectives to stack");
  const int k = perspectives.front().feature_dim();
  Eigen::Index rows = 0;
  for (const auto& p : perspectives) {
    if (p.feature_dim() != k) throw DimensionMismatch("perspectives disagree on feature dimension");
    rows += p.observation_dim();
  }
  Matrix stacked(rows, k);
  Eigen::Index at = 0;
  for (const auto& p : perspectives) {
    stacked.middleRows(at, p.observation_dim()) = p.transform;
    at += p.observation_dim();
  }
  return stacked;
}

StackAnalysis analyze_stack(const PerspectiveSet& perspectives, const Vector& w_star,
                            double diam_bound) {
  StackAnalysis out;
  out.stacked = stack_transforms(perspectives);
  if (out.stacked.cols() != w_star.size()) {
    throw DimensionMismatch("reward weights differ in length from the feature dimension");
  }
  const Eigen::JacobiSVD<Matrix> svd(out.stacked, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) throw DegenerateStack("stacked transform is zero");
  const double cutoff = 1e-10 * sv[0];
  while (out.rank < sv.size() && sv[out.rank] > cutoff) ++out.rank;
  out.sigma = sv[out.rank - 1];
  const auto k = static_cast<int>(w_star.size());
  const Matrix kernel = svd.matrixV().rightCols(k - out.rank);
  out.rho = kernel.cols() > 0 ? (kernel.transpose() * w_star).norm() : 0.0;
  out.diam_bound = diam_bound;
  return out;
}

double diam_upper_bound(const TabularMdp& mdp, const FeatureMap& features) {
  if (features.n_pairs() != mdp.n_pairs()) {
    throw DimensionMismatch("feature map width differs from state-action count");
  }
  LinearProgram lp;
  lp.eq_matrix = mdp.flow_matrix();
  lp.eq_rhs = mdp.initial_dist();
  LpOptions options;
  for (int s = 0; s < mdp.n_states(); ++s) options.basis_hint.push_back(mdp.pair_index(s, 0));

  double sq = 0.0;
  for (int j = 0; j < features.feature_dim(); ++j) {
    lp.objective = features.matrix.row(j).transpose();
    const double lo = solve_lp(lp, options).objective;
    lp.objective = -lp.objective;
    const double hi = -solve_lp(lp, options).objective;
    const double range = std::max(0.0, hi - lo);
    sq += range * range;
  }
  return std::sqrt(sq);
}

}  // namespace persplab
