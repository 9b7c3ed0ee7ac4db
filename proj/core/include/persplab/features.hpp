#pragma once

#include <span>

#include "persplab/mdp.hpp"

namespace persplab {

/// Feature map F of shape (feature_dim x n_pairs): feature expectations are
/// F mu for an occupancy mu.
struct FeatureMap {
  Matrix matrix;

  int feature_dim() const { return static_cast<int>(matrix.rows()); }
  int n_pairs() const { return static_cast<int>(matrix.cols()); }

  Vector expectations(const Occupancy& occupancy) const { return matrix * occupancy.mu; }
  auto column(int pair) const { return matrix.col(pair); }
};

struct PlacedObject {
  int cell;
  int type;
};

/// One-hot object-type indicator per state, repeated for every action.
FeatureMap object_indicator_features(int n_cells, int n_actions, int object_types,
                                     std::span<const PlacedObject> objects);

}  // namespace persplab
