#pragma once

#include <vector>

#include "persplab/features.hpp"
#include "persplab/mdp.hpp"
#include "persplab/rng.hpp"

namespace persplab {

enum class Move : int { up = 0, down = 1, left = 2, right = 3 };
inline constexpr int kGridActions = 4;

struct GridSpec {
  int grid_side = 10;
  int object_types = 4;
  int objects_per_type = 2;
  double discount = 0.3;
};

/**
 * Object-collection grid world.
 *
 * Cells are indexed row-major. Moves are deterministic and clipped at the
 * walls (self-loop). Any action taken in an object cell collects the object,
 * earns that type's reward and teleports the agent to a uniformly random
 * empty cell; the object stays in place. Episodes start on a uniformly
 * random empty cell.
 */
struct GridWorldInstance {
  int grid_side;
  int object_types;
  std::vector<PlacedObject> objects;
  Vector reward_weights;
  TabularMdp mdp;
  FeatureMap features;

  int n_cells() const { return grid_side * grid_side; }
  /// Object type at `cell`, or -1 for an empty cell.
  int object_at(int cell) const;
  /// r(s, a) = <w*, phi(s, a)> over flattened state-action pairs.
  Vector reward_vector() const;
};

GridWorldInstance build_gridworld(const GridSpec& spec, Rng& rng);

}  // namespace persplab
