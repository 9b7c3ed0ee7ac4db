#include "persplab/gridworld.hpp"

#include <algorithm>
#include <numeric>

#include "persplab/errors.hpp"

namespace persplab {

FeatureMap object_indicator_features(int n_cells, int n_actions, int object_types,
                                     std::span<const PlacedObject> objects) {
  Matrix f = Matrix::Zero(object_types, static_cast<Eigen::Index>(n_cells) * n_actions);
  for (const auto& obj : objects) {
    if (obj.cell < 0 || obj.cell >= n_cells || obj.type < 0 || obj.type >= object_types) {
      throw InvalidParam("object outside the grid or of unknown type");
    }
    for (int a = 0; a < n_actions; ++a) f(obj.type, obj.cell * n_actions + a) = 1.0;
  }
  return FeatureMap{std::move(f)};
}

int GridWorldInstance::object_at(int cell) const {
  for (const auto& obj : objects) {
    if (obj.cell == cell) return obj.type;
  }
  return -1;
}

Vector GridWorldInstance::reward_vector() const {
  return features.matrix.transpose() * reward_weights;
}

namespace {

int step_cell(int cell, Move move, int side) {
  const int row = cell / side;
  const int col = cell % side;
  switch (move) {
    case Move::up:
      return row > 0 ? cell - side : cell;
    case Move::down:
      return row + 1 < side ? cell + side : cell;
    case Move::left:
      return col > 0 ? cell - 1 : cell;
    case Move::right:
      return col + 1 < side ? cell + 1 : cell;
  }
  return cell;
}

}  // namespace

GridWorldInstance build_gridworld(const GridSpec& spec, Rng& rng) {
  if (spec.grid_side <= 0 || spec.object_types <= 0 || spec.objects_per_type <= 0) {
    throw InvalidParam("grid side and object counts must be positive");
  }
  const int n_cells = spec.grid_side * spec.grid_side;
  const int n_objects = spec.object_types * spec.objects_per_type;
  if (n_cells <= n_objects) {
    throw CapacityError("grid has no empty cell left after placing " +
                        std::to_string(n_objects) + " objects");
  }

  // Partial Fisher-Yates: the first n_objects cells become object cells.
  std::vector<int> cells(static_cast<std::size_t>(n_cells));
  std::iota(cells.begin(), cells.end(), 0);
  for (int i = 0; i < n_objects; ++i) {
    const int j = i + uniform_index(rng, n_cells - i);
    std::swap(cells[static_cast<std::size_t>(i)], cells[static_cast<std::size_t>(j)]);
  }
  std::vector<PlacedObject> objects;
  objects.reserve(static_cast<std::size_t>(n_objects));
  for (int i = 0; i < n_objects; ++i) {
    objects.push_back({cells[static_cast<std::size_t>(i)], i / spec.objects_per_type});
  }

  Vector weights(spec.object_types);
  for (int i = 0; i < spec.object_types; ++i) weights[i] = uniform01(rng);

  std::vector<bool> occupied(static_cast<std::size_t>(n_cells), false);
  for (const auto& obj : objects) occupied[static_cast<std::size_t>(obj.cell)] = true;
  const double empty_prob = 1.0 / (n_cells - n_objects);

  Vector empty_dist = Vector::Zero(n_cells);
  for (int c = 0; c < n_cells; ++c) {
    if (!occupied[static_cast<std::size_t>(c)]) empty_dist[c] = empty_prob;
  }

  Matrix transitions = Matrix::Zero(static_cast<Eigen::Index>(n_cells) * kGridActions, n_cells);
  for (int c = 0; c < n_cells; ++c) {
    for (int a = 0; a < kGridActions; ++a) {
      const Eigen::Index row = static_cast<Eigen::Index>(c) * kGridActions + a;
      if (occupied[static_cast<std::size_t>(c)]) {
        transitions.row(row) = empty_dist.transpose();
      } else {
        transitions(row, step_cell(c, static_cast<Move>(a), spec.grid_side)) = 1.0;
      }
    }
  }

  TabularMdp mdp(n_cells, kGridActions, std::move(transitions), empty_dist, spec.discount);
  FeatureMap features =
      object_indicator_features(n_cells, kGridActions, spec.object_types, objects);
  return GridWorldInstance{spec.grid_side, spec.object_types, std::move(objects),
                           std::move(weights), std::move(mdp), std::move(features)};
}

}  // namespace persplab
