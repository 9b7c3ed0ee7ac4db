#pragma once

#include <optional>
#include <string>
#include <vector>

#include "persplab/features.hpp"
#include "persplab/gridworld.hpp"
#include "persplab/mdp.hpp"
#include "persplab/rng.hpp"

namespace persplab {

enum class PerspectiveKind { basis, duplicated_basis, random_thresholded, random_uniform };

/// Linear observation channel: the learner sees A * psi for ground-truth
/// feature expectations psi.
struct Perspective {
  Matrix transform;  // d_nu x k
  std::string label;
  PerspectiveKind kind = PerspectiveKind::basis;

  int observation_dim() const { return static_cast<int>(transform.rows()); }
  int feature_dim() const { return static_cast<int>(transform.cols()); }
};

using PerspectiveSet = std::vector<Perspective>;

/// Feature map of a grid world (indicator of the object type at each state).
FeatureMap feature_map(const GridWorldInstance& world);

/// e_1..e_k followed by `duplicate_first` copies of e_1.
PerspectiveSet basis_perspectives(int k, int duplicate_first);

/// `n` single-row perspectives with entries i.i.d. U[0,1]; entries below
/// `threshold` are zeroed and all-zero rows are redrawn.
PerspectiveSet random_perspectives(int k, int n, std::optional<double> threshold, Rng& rng);

/// Row-stack of every transform.
Matrix stack_transforms(const PerspectiveSet& perspectives);

struct StackAnalysis {
  Matrix stacked;
  double sigma = 0.0;       // smallest nonzero singular value
  double rho = 0.0;         // norm of w* projected onto ker(stacked)
  int rank = 0;
  double diam_bound = 0.0;  // upper bound on the feature-expectation diameter
};

/// Numerical rank uses singular values above 1e-10 times the largest.
/// Throws DegenerateStack for an empty or all-zero stack.
StackAnalysis analyze_stack(const PerspectiveSet& perspectives, const Vector& w_star,
                            double diam_bound);

/// Euclidean norm of the per-coordinate ranges of F mu over the flow
/// polytope (2k linear programs). Upper-bounds sup ||F mu1 - F mu2||.
double diam_upper_bound(const TabularMdp& mdp, const FeatureMap& features);

}  // namespace persplab
