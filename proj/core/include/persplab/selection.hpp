#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "persplab/mdp.hpp"
#include "persplab/perspective.hpp"
#include "persplab/rng.hpp"

namespace persplab {

enum class Strategy { uniform, active_var, active_sim, active_corr, ucb };

std::string_view strategy_name(Strategy strategy);
std::optional<Strategy> parse_strategy(std::string_view name);

struct SelectionParams {
  double lambda = 1.0;             // ridge term of the design matrix
  double ewa_decay = 0.9;          // alpha of the feature-estimate average
  double similarity_floor = 1e-6;  // lower clamp on similarities in score denominators
  double ucb_c = 1.0;              // exploration constant of the residual UCB rule
  int corr_rollouts = 10;          // learner rollouts per estimate refresh (active(corr))
};

/// Per-run bookkeeping shared by every strategy.
class SelectionState {
 public:
  SelectionState(const PerspectiveSet& perspectives, const SelectionParams& params);

  /// Counts the selection and adds A^T A to the design matrix.
  void record_selection(int perspective);
  /// mu_hat <- alpha mu_hat + (1 - alpha) estimate; the first write stores
  /// `estimate` as is.
  void update_ewa(int perspective, const Vector& estimate);
  void set_residuals(std::span<const double> residuals);

  int size() const { return static_cast<int>(counts_.size()); }
  int step() const { return step_; }
  const std::vector<int>& counts() const { return counts_; }
  const Matrix& design() const { return design_; }
  const std::optional<Vector>& ewa(int perspective) const {
    return ewa_.at(static_cast<std::size_t>(perspective));
  }
  const std::vector<double>& residuals() const { return residuals_; }
  const SelectionParams& params() const { return params_; }
  /// Lowest-index perspective never selected, if any.
  std::optional<int> first_unselected() const;

 private:
  SelectionParams params_;
  std::vector<Matrix> grams_;
  std::vector<int> counts_;
  Matrix design_;
  std::vector<std::optional<Vector>> ewa_;
  std::vector<double> residuals_;
  int step_ = 0;
};

/// log det of a symmetric positive-definite matrix via Cholesky.
double log_det_spd(const Matrix& m);

/// log det(V + A^T A) for every perspective.
std::vector<double> logdet_scores(const Matrix& design, const PerspectiveSet& perspectives);

/// argmax_nu log det(V + A_nu^T A_nu), lowest index on ties.
int greedy_logdet_index(const Matrix& design, const PerspectiveSet& perspectives);

/// Round robin: step mod K.
int next_uniform(const SelectionState& state);

int next_active_var(const SelectionState& state, const PerspectiveSet& perspectives);

/// Cosine similarities of the flattened transforms.
Matrix transform_similarity(const PerspectiveSet& perspectives);

/// p_i proportional to 1 / sum_{j != i} max(S_ij, floor).
Vector inverse_similarity_probabilities(const Matrix& similarity, double floor);

int next_active_sim(const PerspectiveSet& perspectives, const SelectionState& state, Rng& rng);

/// Pearson correlation; zero when either vector has no variance.
double pearson_correlation(const Vector& a, const Vector& b);

/// Selection probabilities of Dissimilarity Sampling from the current
/// feature estimates; similarity is (corr + 1) / 2. Requires every
/// perspective to hold an estimate.
Vector dissimilarity_probabilities(const SelectionState& state);

/// Sweeps unselected perspectives in index order, then samples by
/// inverse summed correlation.
int next_dissimilarity(const SelectionState& state, Rng& rng);

/// argmax_nu eps_nu + c sqrt(log t / N_nu) after an initial sweep.
int next_ucb_residual(const SelectionState& state, double c);

int select_next(Strategy strategy, const SelectionState& state,
                const PerspectiveSet& perspectives, Rng& rng);

}  // namespace persplab
