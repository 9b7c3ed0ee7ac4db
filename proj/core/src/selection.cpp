#include "persplab/selection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "persplab/errors.hpp"

namespace persplab {

namespace {

constexpr std::array<std::pair<Strategy, std::string_view>, 5> kStrategyNames{{
    {Strategy::uniform, "uniform"},
    {Strategy::active_var, "active-var"},
    {Strategy::active_sim, "active-sim"},
    {Strategy::active_corr, "active-corr"},
    {Strategy::ucb, "ucb"},
}};

int argmax_lowest(std::span<const double> values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(best)]) best = i;
  }
  return best;
}

}  // namespace

std::string_view strategy_name(Strategy strategy) {
  for (const auto& [s, name] : kStrategyNames) {
    if (s == strategy) return name;
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (const auto& [s, n] : kStrategyNames) {
    if (n == name) return s;
  }
  // Accept the parenthesized spelling too, e.g. "active(var)".
  if (name == "active(var)") return Strategy::active_var;
  if (name == "active(sim)") return Strategy::active_sim;
  if (name == "active(corr)") return Strategy::active_corr;
  return std::nullopt;
}

SelectionState::SelectionState(const PerspectiveSet& perspectives, const SelectionParams& params)
    : params_(params) {
  if (perspectives.empty()) throw InvalidParam("selection needs at least one perspective");
  if (!(params.lambda > 0.0)) throw InvalidParam("lambda must be positive");
  if (!(params.ewa_decay >= 0.0 && params.ewa_decay <= 1.0)) {
    throw InvalidParam("EWA decay must lie in [0, 1]");
  }
  const int k = perspectives.front().feature_dim();
  for (const auto& p : perspectives) {
    if (p.feature_dim() != k) throw DimensionMismatch("perspectives disagree on feature dimension");
    grams_.push_back(p.transform.transpose() * p.transform);
  }
  counts_.assign(perspectives.size(), 0);
  ewa_.resize(perspectives.size());
  residuals_.assign(perspectives.size(), 0.0);
  design_ = params.lambda * Matrix::Identity(k, k);
}

void SelectionState::record_selection(int perspective) {
  if (perspective < 0 || perspective >= size()) throw InvalidParam("unknown perspective id");
  ++counts_[static_cast<std::size_t>(perspective)];
  design_ += grams_[static_cast<std::size_t>(perspective)];
  ++step_;
}

void SelectionState::update_ewa(int perspective, const Vector& estimate) {
  auto& slot = ewa_.at(static_cast<std::size_t>(perspective));
  if (!slot) {
    slot = estimate;
    return;
  }
  if (slot->size() != estimate.size()) throw DimensionMismatch("feature estimate changed length");
  *slot = params_.ewa_decay * *slot + (1.0 - params_.ewa_decay) * estimate;
}

void SelectionState::set_residuals(std::span<const double> residuals) {
  if (static_cast<int>(residuals.size()) != size()) {
    throw DimensionMismatch("one residual per perspective expected");
  }
  residuals_.assign(residuals.begin(), residuals.end());
}

std::optional<int> SelectionState::first_unselected() const {
  for (int i = 0; i < size(); ++i) {
    if (counts_[static_cast<std::size_t>(i)] == 0) return i;
  }
  return std::nullopt;
}

double log_det_spd(const Matrix& m) {
  const Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) throw SingularSystem("matrix is not positive definite");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

std::vector<double> logdet_scores(const Matrix& design, const PerspectiveSet& perspectives) {
  std::vector<double> scores;
  scores.reserve(perspectives.size());
  for (const auto& p : perspectives) {
    if (p.feature_dim() != design.rows()) {
      throw DimensionMismatch("perspective width differs from the design matrix");
    }
    scores.push_back(log_det_spd(design + p.transform.transpose() * p.transform));
  }
  return scores;
}

int greedy_logdet_index(const Matrix& design, const PerspectiveSet& perspectives) {
  const std::vector<double> scores = logdet_scores(design, perspectives);
  // Scores equal up to rounding count as ties so that identical
  // perspectives resolve to the lowest index.
  const double best = scores[static_cast<std::size_t>(argmax_lowest(scores))];
  for (int i = 0; i < static_cast<int>(scores.size()); ++i) {
    if (scores[static_cast<std::size_t>(i)] >= best - 1e-12 * (1.0 + std::abs(best))) return i;
  }
  return 0;
}

int next_uniform(const SelectionState& state) { return state.step() % state.size(); }

int next_active_var(const SelectionState& state, const PerspectiveSet& perspectives) {
  return greedy_logdet_index(state.design(), perspectives);
}

Matrix transform_similarity(const PerspectiveSet& perspectives) {
  const auto n = static_cast<Eigen::Index>(perspectives.size());
  Matrix sim(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& a = perspectives[static_cast<std::size_t>(i)].transform;
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& b = perspectives[static_cast<std::size_t>(j)].transform;
      if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch("similarity needs equally shaped transforms");
      }
      const double denom = a.norm() * b.norm();
      sim(i, j) = denom > 0.0 ? (a.array() * b.array()).sum() / denom : 0.0;
    }
  }
  return sim;
}

Vector inverse_similarity_probabilities(const Matrix& similarity, double floor) {
  const auto n = similarity.rows();
  if (n < 2) throw InvalidParam("inverse-similarity sampling needs at least two perspectives");
  Vector scores(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double total = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) total += std::max(similarity(i, j), floor);
    }
    scores[i] = 1.0 / total;
  }
  return scores / scores.sum();
}

int next_active_sim(const PerspectiveSet& perspectives, const SelectionState& state, Rng& rng) {
  const Vector probs = inverse_similarity_probabilities(transform_similarity(perspectives),
                                                        state.params().similarity_floor);
  return sample_categorical(rng, std::span<const double>(probs.data(), probs.size()));
}

double pearson_correlation(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("correlation of vectors of unequal length");
  if (a.size() < 2) return 0.0;
  const Vector ca = a.array() - a.mean();
  const Vector cb = b.array() - b.mean();
  const double denom = ca.norm() * cb.norm();
  if (!(denom > 0.0)) return 0.0;
  return std::clamp(ca.dot(cb) / denom, -1.0, 1.0);
}

Vector dissimilarity_probabilities(const SelectionState& state) {
  const int n = state.size();
  Matrix sim = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    if (!state.ewa(i)) throw InvalidParam("perspective " + std::to_string(i) + " has no estimate");
    for (int j = 0; j < i; ++j) {
      const double corr = pearson_correlation(*state.ewa(i), *state.ewa(j));
      sim(i, j) = sim(j, i) = 0.5 * (corr + 1.0);
    }
  }
  return inverse_similarity_probabilities(sim, state.params().similarity_floor);
}

int next_dissimilarity(const SelectionState& state, Rng& rng) {
  if (const auto fresh = state.first_unselected()) return *fresh;
  if (state.size() == 1) return 0;
  const Vector probs = dissimilarity_probabilities(state);
  return sample_categorical(rng, std::span<const double>(probs.data(), probs.size()));
}

int next_ucb_residual(const SelectionState& state, double c) {
  if (const auto fresh = state.first_unselected()) return *fresh;
  const double log_t = std::log(static_cast<double>(std::max(1, state.step())));
  std::vector<double> scores(static_cast<std::size_t>(state.size()));
  for (int i = 0; i < state.size(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    scores[idx] = state.residuals()[idx] + c * std::sqrt(log_t / state.counts()[idx]);
  }
  return argmax_lowest(scores);
}

int select_next(Strategy strategy, const SelectionState& state,
                const PerspectiveSet& perspectives, Rng& rng) {
  switch (strategy) {
    case Strategy::uniform:
      return next_uniform(state);
    case Strategy::active_var:
      return next_active_var(state, perspectives);
    case Strategy::active_sim:
      return perspectives.size() < 2 ? 0 : next_active_sim(perspectives, state, rng);
    case Strategy::active_corr:
      return next_dissimilarity(state, rng);
    case Strategy::ucb:
      return next_ucb_residual(state, state.params().ucb_c);
  }
  return 0;
}

}  // namespace persplab
