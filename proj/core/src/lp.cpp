#include "persplab/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "persplab/errors.hpp"

namespace persplab {

void LinearProgram::validate() const {
  const auto n = objective.size();
  if (eq_rhs.size() > 0 && (eq_matrix.rows() != eq_rhs.size() || eq_matrix.cols() != n)) {
    throw DimensionMismatch("equality block shape differs from (rhs, objective)");
  }
  if (eq_rhs.size() == 0 && eq_matrix.size() != 0) {
    throw DimensionMismatch("equality matrix given without right-hand side");
  }
  if (ineq_rhs.size() > 0 &&
      (ineq_matrix.rows() != ineq_rhs.size() || ineq_matrix.cols() != n)) {
    throw DimensionMismatch("inequality block shape differs from (rhs, objective)");
  }
  if (ineq_rhs.size() == 0 && ineq_matrix.size() != 0) {
    throw DimensionMismatch("inequality matrix given without right-hand side");
  }
  if (lower_bounds.size() != 0 && lower_bounds.size() != n) {
    throw DimensionMismatch("lower bound vector length differs from variable count");
  }
  if (!objective.allFinite() || !eq_rhs.allFinite() || !ineq_rhs.allFinite() ||
      !eq_matrix.allFinite() || !ineq_matrix.allFinite() || !lower_bounds.allFinite()) {
    throw InvalidParam("linear program contains non-finite data");
  }
}

double LinearProgram::max_violation(const Vector& x) const {
  double worst = 0.0;
  if (n_eq() > 0) worst = std::max(worst, (eq_matrix * x - eq_rhs).lpNorm<Eigen::Infinity>());
  if (n_ineq() > 0) worst = std::max(worst, (ineq_matrix * x - ineq_rhs).maxCoeff());
  const Vector lb = lower_bounds.size() == 0 ? Vector::Zero(n_vars()) : lower_bounds;
  if (n_vars() > 0) worst = std::max(worst, (lb - x).maxCoeff());
  return worst;
}

namespace {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kPivotTol = 1e-9;
constexpr double kDropTol = 1e-14;
constexpr int kDegenerateStallLimit = 50;

enum class ColumnKind { structural, slack, artificial };

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const LpOptions& options)
      : lp_(lp), options_(options), n_(lp.n_vars()), m_eq_(lp.n_eq()), m_ub_(lp.n_ineq()) {
    m_ = m_eq_ + m_ub_;
    slack0_ = n_;
    art0_ = n_ + m_ub_;
    bump_ = art0_ + m_eq_;
    rhs_ = bump_ + 1;
    obj2_ = m_;
    obj1_ = m_ + 1;
    build();
  }

  LpSolution run() {
    crash();
    repair_infeasible_rows();
    if (needs_phase_one()) {
      iterate(obj1_);
      if (-t_(obj1_, rhs_) > std::max(1e-7, options_.feasibility_tol * scale_)) {
        throw Infeasible("linear program is infeasible (phase-one optimum " +
                         std::to_string(-t_(obj1_, rhs_)) + ")");
      }
      evict_artificials();
    }
    iterate(obj2_);
    return extract();
  }

 private:
  ColumnKind kind(int col) const {
    if (col < slack0_) return ColumnKind::structural;
    if (col < art0_) return ColumnKind::slack;
    return ColumnKind::artificial;
  }

  void build() {
    lb_ = lp_.lower_bounds.size() == 0 ? Vector::Zero(n_) : lp_.lower_bounds;
    // Original standard-form data, kept for the final refinement.
    a_ = Matrix::Zero(m_, n_ + m_ub_);
    b_ = Vector::Zero(m_);
    if (m_eq_ > 0) {
      a_.topLeftCorner(m_eq_, n_) = lp_.eq_matrix;
      b_.head(m_eq_) = lp_.eq_rhs - lp_.eq_matrix * lb_;
    }
    if (m_ub_ > 0) {
      a_.bottomLeftCorner(m_ub_, n_) = lp_.ineq_matrix;
      a_.bottomRightCorner(m_ub_, m_ub_).setIdentity();
      b_.tail(m_ub_) = lp_.ineq_rhs - lp_.ineq_matrix * lb_;
    }
    for (int i = 0; i < m_eq_; ++i) {
      if (b_[i] < 0.0) {
        a_.row(i) *= -1.0;
        b_[i] *= -1.0;
      }
    }
    scale_ = std::max(1.0, b_.size() > 0 ? b_.lpNorm<Eigen::Infinity>() : 0.0);

    t_ = Tableau::Zero(m_ + 2, rhs_ + 1);
    t_.topLeftCorner(m_, n_ + m_ub_) = a_;
    t_.col(rhs_).head(m_) = b_;
    basis_.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_eq_; ++i) {
      t_(i, art0_ + i) = 1.0;
      basis_[static_cast<std::size_t>(i)] = art0_ + i;
    }
    for (int i = 0; i < m_ub_; ++i) basis_[static_cast<std::size_t>(m_eq_ + i)] = slack0_ + i;

    // Phase-two costs on structurals; the constant c'lb is added back at the end.
    t_.row(obj2_).head(n_) = lp_.objective.transpose();
    // Phase-one costs: one per artificial, eliminated against the basis.
    for (int i = 0; i < m_eq_; ++i) t_(obj1_, art0_ + i) = 1.0;
    t_(obj1_, bump_) = 1.0;
    for (int i = 0; i < m_eq_; ++i) t_.row(obj1_) -= t_.row(i);

    allowed_.assign(static_cast<std::size_t>(rhs_), true);
    for (int c = art0_; c < rhs_; ++c) allowed_[static_cast<std::size_t>(c)] = false;
  }

  void pivot(int r, int c) {
    const double inv = 1.0 / t_(r, c);
    t_.row(r) *= inv;
    t_(r, c) = 1.0;

    nz_.clear();
    for (int j = 0; j <= rhs_; ++j) {
      if (t_(r, j) != 0.0) nz_.push_back(j);
    }
    const bool sparse = nz_.size() * 3 < static_cast<std::size_t>(rhs_ + 1);
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f == 0.0) continue;
      if (sparse) {
        double* row = t_.row(i).data();
        const double* prow = t_.row(r).data();
        for (int j : nz_) {
          const double v = row[j] - f * prow[j];
          row[j] = std::abs(v) < kDropTol ? 0.0 : v;
        }
      } else {
        t_.row(i) -= f * t_.row(r);
      }
      t_(i, c) = 0.0;
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  bool is_basic(int col) const {
    return std::find(basis_.begin(), basis_.end(), col) != basis_.end();
  }

  void crash() {
    for (int col : options_.basis_hint) {
      if (col < 0 || col >= n_ || is_basic(col)) continue;
      int best = -1;
      double best_abs = kPivotTol;
      for (int i = 0; i < m_; ++i) {
        if (kind(basis_[static_cast<std::size_t>(i)]) != ColumnKind::artificial) continue;
        const double v = std::abs(t_(i, col));
        if (v > best_abs) {
          best_abs = v;
          best = i;
        }
      }
      if (best >= 0) pivot(best, col);
    }
  }

  // Rows whose basic value went negative (after crashing, or negative
  // inequality right-hand sides) are covered by one extra artificial
  // column, pivoted in at the most negative row.
  void repair_infeasible_rows() {
    int worst = -1;
    double worst_val = -options_.feasibility_tol;
    for (int i = 0; i < m_; ++i) {
      const double v = t_(i, rhs_);
      if (v < -options_.feasibility_tol) {
        t_(i, bump_) = -1.0;
        const int b = basis_[static_cast<std::size_t>(i)];
        if (kind(b) == ColumnKind::artificial) t_(obj1_, bump_) += 1.0;
        if (kind(b) == ColumnKind::structural) t_(obj2_, bump_) += lp_.objective[b];
        if (v < worst_val) {
          worst_val = v;
          worst = i;
        }
      } else if (v < 0.0) {
        t_(i, rhs_) = 0.0;
      }
    }
    if (worst >= 0) pivot(worst, bump_);
  }

  bool needs_phase_one() const {
    return std::any_of(basis_.begin(), basis_.end(),
                       [&](int b) { return kind(b) == ColumnKind::artificial; });
  }

  int choose_entering(int obj_row, bool bland) const {
    int best = -1;
    double best_val = -options_.optimality_tol;
    for (int j = 0; j < rhs_; ++j) {
      if (!allowed_[static_cast<std::size_t>(j)]) continue;
      const double d = t_(obj_row, j);
      if (d < best_val) {
        if (bland) return j;
        best_val = d;
        best = j;
      }
    }
    return best;
  }

  int choose_leaving(int col, bool bland) const {
    int best = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    double best_piv = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double a = t_(i, col);
      if (a <= kPivotTol) continue;
      const double ratio = std::max(0.0, t_(i, rhs_)) / a;
      const double tie = 1e-12 * (1.0 + std::abs(best_ratio));
      if (best < 0 || ratio < best_ratio - tie) {
        best = i;
        best_ratio = ratio;
        best_piv = a;
      } else if (ratio <= best_ratio + tie) {
        const bool better = bland ? basis_[static_cast<std::size_t>(i)] <
                                        basis_[static_cast<std::size_t>(best)]
                                  : a > best_piv;
        if (better) {
          best = i;
          best_ratio = std::min(best_ratio, ratio);
          best_piv = a;
        }
      }
    }
    return best;
  }

  void iterate(int obj_row) {
    int stall = 0;
    bool bland = false;
    while (true) {
      if (iterations_ >= options_.max_iterations) {
        throw IterationLimit("simplex exceeded " + std::to_string(options_.max_iterations) +
                             " iterations");
      }
      const int enter = choose_entering(obj_row, bland);
      if (enter < 0) return;
      const int leave = choose_leaving(enter, bland);
      if (leave < 0) {
        if (obj_row == obj1_) {
          // Phase one is bounded below by zero; treat as numerical trouble.
          throw IterationLimit("phase one reported an unbounded ray");
        }
        throw Unbounded("linear program is unbounded");
      }
      const bool degenerate = t_(leave, rhs_) <= options_.feasibility_tol;
      const int left = basis_[static_cast<std::size_t>(leave)];
      pivot(leave, enter);
      ++iterations_;
      if (kind(left) == ColumnKind::artificial) allowed_[static_cast<std::size_t>(left)] = false;
      if (degenerate) {
        if (++stall > kDegenerateStallLimit) bland = true;
      } else {
        stall = 0;
        bland = false;
      }
    }
  }

  void evict_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (kind(basis_[static_cast<std::size_t>(i)]) != ColumnKind::artificial) continue;
      int best = -1;
      double best_abs = kPivotTol;
      for (int j = 0; j < art0_; ++j) {
        const double v = std::abs(t_(i, j));
        if (v > best_abs && !is_basic(j)) {
          best_abs = v;
          best = j;
        }
      }
      t_(i, rhs_) = 0.0;
      if (best >= 0) pivot(i, best);
    }
    for (int c = art0_; c < rhs_; ++c) allowed_[static_cast<std::size_t>(c)] = false;
  }

  Vector tableau_point() const {
    Vector y = Vector::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      const int b = basis_[static_cast<std::size_t>(i)];
      if (b < n_) y[b] = t_(i, rhs_);
    }
    return lb_ + y;
  }

  // Re-solves B y_B = b with the original columns. Artificials still basic
  // (redundant rows) keep their unit columns; a basic bump column has no
  // original column, in which case the tableau values are kept.
  Vector refined_point() const {
    Matrix basis_matrix(m_, m_);
    for (int c = 0; c < m_; ++c) {
      const int b = basis_[static_cast<std::size_t>(c)];
      if (b == bump_) return tableau_point();
      if (b < art0_) {
        basis_matrix.col(c) = a_.col(b);
      } else {
        basis_matrix.col(c) = Vector::Unit(m_, b - art0_);
      }
    }
    const Vector yb = Eigen::PartialPivLU<Matrix>(basis_matrix).solve(b_);
    if (!yb.allFinite()) return tableau_point();
    Vector y = Vector::Zero(n_);
    for (int c = 0; c < m_; ++c) {
      const int b = basis_[static_cast<std::size_t>(c)];
      if (b < n_) y[b] = yb[c];
    }
    return lb_ + y;
  }

  LpSolution extract() const {
    Vector x = tableau_point();
    const Vector refined = refined_point();
    if (lp_.max_violation(refined) <= lp_.max_violation(x)) x = refined;
    LpSolution sol;
    sol.objective = lp_.objective.dot(x);
    sol.x = std::move(x);
    sol.iterations = iterations_;
    for (int b : basis_) {
      if (b < n_) sol.basic_structurals.push_back(b);
    }
    std::sort(sol.basic_structurals.begin(), sol.basic_structurals.end());
    return sol;
  }

  const LinearProgram& lp_;
  const LpOptions& options_;
  int n_, m_eq_, m_ub_, m_ = 0;
  int slack0_ = 0, art0_ = 0, bump_ = 0, rhs_ = 0, obj2_ = 0, obj1_ = 0;
  double scale_ = 1.0;
  Vector lb_;
  Matrix a_;
  Vector b_;
  Tableau t_;
  std::vector<int> basis_;
  std::vector<bool> allowed_;
  std::vector<int> nz_;
  int iterations_ = 0;
};

}  // namespace

LpSolution DenseSimplexSolver::solve(const LinearProgram& lp, const LpOptions& options) const {
  lp.validate();
  if (lp.n_vars() == 0) throw InvalidParam("linear program has no variables");
  Simplex simplex(lp, options);
  return simplex.run();
}

const LpSolver& default_lp_solver() {
  static const DenseSimplexSolver solver;
  return solver;
}

}  // namespace persplab
