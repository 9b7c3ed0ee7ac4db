#include "persplab/theory.hpp"

#include <algorithm>

#include "persplab/errors.hpp"

namespace persplab {

CounterexampleMdp build_counterexample() {
  CounterexampleMdp mdp;
  const Rational half(1, 2);
  mdp.transitions[0][CounterexampleMdp::kLeft][1] = half;
  mdp.transitions[0][CounterexampleMdp::kLeft][2] = half;
  mdp.transitions[0][CounterexampleMdp::kRight][3] = half;
  mdp.transitions[0][CounterexampleMdp::kRight][4] = half;
  for (int s = 1; s < CounterexampleMdp::kStates; ++s) {
    for (int a = 0; a < CounterexampleMdp::kActions; ++a) mdp.transitions[s][a][s] = Rational(1);
  }
  mdp.features = {{{2, 2}, {1, 1}, {0, 0}, {0, 1}, {1, 0}}};
  return mdp;
}

Theorem1Report theorem1_report(const GridWorldInstance& world, const PerspectiveSet& perspectives,
                               const Occupancy& expert, const Occupancy& learner,
                               std::optional<double> diam_bound) {
  const double w_norm = world.reward_weights.norm();
  Theorem1Report report;
  report.reward_scale = w_norm > 1.0 ? 1.0 / w_norm : 1.0;
  const Vector w = report.reward_scale * world.reward_weights;

  const double diam = diam_bound ? *diam_bound : diam_upper_bound(world.mdp, world.features);
  const StackAnalysis stack = analyze_stack(perspectives, w, diam);

  const Vector delta = world.features.expectations(expert) - world.features.expectations(learner);
  double worst = 0.0;
  for (const auto& p : perspectives) worst = std::max(worst, (p.transform * delta).norm());

  report.epsilon = static_cast<double>(perspectives.size()) * worst;
  report.sigma = stack.sigma;
  report.rho = stack.rho;
  report.rank = stack.rank;
  report.diam_bound = diam;
  report.bound_value = report.epsilon / report.sigma + report.rho * diam;
  report.actual_gap = std::abs(w.dot(delta));
  report.holds = report.actual_gap <= report.bound_value + 1e-6;
  return report;
}

}  // namespace persplab
