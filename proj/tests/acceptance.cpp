// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any fails. Runs the full-size experiments (several minutes).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "persplab/harness.hpp"
#include "persplab/matching.hpp"
#include "persplab/theory.hpp"
#include "support.hpp"

namespace {

using namespace persplab;
namespace fs = std::filesystem;

const std::vector<int> kCheckpoints{10, 20, 30, 40};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

const AggregateCurve& point(const std::vector<AggregateCurve>& curves, const std::string& label,
                            int t) {
  for (const auto& c : curves) {
    if (c.strategy == label && c.t == t) return c;
  }
  throw std::runtime_error("no curve point " + label + " t=" + std::to_string(t));
}

void report(int id, const Outcome& o, double seconds, int& failures) {
  std::printf("criterion %d: %s (%.1fs)%s%s\n", id, o.pass ? "PASS" : "FAIL", seconds,
              o.detail.empty() ? "" : "  ", o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

Outcome check_ordering() {
  ExperimentConfig c = default_config(ExperimentKind::strategies);
  const ExperimentResult r = run_experiment(c);
  Outcome o;
  o.require(r.ok(), "some seeds failed");
  for (int t : kCheckpoints) {
    const AggregateCurve& var = point(r.curves, "active-var", t);
    const AggregateCurve& uni = point(r.curves, "uniform", t);
    std::string line = fmt("t=%d var=%.3f uni=%.3f", t, var.mean, uni.mean);
    o.require(var.mean > uni.mean, line + " var not above uniform");
    for (const char* other : {"active-sim", "active-corr"}) {
      const double m = point(r.curves, other, t).mean;
      o.require(var.mean >= m, fmt("t=%d var=%.3f < %s=%.3f", t, var.mean, other, m));
    }
  }
  const AggregateCurve& var = point(r.curves, "active-var", 20);
  const AggregateCurve& uni = point(r.curves, "uniform", 20);
  o.require(var.ci_lo > uni.ci_hi,
            fmt("t=20 CIs overlap: var [%.3f,%.3f] uni [%.3f,%.3f]", var.ci_lo, var.ci_hi,
                uni.ci_lo, uni.ci_hi));
  if (o.pass) {
    o.detail = fmt("t=20 var %.3f [%.3f,%.3f] vs uniform %.3f [%.3f,%.3f]", var.mean, var.ci_lo,
                   var.ci_hi, uni.mean, uni.ci_lo, uni.ci_hi);
  }
  return o;
}

Outcome check_random_setting() {
  ExperimentConfig c = default_config(ExperimentKind::strategies);
  c.perspectives.construction = PerspectiveSpec::Construction::random;
  c.perspectives.count = 40;
  c.perspectives.threshold = 0.5;
  const ExperimentResult r = run_experiment(c);
  Outcome o;
  o.require(r.ok(), "some seeds failed");
  for (const char* active : {"active-var", "active-sim", "active-corr"}) {
    // Every step of the first two thirds: not significantly below uniform.
    for (int t = 1; t <= 40; ++t) {
      const double m = point(r.curves, active, t).mean;
      const AggregateCurve& uni = point(r.curves, "uniform", t);
      o.require(m >= uni.ci_lo, fmt("t=%d %s=%.3f below uniform CI [%.3f,%.3f]", t, active, m,
                                    uni.ci_lo, uni.ci_hi));
    }
    for (int t : kCheckpoints) {
      const double m = point(r.curves, active, t).mean;
      const double u = point(r.curves, "uniform", t).mean;
      o.require(m >= u, fmt("t=%d %s=%.3f < uniform=%.3f", t, active, m, u));
    }
  }
  if (o.pass) {
    o.detail = fmt("t=40 var %.3f sim %.3f corr %.3f uniform %.3f",
                   point(r.curves, "active-var", 40).mean, point(r.curves, "active-sim", 40).mean,
                   point(r.curves, "active-corr", 40).mean, point(r.curves, "uniform", 40).mean);
  }
  return o;
}

Outcome check_convergence() {
  const ExperimentConfig c = default_config(ExperimentKind::validate_thm1);
  const ExperimentResult r = run_experiment(c);
  Outcome o;
  o.require(r.ok(), "some seeds failed");
  const int end = c.budget;
  const auto at_end = [&](const std::string& label) { return point(r.curves, label, end).mean; };
  const double s4 = at_end("subset-4"), s1 = at_end("subset-1");
  o.require(s4 >= 0.95, fmt("subset-4 terminal %.3f < 0.95", s4));
  o.require(s1 <= s4 - 0.05, fmt("subset-1 %.3f not 0.05 below subset-4 %.3f", s1, s4));
  for (int i = 1; i <= 3; ++i) {
    const double ri = at_end("random-" + std::to_string(i));
    const double si = at_end("subset-" + std::to_string(i));
    o.require(ri >= si, fmt("random-%d %.3f < subset-%d %.3f", i, ri, i, si));
  }
  if (o.pass) o.detail = fmt("subset-4 %.3f subset-1 %.3f", s4, s1);
  else o.detail += fmt(" | subset-1..4 %.3f %.3f %.3f %.3f", s1, at_end("subset-2"),
                       at_end("subset-3"), s4);
  return o;
}

Outcome check_counterexample() {
  const CounterexampleMdp mdp = build_counterexample();
  Rng rng = make_stream(1, Stream::policies);
  Outcome o;
  for (int rep = 0; rep < 20; ++rep) {
    const double p = uniform01(rng);
    const Rational exact(uniform_index(rng, 1000001), 1000000);
    const auto approx = counterexample_marginals(mdp, p);
    const auto rational = counterexample_marginals(mdp, exact);
    for (int d = 0; d < 2; ++d) {
      for (const auto& [pair, prob] : approx[d]) {
        o.require(std::abs(prob - 0.5) <= 1e-12, fmt("float marginal %.17g", prob));
      }
      for (const auto& [pair, prob] : rational[d]) {
        o.require(prob == Rational(1, 2), "exact marginal differs from 1/2");
      }
    }
  }
  o.require(counterexample_value(mdp, Rational(1)) == Rational(1, 2), "always-left value");
  o.require(counterexample_value(mdp, Rational(0)) == Rational(0), "always-right value");
  if (o.pass) o.detail = "left 1/2, right 0, 20 mixtures with marginals 1/2";
  return o;
}

Outcome check_exact_matching() {
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const GridWorldInstance world = testing::make_world(seed);
    const Vector reward = world.reward_vector();
    const OptimalPlan plan = solve_optimal_policy(world.mdp, reward);
    const Vector psi = world.features.expectations(plan.occupancy);
    const PerspectiveSet set = basis_perspectives(4, 0);
    ObservationStore store(set);
    for (int i = 0; i < 4; ++i) store.record(i, set[static_cast<std::size_t>(i)].transform * psi);
    const std::vector<double> weights(4, 1.0);
    const MatchResult m = match_features(world.mdp, world.features, set, store, weights);
    const Occupancy learner = occupancy_of_policy(world.mdp, extract_policy(m.occupancy, 4));
    const Vector delta = psi - world.features.expectations(learner);
    const double rel = std::abs(world.reward_weights.dot(delta)) / std::abs(plan.value);
    worst = std::max(worst, rel);
    o.require(rel <= 1e-5, fmt("seed %d relative gap %.3g", static_cast<int>(seed), rel));
  }
  if (o.pass) o.detail = fmt("worst relative gap %.3g over 50 worlds", worst);
  return o;
}

Outcome check_bound_soundness() {
  Outcome o;
  int held = 0, total = 0;
  double tightest = 1e300;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GridWorldInstance world = testing::make_world(seed);
    const OptimalPlan plan = solve_optimal_policy(world.mdp, world.reward_vector());
    const Policy expert = extract_policy(plan.occupancy, 4);
    const double diam = diam_upper_bound(world.mdp, world.features);
    Rng rng = make_stream(seed, Stream::perspectives, 6);
    Rng demo = make_stream(seed, Stream::demonstrations, 6);
    for (int rep = 0; rep < 5; ++rep) {
      const int n = 1 + uniform_index(rng, 6);
      const PerspectiveSet set =
          rep % 2 ? random_perspectives(4, n, 0.5, rng) : random_perspectives(4, n, std::nullopt, rng);
      // Learner fitted to a few demonstrations seen through the subset.
      ObservationStore store(set);
      for (int t = 0; t < 2 * n; ++t) {
        const auto i = static_cast<std::size_t>(t % n);
        store.record(t % n, observe(sample_demonstration(world.mdp, expert, world.features, 30, demo), set[i]));
      }
      const std::vector<double> weights(set.size(), 2.0);
      const MatchResult m = match_features(world.mdp, world.features, set, store, weights);
      const Occupancy learner = occupancy_of_policy(world.mdp, extract_policy(m.occupancy, 4));
      const Theorem1Report r = theorem1_report(world, set, plan.occupancy, learner, diam);
      ++total;
      if (r.holds) ++held;
      else o.require(false, fmt("seed %d rep %d gap %.4g > bound %.4g", static_cast<int>(seed), rep,
                                r.actual_gap, r.bound_value));
      tightest = std::min(tightest, r.bound_value - r.actual_gap);
    }
  }
  o.detail = fmt("%d/%d hold, smallest slack %.3g", held, total, tightest) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome check_warmup() {
  const ExperimentConfig c = default_config(ExperimentKind::warmup);
  const WarmupResult r = run_warmup(c);
  Outcome o;
  o.require(r.ok(), "some seeds failed");
  const double greedy = point(r.curves, "greedy", c.budget).mean;
  const double fixed = point(r.curves, "fixed", c.budget).mean;
  o.require(greedy < fixed, fmt("greedy %.4f not below fixed %.4f", greedy, fixed));
  std::map<std::pair<std::uint64_t, std::string>, double> last;
  int violations = 0;
  for (const auto& rec : r.records) {
    const auto key = std::make_pair(rec.seed, rec.strategy);
    const auto it = last.find(key);
    if (it != last.end() && !(rec.log_det > it->second)) ++violations;
    last[key] = rec.log_det;
  }
  o.require(violations == 0, fmt("%d log det steps did not increase", violations));
  if (o.pass) o.detail = fmt("t=%d error greedy %.4f fixed %.4f", c.budget, greedy, fixed);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome check_properties() {
  Outcome o;
  double worst_flow = 0.0, worst_mass = 0.0;
  const auto check = [&](const TabularMdp& mdp, const Occupancy& occ) {
    const FlowCheck fc = check_flow(mdp, occ);
    worst_flow = std::max(worst_flow, fc.residual);
    worst_mass = std::max(worst_mass, std::abs(fc.mass - 1.0 / (1.0 - mdp.discount())));
  };
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GridWorldInstance world = testing::make_world(seed);
    const OptimalPlan plan = solve_optimal_policy(world.mdp, world.reward_vector());
    check(world.mdp, plan.occupancy);
    const Policy expert = extract_policy(plan.occupancy, 4);
    check(world.mdp, occupancy_of_policy(world.mdp, expert));
    const PerspectiveSet set = basis_perspectives(4, 12);
    ObservationStore store(set);
    Rng demo = make_stream(seed, Stream::demonstrations);
    std::vector<double> weights(set.size(), 0.0);
    for (int t = 0; t < 16; ++t) {
      store.record(t, observe(sample_demonstration(world.mdp, expert, world.features, 30, demo),
                              set[static_cast<std::size_t>(t)]));
      weights[static_cast<std::size_t>(t)] = 1.0;
      const MatchResult m = match_features(world.mdp, world.features, set, store, weights);
      check(world.mdp, m.occupancy);
      check(world.mdp, occupancy_of_policy(world.mdp, extract_policy(m.occupancy, 4)));
    }
  }
  o.require(worst_flow <= 1e-7, fmt("flow residual %.3g", worst_flow));
  o.require(worst_mass <= 1e-8, fmt("mass error %.3g", worst_mass));

  double worst_vi = 0.0;
  Rng rng = make_stream(8, Stream::world);
  for (int rep = 0; rep < 20; ++rep) {
    const int n_states = 3 + uniform_index(rng, 20);
    const int n_actions = 2 + uniform_index(rng, 3);
    const TabularMdp mdp = testing::random_mdp(n_states, n_actions, 0.1 + 0.8 * uniform01(rng), rng);
    const Vector reward = testing::random_reward(mdp.n_pairs(), rng);
    const OptimalPlan plan = solve_optimal_policy(mdp, reward);
    check(mdp, plan.occupancy);
    worst_vi = std::max(worst_vi, std::abs(plan.value - testing::optimal_value_vi(mdp, reward)));
  }
  o.require(worst_vi <= 1e-6, fmt("LP vs value iteration %.3g", worst_vi));

  ExperimentConfig c = default_config(ExperimentKind::strategies);
  c.seeds = {1, 2, 3, 4};
  c.budget = 12;
  c.strategies.push_back(Strategy::ucb);
  const fs::path base = fs::temp_directory_path() / "persplab_acceptance";
  fs::remove_all(base);
  write_results(run_experiment(c), c, base / "a");
  write_results(run_experiment(c), c, base / "b");
  c.parallel = 2;
  write_results(run_experiment(c), c, base / "c");
  for (const char* name : {"runs.csv", "curves.csv"}) {
    const std::string a = slurp(base / "a" / name);
    o.require(a == slurp(base / "b" / name) && a == slurp(base / "c" / name),
              std::string(name) + " differs between reruns");
  }
  fs::remove_all(base);
  if (o.pass) {
    o.detail = fmt("flow %.2g, mass %.2g, LP-VI %.2g, reruns byte-identical", worst_flow,
                   worst_mass, worst_vi);
  }
  return o;
}

}  // namespace

int main() {
  using Check = Outcome (*)();
  const std::vector<Check> checks{check_ordering,       check_random_setting, check_convergence,
                                  check_counterexample, check_exact_matching, check_bound_soundness,
                                  check_warmup,         check_properties};
  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = checks[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(static_cast<int>(i) + 1, o, secs, failures);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(checks.size()) - failures,
              checks.size());
  return failures == 0 ? 0 : 1;
}
