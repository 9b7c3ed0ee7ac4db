#include "persplab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "persplab/demo.hpp"
#include "persplab/errors.hpp"
#include "persplab/matching.hpp"
#include "persplab/warmup.hpp"

namespace persplab {

PerspectiveSet build_perspectives(const PerspectiveSpec& spec, int feature_dim, Rng& rng) {
  PerspectiveSet set;
  switch (spec.construction) {
    case PerspectiveSpec::Construction::basis:
      set = basis_perspectives(feature_dim, spec.duplicate_first);
      break;
    case PerspectiveSpec::Construction::random:
      set = random_perspectives(feature_dim, spec.count, spec.threshold, rng);
      break;
  }
  if (spec.take) {
    if (*spec.take < 1 || *spec.take > static_cast<int>(set.size())) {
      throw InvalidParam("cannot take " + std::to_string(*spec.take) + " of " +
                         std::to_string(set.size()) + " perspectives");
    }
    set.resize(static_cast<std::size_t>(*spec.take));
  }
  return set;
}

std::vector<Arm> experiment_arms(const ExperimentConfig& config) {
  std::vector<Arm> arms;
  switch (config.kind) {
    case ExperimentKind::strategies:
      for (Strategy s : config.strategies) {
        arms.push_back({std::string(strategy_name(s)), config.perspectives, s});
      }
      break;
    case ExperimentKind::validate_thm1:
      for (int i : config.subset_sizes) {
        PerspectiveSpec subset;
        subset.construction = PerspectiveSpec::Construction::basis;
        subset.duplicate_first = 0;
        subset.take = i;
        arms.push_back({"subset-" + std::to_string(i), subset, Strategy::uniform});
      }
      for (int i : config.subset_sizes) {
        PerspectiveSpec random;
        random.construction = PerspectiveSpec::Construction::random;
        random.count = i;
        random.threshold = std::nullopt;
        arms.push_back({"random-" + std::to_string(i), random, Strategy::uniform});
      }
      break;
    case ExperimentKind::warmup:
      arms.push_back({"greedy", config.perspectives, Strategy::active_var});
      arms.push_back({"fixed", config.perspectives, Strategy::uniform});
      break;
    case ExperimentKind::counterexample:
      break;
  }
  return arms;
}

bool ExperimentResult::ok() const {
  return std::all_of(status.begin(), status.end(), [](const SeedStatus& s) { return s.ok; });
}

bool WarmupResult::ok() const {
  return std::all_of(status.begin(), status.end(), [](const SeedStatus& s) { return s.ok; });
}

BootstrapCi bootstrap_mean_ci(std::span<const double> values, int resamples, Rng& rng) {
  if (values.empty()) throw InvalidParam("bootstrap of an empty sample");
  if (resamples < 1) throw InvalidParam("bootstrap needs at least one resample");
  const auto n = static_cast<int>(values.size());
  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (auto& m : means) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += values[static_cast<std::size_t>(uniform_index(rng, n))];
    m = total / n;
  }
  std::sort(means.begin(), means.end());
  // Linearly interpolated empirical quantiles.
  const auto quantile = [&](double q) {
    const double pos = q * (resamples - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, means.size() - 1);
    return means[lo] + (pos - static_cast<double>(lo)) * (means[hi] - means[lo]);
  };
  return {quantile(0.025), quantile(0.975)};
}

std::vector<AggregateCurve> aggregate_points(const std::vector<CurvePoint>& points,
                                             int resamples) {
  std::vector<std::string> labels;
  std::map<std::string, std::map<int, std::vector<double>>> grouped;
  for (const auto& p : points) {
    if (!grouped.contains(p.label)) labels.push_back(p.label);
    grouped[p.label][p.t].push_back(p.value);
  }
  std::vector<AggregateCurve> curves;
  std::uint64_t index = 0;
  for (const auto& label : labels) {
    for (const auto& [t, values] : grouped[label]) {
      double total = 0.0;
      for (double v : values) total += v;
      const double mean = total / static_cast<double>(values.size());
      Rng rng = make_stream(0x5eedULL, Stream::bootstrap, index++);
      const BootstrapCi ci = bootstrap_mean_ci(values, resamples, rng);
      curves.push_back({label, t, mean, std::min(ci.lo, mean), std::max(ci.hi, mean),
                        static_cast<int>(values.size())});
    }
  }
  return curves;
}

std::vector<AggregateCurve> aggregate_curves(const std::vector<RunRecord>& records,
                                             int resamples) {
  std::vector<CurvePoint> points;
  points.reserve(records.size());
  for (const auto& r : records) points.push_back({r.strategy, r.t, r.normalized_reward});
  return aggregate_points(points, resamples);
}

namespace {

/// Runs `fn(seed)` for every seed on up to `parallel` threads. Results keep
/// the seed order; failures are captured in `status`.
template <typename Out, typename Fn>
std::vector<std::optional<Out>> for_each_seed(const std::vector<std::uint64_t>& seeds,
                                              int parallel, Fn fn,
                                              std::vector<SeedStatus>& status) {
  std::vector<std::optional<Out>> outputs(seeds.size());
  status.assign(seeds.size(), SeedStatus{});
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      status[i].seed = seeds[i];
      try {
        outputs[i] = fn(seeds[i]);
      } catch (const std::exception& e) {
        status[i].ok = false;
        status[i].message = e.what();
      }
    }
  };
  const int n_threads = std::clamp(parallel, 1, static_cast<int>(std::max<std::size_t>(1, seeds.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  return outputs;
}

// Mean per-step view A phi(s_t, a_t) of the learner's own rollouts,
// flattened over (step, coordinate).
Vector learner_feature_trace(const GridWorldInstance& world, const Policy& policy,
                             const Perspective& perspective, int horizon, int rollouts,
                             Rng& rng) {
  const int d = perspective.observation_dim();
  Vector trace = Vector::Zero(static_cast<Eigen::Index>(horizon) * d);
  const Matrix view = perspective.transform * world.features.matrix;
  for (int r = 0; r < rollouts; ++r) {
    const Demonstration demo = rollout(world.mdp, policy, horizon, rng);
    for (int t = 0; t < horizon; ++t) {
      const int pair = world.mdp.pair_index(demo.states[static_cast<std::size_t>(t)],
                                            demo.actions[static_cast<std::size_t>(t)]);
      trace.segment(static_cast<Eigen::Index>(t) * d, d) += view.col(pair);
    }
  }
  return trace / std::max(1, rollouts);
}

struct SeedOutput {
  std::vector<RunRecord> records;
  std::vector<Theorem1Row> theorem1;
};

struct Expert {
  GridWorldInstance world;
  Vector reward;
  OptimalPlan plan;
  Policy policy;
};

Expert plan_expert(const ExperimentConfig& config, std::uint64_t seed) {
  Rng world_rng = make_stream(seed, Stream::world);
  GridWorldInstance world = build_gridworld(config.grid, world_rng);
  Vector reward = world.reward_vector();
  OptimalPlan plan = solve_optimal_policy(world.mdp, reward);
  if (!(plan.value > 0.0)) throw Error("expert value is not positive; cannot normalize");
  Policy policy = extract_policy(plan.occupancy, world.mdp.n_actions());
  return {std::move(world), std::move(reward), std::move(plan), std::move(policy)};
}

// Arms with identical perspective constructions see identical perspectives.
std::uint64_t perspective_stream_key(const std::vector<Arm>& arms, std::size_t arm) {
  for (std::size_t i = 0; i < arm; ++i) {
    if (arms[i].perspectives == arms[arm].perspectives) return i;
  }
  return arm;
}

SeedOutput run_seed(const ExperimentConfig& config, const std::vector<Arm>& arms,
                    std::uint64_t seed) {
  const Expert expert = plan_expert(config, seed);
  const auto& world = expert.world;
  const auto& mdp = world.mdp;
  std::optional<double> diam;

  SeedOutput out;
  out.records.reserve(arms.size() * static_cast<std::size_t>(config.budget));
  for (std::size_t a = 0; a < arms.size(); ++a) {
    const Arm& arm = arms[a];
    Rng persp_rng = make_stream(seed, Stream::perspectives, perspective_stream_key(arms, a));
    const PerspectiveSet perspectives =
        build_perspectives(arm.perspectives, world.object_types, persp_rng);
    Rng demo_rng = make_stream(seed, Stream::demonstrations);
    Rng strategy_rng = make_stream(seed, Stream::strategy, a);
    Rng learner_rng = make_stream(seed, Stream::learner, a);

    SelectionState state(perspectives, config.selection);
    ObservationStore store(perspectives);
    PlanningOptions planning;
    Occupancy learner_occ;
    std::vector<double> weights(perspectives.size(), 0.0);

    for (int t = 1; t <= config.budget; ++t) {
      const int nu = select_next(arm.strategy, state, perspectives, strategy_rng);
      const auto idx = static_cast<std::size_t>(nu);
      const FeatureSample sample =
          sample_demonstration(mdp, expert.policy, world.features, config.horizon, demo_rng);
      store.record(nu, observe(sample, perspectives[idx]));
      state.record_selection(nu);
      // Error terms scale with how often each perspective was selected.
      for (std::size_t i = 0; i < weights.size(); ++i) {
        weights[i] = static_cast<double>(state.counts()[i]);
      }

      const MatchResult match =
          match_features(mdp, world.features, perspectives, store, weights, planning);
      const Policy learner = extract_policy(match.occupancy, mdp.n_actions());
      planning.warm_start_actions = learner.greedy_actions();
      learner_occ = occupancy_of_policy(mdp, learner);
      const double normalized = policy_value(learner_occ, expert.reward) / expert.plan.value;

      state.set_residuals(match.residuals);
      if (arm.strategy == Strategy::active_corr) {
        state.update_ewa(nu, learner_feature_trace(world, learner, perspectives[idx],
                                                   config.horizon,
                                                   config.selection.corr_rollouts, learner_rng));
      }
      out.records.push_back({seed, arm.label, t, nu, normalized, match.residuals});
    }

    if (config.kind == ExperimentKind::validate_thm1) {
      if (!diam) diam = diam_upper_bound(mdp, world.features);
      out.theorem1.push_back(
          {seed, arm.label,
           theorem1_report(world, perspectives, expert.plan.occupancy, learner_occ, diam)});
    }
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  if (config.kind != ExperimentKind::strategies && config.kind != ExperimentKind::validate_thm1) {
    throw ConfigError("run_experiment handles the strategies and validate-thm1 kinds");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::vector<Arm> arms = experiment_arms(config);

  ExperimentResult result;
  const auto outputs = for_each_seed<SeedOutput>(
      config.seeds, config.parallel,
      [&](std::uint64_t seed) { return run_seed(config, arms, seed); }, result.status);
  for (const auto& out : outputs) {
    if (!out) continue;
    result.records.insert(result.records.end(), out->records.begin(), out->records.end());
    result.theorem1.insert(result.theorem1.end(), out->theorem1.begin(), out->theorem1.end());
  }
  result.curves = aggregate_curves(result.records);
  result.wall_seconds = seconds_since(start);
  return result;
}

WarmupResult run_warmup(const ExperimentConfig& config) {
  config.validate();
  if (config.kind != ExperimentKind::warmup) throw ConfigError("run_warmup needs kind warmup");
  const auto start = std::chrono::steady_clock::now();

  const auto run_one = [&](std::uint64_t seed) {
    const Expert expert = plan_expert(config, seed);
    const Vector psi = expert.world.features.expectations(expert.plan.occupancy);
    Rng persp_rng = make_stream(seed, Stream::perspectives);
    const PerspectiveSet perspectives =
        build_perspectives(config.perspectives, expert.world.object_types, persp_rng);
    Rng pick_rng = make_stream(seed, Stream::strategy);
    const int fixed = uniform_index(pick_rng, static_cast<int>(perspectives.size()));

    std::vector<WarmupRecord> records;
    for (const bool greedy : {true, false}) {
      Rng noise_rng = make_stream(seed, Stream::noise, greedy ? 0 : 1);
      RidgeState ridge(expert.world.object_types, config.selection.lambda);
      for (int t = 1; t <= config.budget; ++t) {
        const int nu = greedy ? greedy_logdet_select(ridge, perspectives) : fixed;
        const auto& p = perspectives[static_cast<std::size_t>(nu)];
        ridge_update(ridge, p.transform, observe_noisy(psi, p, config.noise_sd, noise_rng));
        records.push_back({seed, greedy ? "greedy" : "fixed", t, nu,
                           (ridge_estimate(ridge) - psi).norm(), ridge_log_det(ridge)});
      }
    }
    return records;
  };

  WarmupResult result;
  const auto outputs =
      for_each_seed<std::vector<WarmupRecord>>(config.seeds, config.parallel, run_one,
                                               result.status);
  std::vector<CurvePoint> points;
  for (const auto& out : outputs) {
    if (!out) continue;
    result.records.insert(result.records.end(), out->begin(), out->end());
  }
  // Keep greedy before fixed in the curve order regardless of seed layout.
  for (const char* label : {"greedy", "fixed"}) {
    for (const auto& r : result.records) {
      if (r.strategy == label) points.push_back({r.strategy, r.t, r.error});
    }
  }
  result.curves = aggregate_points(points);
  result.wall_seconds = seconds_since(start);
  return result;
}

}  // namespace persplab
