// persplab: run multi-perspective imitation experiments from the command line.
//
//   persplab strategies     [common flags] [--perspectives basis|random] [--strategies a,b]
//   persplab validate-thm1  [common flags]
//   persplab warmup         [common flags] [--noise <sd>]
//   persplab counterexample [--mixtures <n>] [--seeds <s>] [--out <dir>]
//   persplab plot --in curves.csv --out plot.svg [--title <text>]
//
// Exit codes: 0 success, 2 configuration error, 3 runtime or solver error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "persplab/errors.hpp"
#include "persplab/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
  std::string config_path;
  std::string seeds;
  std::optional<int> budget;
  std::string out;
  std::optional<int> parallel;
  std::optional<double> gamma;
  std::optional<int> horizon;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON configuration file");
  cmd->add_option("--seeds", f.seeds, "seed count n (seeds 1..n) or comma-separated list");
  cmd->add_option("--budget", f.budget, "demonstrations per run");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--parallel", f.parallel, "worker threads over seeds");
  cmd->add_option("--gamma", f.gamma, "discount factor (default 0.3)");
  cmd->add_option("--horizon", f.horizon, "demonstration length (default 30)");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw persplab::ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

persplab::ExperimentConfig resolve(persplab::ExperimentKind kind, const CommonFlags& f) {
  auto config = f.config_path.empty() ? persplab::default_config(kind)
                                      : persplab::parse_config(read_text(f.config_path), kind);
  if (!f.seeds.empty()) config.seeds = persplab::parse_seed_list(f.seeds);
  if (f.budget) config.budget = *f.budget;
  if (!f.out.empty()) config.out_dir = f.out;
  if (f.parallel) config.parallel = *f.parallel;
  if (f.gamma) config.grid.discount = *f.gamma;
  if (f.horizon) config.horizon = *f.horizon;
  return config;
}

int report_status(const std::vector<persplab::SeedStatus>& status, double wall,
                  const std::string& out_dir) {
  int failed = 0;
  for (const auto& s : status) {
    if (!s.ok) {
      ++failed;
      std::cerr << "seed " << s.seed << " failed: " << s.message << "\n";
    }
  }
  std::cout << status.size() - static_cast<std::size_t>(failed) << "/" << status.size()
            << " seeds ok in " << wall << " s; results in " << out_dir << "\n";
  return failed == 0 ? 0 : kExitRuntime;
}

void print_curve_tail(const std::vector<persplab::AggregateCurve>& curves,
                      std::initializer_list<int> checkpoints) {
  const std::set<int> wanted(checkpoints);
  for (const auto& c : curves) {
    if (wanted.contains(c.t)) {
      std::printf("%-14s t=%-4d mean=%.4f ci=[%.4f, %.4f] n=%d\n", c.strategy.c_str(), c.t,
                  c.mean, c.ci_lo, c.ci_hi, c.n);
    }
  }
}

int run_curves(persplab::ExperimentConfig config) {
  config.validate();
  const auto result = persplab::run_experiment(config);
  persplab::write_results(result, config, config.out_dir);
  const int last = config.budget;
  print_curve_tail(result.curves, {10, 20, 30, 40, last});
  return report_status(result.status, result.wall_seconds, config.out_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-perspective imitation learning experiments"};
  app.require_subcommand(1);

  CommonFlags strat_flags, thm_flags, warm_flags;
  std::string perspectives_kind;
  std::vector<std::string> strategy_names;
  auto* strategies = app.add_subcommand("strategies", "compare perspective selection strategies");
  add_common(strategies, strat_flags);
  strategies->add_option("--perspectives", perspectives_kind, "basis | random")
      ->check(CLI::IsMember({"basis", "random"}));
  strategies->add_option("--strategies", strategy_names, "strategy list")->delimiter(',');

  auto* thm1 = app.add_subcommand("validate-thm1", "Subset vs Random perspective convergence");
  add_common(thm1, thm_flags);

  std::optional<double> noise;
  auto* warmup = app.add_subcommand("warmup", "ridge warm-up estimation study");
  add_common(warmup, warm_flags);
  warmup->add_option("--noise", noise, "Gaussian observation noise sd (default 0.1)");

  int mixtures = 20;
  std::string ce_seeds = "1";
  std::string ce_out;
  auto* counter = app.add_subcommand("counterexample", "exact conjunction counterexample");
  counter->add_option("--mixtures", mixtures, "random mixed policies to report");
  counter->add_option("--seeds", ce_seeds, "seed for the mixture draws");
  counter->add_option("--out", ce_out, "directory for counterexample.json");

  std::string plot_in, plot_out, plot_title = "normalized reward";
  auto* plot = app.add_subcommand("plot", "render curves.csv as an SVG line plot");
  plot->add_option("--in", plot_in, "curves.csv")->required();
  plot->add_option("--out", plot_out, "output SVG path")->required();
  plot->add_option("--title", plot_title, "plot title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*strategies) {
      auto config = resolve(persplab::ExperimentKind::strategies, strat_flags);
      if (perspectives_kind == "random") {
        config.perspectives.construction = persplab::PerspectiveSpec::Construction::random;
      } else if (perspectives_kind == "basis") {
        config.perspectives.construction = persplab::PerspectiveSpec::Construction::basis;
      }
      if (!strategy_names.empty()) {
        config.strategies.clear();
        for (const auto& name : strategy_names) {
          const auto s = persplab::parse_strategy(name);
          if (!s) throw persplab::ConfigError("unknown strategy '" + name + "'");
          config.strategies.push_back(*s);
        }
      }
      return run_curves(config);
    }
    if (*thm1) {
      auto config = resolve(persplab::ExperimentKind::validate_thm1, thm_flags);
      return run_curves(config);
    }
    if (*warmup) {
      auto config = resolve(persplab::ExperimentKind::warmup, warm_flags);
      if (noise) config.noise_sd = *noise;
      config.validate();
      const auto result = persplab::run_warmup(config);
      persplab::write_warmup_results(result, config, config.out_dir);
      print_curve_tail(result.curves, {1, 10, 25, config.budget});
      return report_status(result.status, result.wall_seconds, config.out_dir);
    }
    if (*counter) {
      if (mixtures < 0) throw persplab::ConfigError("--mixtures must be nonnegative");
      const auto seeds = persplab::parse_seed_list(ce_seeds);
      persplab::Rng rng = persplab::make_stream(seeds.front(), persplab::Stream::policies);
      std::vector<persplab::Rational> ps;
      for (int i = 0; i < mixtures; ++i) {
        const auto den = 1 + persplab::uniform_index(rng, 999);
        ps.emplace_back(persplab::uniform_index(rng, den + 1), den);
      }
      const std::string json = persplab::counterexample_summary_json(ps);
      if (!ce_out.empty()) {
        std::filesystem::create_directories(ce_out);
        std::ofstream out(std::filesystem::path(ce_out) / "counterexample.json", std::ios::binary);
        if (!out) throw persplab::IoError("cannot write counterexample.json in " + ce_out);
        out << json;
      }
      std::cout << json;
      return 0;
    }
    if (*plot) {
      const auto curves = persplab::parse_curves_csv(read_text(plot_in));
      std::ofstream out(plot_out, std::ios::binary);
      if (!out) throw persplab::IoError("cannot write " + plot_out);
      out << persplab::render_curves_svg(curves, plot_title);
      return 0;
    }
  } catch (const persplab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const persplab::InvalidParam& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
