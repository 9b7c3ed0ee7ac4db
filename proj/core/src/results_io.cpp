#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "persplab/errors.hpp"
#include "persplab/harness.hpp"

namespace persplab {

using Json = nlohmann::ordered_json;

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string construction_name(PerspectiveSpec::Construction c) {
  return c == PerspectiveSpec::Construction::basis ? "basis" : "random";
}

void reject_unknown(const Json& obj, std::initializer_list<std::string_view> allowed,
                    std::string_view where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <typename T>
void read(const Json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

Json spec_to_json(const PerspectiveSpec& spec) {
  Json j;
  j["construction"] = construction_name(spec.construction);
  j["duplicate_first"] = spec.duplicate_first;
  j["count"] = spec.count;
  j["threshold"] = spec.threshold ? Json(*spec.threshold) : Json(nullptr);
  j["take"] = spec.take ? Json(*spec.take) : Json(nullptr);
  return j;
}

PerspectiveSpec spec_from_json(const Json& j, PerspectiveSpec spec) {
  if (!j.is_object()) throw ConfigError("'perspectives' must be an object");
  reject_unknown(j, {"construction", "duplicate_first", "count", "threshold", "take"},
                 "perspectives");
  if (j.contains("construction")) {
    const auto name = j.at("construction");
    if (name == "basis") {
      spec.construction = PerspectiveSpec::Construction::basis;
    } else if (name == "random") {
      spec.construction = PerspectiveSpec::Construction::random;
    } else {
      throw ConfigError("perspectives.construction must be 'basis' or 'random'");
    }
  }
  read(j, "duplicate_first", spec.duplicate_first);
  read(j, "count", spec.count);
  if (j.contains("threshold")) {
    spec.threshold = j.at("threshold").is_null() ? std::nullopt
                                                 : std::optional<double>(j.at("threshold").get<double>());
  }
  if (j.contains("take")) {
    spec.take = j.at("take").is_null() ? std::nullopt
                                       : std::optional<int>(j.at("take").get<int>());
  }
  return spec;
}

void write_file(const std::filesystem::path& path, const std::string& text, FileManifest& manifest) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
  manifest.files.push_back(path);
}

void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

Json status_json(const std::vector<SeedStatus>& status) {
  Json runs = Json::array();
  for (const auto& s : status) {
    Json r;
    r["seed"] = s.seed;
    r["status"] = s.ok ? "ok" : "failed";
    if (!s.ok) r["message"] = s.message;
    runs.push_back(std::move(r));
  }
  return runs;
}

std::string manifest_json(const ExperimentConfig& config, const std::vector<SeedStatus>& status,
                          double wall_seconds, const FileManifest& files) {
  Json m;
  m["tool"] = "persplab";
  m["version"] = std::string(kToolVersion);
  m["kind"] = std::string(kind_name(config.kind));
  m["config"] = Json::parse(config_to_json(config));
  m["config_hash"] = config_hash(config);
  m["wall_seconds"] = wall_seconds;
  const bool ok = std::all_of(status.begin(), status.end(), [](const auto& s) { return s.ok; });
  m["status"] = ok ? "ok" : "failed";
  m["runs"] = status_json(status);
  Json names = Json::array();
  for (const auto& f : files.files) names.push_back(f.filename().string());
  m["files"] = names;
  return m.dump(2) + "\n";
}

std::string thm1_csv(const std::vector<Theorem1Row>& rows) {
  std::string out =
      "seed,arm,epsilon,sigma,rho,rank,diam_bound,bound,actual_gap,reward_scale,holds\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    out += std::to_string(row.seed) + "," + row.arm + "," + fmt_double(r.epsilon) + "," +
           fmt_double(r.sigma) + "," + fmt_double(r.rho) + "," + std::to_string(r.rank) + "," +
           fmt_double(r.diam_bound) + "," + fmt_double(r.bound_value) + "," +
           fmt_double(r.actual_gap) + "," + fmt_double(r.reward_scale) + "," +
           (r.holds ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace

std::string_view kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::strategies: return "strategies";
    case ExperimentKind::validate_thm1: return "validate-thm1";
    case ExperimentKind::warmup: return "warmup";
    case ExperimentKind::counterexample: return "counterexample";
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_kind(std::string_view name) {
  for (auto k : {ExperimentKind::strategies, ExperimentKind::validate_thm1,
                 ExperimentKind::warmup, ExperimentKind::counterexample}) {
    if (kind_name(k) == name) return k;
  }
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  const auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (!(grid.discount > 0.0 && grid.discount < 1.0)) fail("gamma must lie in (0, 1)");
  if (grid.grid_side < 1 || grid.object_types < 1 || grid.objects_per_type < 1) {
    fail("grid side, object types and objects per type must be positive");
  }
  if (grid.grid_side * grid.grid_side <= grid.object_types * grid.objects_per_type) {
    fail("grid has no room for an empty cell");
  }
  if (kind == ExperimentKind::counterexample) return;
  if (budget < 1) fail("budget must be at least 1");
  if (seeds.empty()) fail("seed list is empty");
  if (horizon < 1) fail("horizon must be at least 1");
  if (parallel < 1) fail("parallel must be at least 1");
  if (!(selection.lambda > 0.0)) fail("selection.lambda must be positive");
  if (!(selection.ewa_decay > 0.0 && selection.ewa_decay <= 1.0)) {
    fail("selection.ewa_decay must lie in (0, 1]");
  }
  if (!(selection.similarity_floor > 0.0)) fail("selection.similarity_floor must be positive");
  if (!(selection.ucb_c >= 0.0)) fail("selection.ucb_c must be nonnegative");
  if (selection.corr_rollouts < 1) fail("selection.corr_rollouts must be at least 1");
  if (!(noise_sd >= 0.0)) fail("noise_sd must be nonnegative");
  const auto& p = perspectives;
  if (p.duplicate_first < 0) fail("perspectives.duplicate_first must be nonnegative");
  if (p.count < 1) fail("perspectives.count must be at least 1");
  if (p.threshold && !(*p.threshold >= 0.0 && *p.threshold < 1.0)) {
    fail("perspectives.threshold must lie in [0, 1)");
  }
  if (p.take) {
    const int available = p.construction == PerspectiveSpec::Construction::basis
                              ? grid.object_types + p.duplicate_first
                              : p.count;
    if (*p.take < 1 || *p.take > available) {
      fail("perspectives.take must lie in 1.." + std::to_string(available));
    }
  }
  if (kind == ExperimentKind::strategies && strategies.empty()) fail("strategy list is empty");
  if (kind == ExperimentKind::validate_thm1) {
    if (subset_sizes.empty()) fail("subset_sizes is empty");
    for (int i : subset_sizes) {
      if (i < 1 || i > grid.object_types) fail("subset sizes must lie in 1..object_types");
    }
  }
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  const auto seeds_upto = [](std::uint64_t n) {
    std::vector<std::uint64_t> s(n);
    for (std::uint64_t i = 0; i < n; ++i) s[i] = i + 1;
    return s;
  };
  switch (kind) {
    case ExperimentKind::strategies:
      c.budget = 60;
      c.seeds = seeds_upto(100);
      c.strategies = {Strategy::uniform, Strategy::active_var, Strategy::active_sim,
                      Strategy::active_corr};
      break;
    case ExperimentKind::validate_thm1:
      c.budget = 200;
      c.seeds = seeds_upto(10);
      c.subset_sizes = {1, 2, 3, 4};
      break;
    case ExperimentKind::warmup:
      c.budget = 50;
      c.seeds = seeds_upto(100);
      break;
    case ExperimentKind::counterexample:
      c.budget = 1;
      c.seeds = {1};
      break;
  }
  return c;
}

ExperimentConfig parse_config(std::string_view json_text, std::optional<ExperimentKind> kind) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"kind", "grid", "horizon", "budget", "seeds", "perspectives", "strategies",
                  "subset_sizes", "selection", "noise_sd", "parallel", "out_dir"},
                 "config");

  if (j.contains("kind")) {
    if (!j.at("kind").is_string()) throw ConfigError("'kind' must be a string");
    const auto named = parse_kind(j.at("kind").get<std::string>());
    if (!named) throw ConfigError("unknown experiment kind '" + j.at("kind").get<std::string>() + "'");
    if (kind && *kind != *named) {
      throw ConfigError("config kind '" + j.at("kind").get<std::string>() +
                        "' does not match the subcommand");
    }
    kind = named;
  }
  ExperimentConfig c = default_config(kind.value_or(ExperimentKind::strategies));

  try {
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      if (!g.is_object()) throw ConfigError("'grid' must be an object");
      reject_unknown(g, {"side", "object_types", "objects_per_type", "gamma"}, "grid");
      read(g, "side", c.grid.grid_side);
      read(g, "object_types", c.grid.object_types);
      read(g, "objects_per_type", c.grid.objects_per_type);
      read(g, "gamma", c.grid.discount);
    }
    read(j, "horizon", c.horizon);
    read(j, "budget", c.budget);
    if (j.contains("seeds")) {
      const auto& s = j.at("seeds");
      if (s.is_number_unsigned()) {
        c.seeds = parse_seed_list(std::to_string(s.get<std::uint64_t>()));
      } else if (s.is_array()) {
        c.seeds = s.get<std::vector<std::uint64_t>>();
      } else {
        throw ConfigError("'seeds' must be a count or an array of seeds");
      }
    }
    if (j.contains("perspectives")) c.perspectives = spec_from_json(j.at("perspectives"), c.perspectives);
    if (j.contains("strategies")) {
      c.strategies.clear();
      for (const auto& name : j.at("strategies")) {
        const auto s = parse_strategy(name.get<std::string>());
        if (!s) throw ConfigError("unknown strategy '" + name.get<std::string>() + "'");
        c.strategies.push_back(*s);
      }
    }
    read(j, "subset_sizes", c.subset_sizes);
    if (j.contains("selection")) {
      const auto& s = j.at("selection");
      if (!s.is_object()) throw ConfigError("'selection' must be an object");
      reject_unknown(s, {"lambda", "ewa_decay", "similarity_floor", "ucb_c", "corr_rollouts"},
                     "selection");
      read(s, "lambda", c.selection.lambda);
      read(s, "ewa_decay", c.selection.ewa_decay);
      read(s, "similarity_floor", c.selection.similarity_floor);
      read(s, "ucb_c", c.selection.ucb_c);
      read(s, "corr_rollouts", c.selection.corr_rollouts);
    }
    read(j, "noise_sd", c.noise_sd);
    read(j, "parallel", c.parallel);
    read(j, "out_dir", c.out_dir);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const InvalidParam& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  Json j;
  j["kind"] = std::string(kind_name(c.kind));
  j["grid"] = {{"side", c.grid.grid_side},
               {"object_types", c.grid.object_types},
               {"objects_per_type", c.grid.objects_per_type},
               {"gamma", c.grid.discount}};
  j["horizon"] = c.horizon;
  j["budget"] = c.budget;
  j["seeds"] = c.seeds;
  j["perspectives"] = spec_to_json(c.perspectives);
  Json strategies = Json::array();
  for (Strategy s : c.strategies) strategies.push_back(std::string(strategy_name(s)));
  j["strategies"] = strategies;
  j["subset_sizes"] = c.subset_sizes;
  j["selection"] = {{"lambda", c.selection.lambda},
                    {"ewa_decay", c.selection.ewa_decay},
                    {"similarity_floor", c.selection.similarity_floor},
                    {"ucb_c", c.selection.ucb_c},
                    {"corr_rollouts", c.selection.corr_rollouts}};
  j["noise_sd"] = c.noise_sd;
  j["parallel"] = c.parallel;
  j["out_dir"] = c.out_dir;
  return j.dump();
}

std::string config_hash(const ExperimentConfig& config) {
  // The thread count and output location do not affect results.
  ExperimentConfig canonical = config;
  canonical.parallel = 1;
  canonical.out_dir.clear();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config_to_json(canonical)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  const auto parse_one = [](std::string_view tok) {
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw ConfigError("bad seed '" + std::string(tok) + "'");
    }
    return v;
  };
  std::vector<std::uint64_t> seeds;
  if (text.find(',') == std::string_view::npos) {
    const std::uint64_t n = parse_one(text);
    if (n == 0) throw ConfigError("seed count must be at least 1");
    for (std::uint64_t i = 1; i <= n; ++i) seeds.push_back(i);
    return seeds;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(',', start), text.size());
    seeds.push_back(parse_one(text.substr(start, end - start)));
    start = end + 1;
  }
  return seeds;
}

std::string runs_csv(const std::vector<RunRecord>& records) {
  std::string out = "seed,strategy,t,perspective,normalized_reward\n";
  for (const auto& r : records) {
    out += std::to_string(r.seed) + "," + r.strategy + "," + std::to_string(r.t) + "," +
           std::to_string(r.perspective) + "," + fmt_double(r.normalized_reward) + "\n";
  }
  return out;
}

std::string warmup_csv(const std::vector<WarmupRecord>& records) {
  std::string out = "seed,strategy,t,perspective,error,log_det\n";
  for (const auto& r : records) {
    out += std::to_string(r.seed) + "," + r.strategy + "," + std::to_string(r.t) + "," +
           std::to_string(r.perspective) + "," + fmt_double(r.error) + "," +
           fmt_double(r.log_det) + "\n";
  }
  return out;
}

std::string curves_csv(const std::vector<AggregateCurve>& curves) {
  std::string out = "strategy,t,mean,ci_lo,ci_hi,n\n";
  for (const auto& c : curves) {
    out += c.strategy + "," + std::to_string(c.t) + "," + fmt_double(c.mean) + "," +
           fmt_double(c.ci_lo) + "," + fmt_double(c.ci_hi) + "," + std::to_string(c.n) + "\n";
  }
  return out;
}

std::vector<AggregateCurve> parse_curves_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "strategy,t,mean,ci_lo,ci_hi,n") {
    throw IoError("curves file lacks the expected header");
  }
  std::vector<AggregateCurve> curves;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    if (cells.size() != 6) throw IoError("curves line " + std::to_string(line_no) + " has " +
                                         std::to_string(cells.size()) + " fields");
    try {
      curves.push_back({cells[0], std::stoi(cells[1]), std::stod(cells[2]), std::stod(cells[3]),
                        std::stod(cells[4]), std::stoi(cells[5])});
    } catch (const std::exception&) {
      throw IoError("curves line " + std::to_string(line_no) + " is malformed");
    }
  }
  return curves;
}

FileManifest write_results(const ExperimentResult& result, const ExperimentConfig& config,
                           const std::filesystem::path& out_dir) {
  prepare_dir(out_dir);
  FileManifest files;
  write_file(out_dir / "runs.csv", runs_csv(result.records), files);
  write_file(out_dir / "curves.csv", curves_csv(result.curves), files);
  if (!result.theorem1.empty()) write_file(out_dir / "thm1.csv", thm1_csv(result.theorem1), files);
  FileManifest listed = files;
  listed.files.push_back(out_dir / "manifest.json");
  write_file(out_dir / "manifest.json",
             manifest_json(config, result.status, result.wall_seconds, listed), files);
  return files;
}

FileManifest write_warmup_results(const WarmupResult& result, const ExperimentConfig& config,
                                  const std::filesystem::path& out_dir) {
  prepare_dir(out_dir);
  FileManifest files;
  write_file(out_dir / "warmup.csv", warmup_csv(result.records), files);
  write_file(out_dir / "curves.csv", curves_csv(result.curves), files);
  FileManifest listed = files;
  listed.files.push_back(out_dir / "manifest.json");
  write_file(out_dir / "manifest.json",
             manifest_json(config, result.status, result.wall_seconds, listed), files);
  return files;
}

std::string render_curves_svg(const std::vector<AggregateCurve>& curves, std::string_view title) {
  constexpr double W = 720, H = 440, L = 60, R = 150, T = 40, B = 50;
  static constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                             "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  std::vector<std::string> labels;
  double t_min = 1e300, t_max = -1e300, y_min = 1e300, y_max = -1e300;
  for (const auto& c : curves) {
    if (std::find(labels.begin(), labels.end(), c.strategy) == labels.end()) labels.push_back(c.strategy);
    t_min = std::min(t_min, double(c.t));
    t_max = std::max(t_max, double(c.t));
    y_min = std::min(y_min, c.ci_lo);
    y_max = std::max(y_max, c.ci_hi);
  }
  if (curves.empty()) t_min = 0, t_max = 1, y_min = 0, y_max = 1;
  if (t_max <= t_min) t_max = t_min + 1;
  if (y_max <= y_min) y_max = y_min + 1e-3;
  const double pad = 0.05 * (y_max - y_min);
  y_min -= pad;
  y_max += pad;
  const auto px = [&](double t) { return L + (t - t_min) / (t_max - t_min) * (W - L - R); };
  const auto py = [&](double y) { return H - B - (y - y_min) / (y_max - y_min) * (H - T - B); };
  const auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  const auto escape = [](std::string_view s) {
    std::string out;
    for (char ch : s) {
      if (ch == '<') out += "&lt;";
      else if (ch == '>') out += "&gt;";
      else if (ch == '&') out += "&amp;";
      else out += ch;
    }
    return out;
  };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" +
                    num(H) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
         escape(title) + "</text>\n";
  svg += "<line x1=\"" + num(L) + "\" y1=\"" + num(H - B) + "\" x2=\"" + num(W - R) + "\" y2=\"" +
         num(H - B) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + num(L) + "\" y1=\"" + num(T) + "\" x2=\"" + num(L) + "\" y2=\"" +
         num(H - B) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = y_min + (y_max - y_min) * i / 4.0;
    const double t = t_min + (t_max - t_min) * i / 4.0;
    svg += "<text x=\"" + num(L - 6) + "\" y=\"" + num(py(y) + 4) + "\" text-anchor=\"end\">" +
           num(y) + "</text>\n";
    svg += "<text x=\"" + num(px(t)) + "\" y=\"" + num(H - B + 18) + "\" text-anchor=\"middle\">" +
           num(t) + "</text>\n";
  }
  svg += "<text x=\"" + num((L + W - R) / 2) + "\" y=\"" + num(H - 12) +
         "\" text-anchor=\"middle\">demonstrations</text>\n";

  for (std::size_t li = 0; li < labels.size(); ++li) {
    const std::string color = kPalette[li % std::size(kPalette)];
    std::vector<const AggregateCurve*> pts;
    for (const auto& c : curves) {
      if (c.strategy == labels[li]) pts.push_back(&c);
    }
    std::sort(pts.begin(), pts.end(), [](auto* a, auto* b) { return a->t < b->t; });
    std::string band, line;
    for (const auto* p : pts) band += num(px(p->t)) + "," + num(py(p->ci_hi)) + " ";
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
      band += num(px((*it)->t)) + "," + num(py((*it)->ci_lo)) + " ";
    }
    for (const auto* p : pts) line += num(px(p->t)) + "," + num(py(p->mean)) + " ";
    svg += "<polygon points=\"" + band + "\" fill=\"" + color + "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
    svg += "<polyline points=\"" + line + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.8\"/>\n";
    const double ly = T + 10 + 18.0 * static_cast<double>(li);
    svg += "<line x1=\"" + num(W - R + 12) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(W - R + 32) +
           "\" y2=\"" + num(ly) + "\" stroke=\"" + color + "\" stroke-width=\"3\"/>\n";
    svg += "<text x=\"" + num(W - R + 38) + "\" y=\"" + num(ly + 4) + "\">" + escape(labels[li]) +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string counterexample_summary_json(std::span<const Rational> mixtures) {
  const CounterexampleMdp mdp = build_counterexample();
  const auto str = [](const Rational& r) {
    return r.denominator() == 1 ? std::to_string(r.numerator())
                                : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
  };
  const auto describe = [&](const std::string& name, const Rational& p_left) {
    Json policy;
    policy["policy"] = name;
    policy["p_left"] = str(p_left);
    const auto marginals = counterexample_marginals<Rational>(mdp, p_left);
    Json dims = Json::array();
    for (int d = 0; d < 2; ++d) {
      Json dim = Json::array();
      for (const auto& [pair, prob] : marginals[static_cast<std::size_t>(d)]) {
        dim.push_back({{"trajectory", {pair.first, pair.second}}, {"probability", str(prob)}});
      }
      dims.push_back(dim);
    }
    policy["marginals"] = dims;
    policy["value"] = str(counterexample_value<Rational>(mdp, p_left));
    return policy;
  };
  Json out;
  out["states"] = CounterexampleMdp::kStates;
  out["horizon"] = CounterexampleMdp::kHorizon;
  Json policies = Json::array();
  policies.push_back(describe("always-left", Rational(1)));
  policies.push_back(describe("always-right", Rational(0)));
  for (const auto& p : mixtures) {
    if (p < Rational(0) || p > Rational(1)) throw InvalidParam("mixture probability outside [0, 1]");
    policies.push_back(describe("mixture", p));
  }
  out["policies"] = policies;
  return out.dump(2) + "\n";
}

}  // namespace persplab
