#include "gtshap/harness.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "gtshap/exact.hpp"
#include "gtshap/format.hpp"

namespace gtshap {

namespace {

// ---------------------------------------------------------------------------
// key=value config files (same shape as game definition files)

std::string trim_copy(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::map<std::string, std::string> parse_kv_text(const std::string& text,
                                                 const std::string& origin) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    line = trim_copy(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(origin + " line " + std::to_string(line_no) +
                                  " is not key=value: '" + line + "'");
    }
    kv[trim_copy(line.substr(0, eq))] = trim_copy(line.substr(eq + 1));
  }
  return kv;
}

std::map<std::string, std::string> load_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file '" + path + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_kv_text(buffer.str(), "config file '" + path + "'");
}

double parse_real(const std::string& s, const std::string& what) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
    throw std::invalid_argument(what + ": invalid real '" + s + "'");
  }
  return v;
}

std::int64_t parse_i64(const std::string& s, const std::string& what) {
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
    throw std::invalid_argument(what + ": invalid integer '" + s + "'");
  }
  return static_cast<std::int64_t>(v);
}

std::uint64_t parse_seed(const std::string& s, const std::string& what) {
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
    throw std::invalid_argument(what + ": invalid seed '" + s + "'");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim_copy(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<EstimatorMethod> parse_methods(const std::string& s) {
  std::vector<EstimatorMethod> methods;
  for (const std::string& name : split_list(s)) methods.push_back(method_from_string(name));
  if (methods.empty()) {
    throw std::invalid_argument("--method: empty method list");
  }
  return methods;
}

std::vector<std::int64_t> parse_budgets(const std::string& s) {
  std::vector<std::int64_t> budgets;
  for (const std::string& item : split_list(s)) {
    std::int64_t b = parse_i64(item, "--budgets");
    if (b < 1) {
      throw std::invalid_argument("--budgets: budgets must be >= 1");
    }
    budgets.push_back(b);
  }
  return budgets;
}

// ---------------------------------------------------------------------------
// string-value merging: CLI flag beats config file beats built-in default

class Setting {
 public:
  Setting(CLI::App* sub, const std::map<std::string, std::string>& kv, std::string flag,
          std::string key, std::string description)
      : key_(std::move(key)) {
    if (auto it = kv.find(key_); it != kv.end()) {
      config_value_ = it->second;
    }
    option_ = sub->add_option(flag, flag_value_, description);
  }

  bool provided() const { return option_->count() > 0 || config_value_.has_value(); }

  std::string value() const {
    if (option_->count() > 0) return flag_value_;
    if (config_value_.has_value()) return *config_value_;
    throw std::logic_error("Setting '" + key_ + "' read without a value");
  }

  std::string value_or(const std::string& fallback) const {
    return provided() ? value() : fallback;
  }

  std::string require() const {
    if (!provided()) {
      throw std::invalid_argument("missing required setting '" + key_ +
                                  "' (flag or config key)");
    }
    return value();
  }

 private:
  std::string key_;
  std::string flag_value_;
  std::optional<std::string> config_value_;
  CLI::Option* option_ = nullptr;
};

// ---------------------------------------------------------------------------
// output plumbing

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << content;
  if (!out) {
    throw std::runtime_error("write to '" + path + "' failed");
  }
}

void emit(const std::optional<std::string>& path, const std::string& content) {
  if (path.has_value()) {
    write_file(*path, content);
  } else {
    std::cout << content;
  }
}

/// "res.csv" + "gt-improved" -> "res.gt-improved.csv" (used when one
/// estimate invocation runs several methods).
std::string per_method_path(const std::string& base, EstimatorMethod method) {
  std::filesystem::path p(base);
  std::filesystem::path stem = p.stem();
  std::filesystem::path ext = p.extension();
  std::filesystem::path dir = p.parent_path();
  std::filesystem::path name = stem;
  name += "." + to_string(method);
  name += ext;
  return (dir / name).string();
}

std::string phi_csv(const std::vector<double>& values, const std::string& value_column) {
  std::string out = "player," + value_column + "\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += std::to_string(i) + "," + format_real(values[i]) + "\n";
  }
  return out;
}

std::string report_meta(const EstimationReport& report) {
  std::string out;
  out += "method=" + to_string(report.method) + "\n";
  out += "T=" + std::to_string(report.T) + "\n";
  out += "seed=" + std::to_string(report.seed) + "\n";
  out += "utility_evals=" + std::to_string(report.utility_evals) + "\n";
  if (report.epsilon.has_value()) out += "epsilon=" + format_real(*report.epsilon) + "\n";
  if (report.delta.has_value()) out += "delta=" + format_real(*report.delta) + "\n";
  if (report.residual.has_value()) out += "residual=" + format_real(*report.residual) + "\n";
  if (report.feasible.has_value()) {
    out += std::string("feasible=") + (*report.feasible ? "true" : "false") + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// shared experiment machinery

struct LoadedCache {
  EvalCache initial;  // state at process start (possibly loaded from disk)
  bool persistent = false;
  std::string path;
};

LoadedCache open_cache(const std::optional<std::string>& cache_path, int n_players) {
  LoadedCache lc;
  if (cache_path.has_value()) {
    lc.persistent = true;
    lc.path = *cache_path;
    if (std::filesystem::exists(lc.path)) {
      lc.initial = EvalCache::load(lc.path, n_players);
    }
  }
  return lc;
}

EstimationReport run_method(const UtilitySpec& u, EstimatorMethod method, std::int64_t T,
                            std::optional<double> epsilon, std::uint64_t seed, EvalCache* cache) {
  switch (method) {
    case EstimatorMethod::permutation:
      return permutation_sampling_estimate(u, T, seed, cache);
    case EstimatorMethod::gt_original:
      if (!epsilon.has_value()) {
        throw std::invalid_argument("method 'gt' needs epsilon for its feasibility tolerance");
      }
      return group_testing_original_estimate(u, T, *epsilon, seed, cache);
    case EstimatorMethod::gt_improved:
      return group_testing_improved_estimate(u, T, seed, cache);
  }
  throw std::logic_error("run_method: unknown method");
}

std::vector<double> oracle_phi(const UtilitySpec& u) {
  if (u.n_players > kMaxExactPlayers) {
    throw std::invalid_argument("scoring against the exact oracle requires n_players <= " +
                                std::to_string(kMaxExactPlayers) + "; game '" + u.label +
                                "' has " + std::to_string(u.n_players));
  }
  EvalCache oracle_cache;  // private: must not warm the experiment cache
  return exact_shapley(u, &oracle_cache).values;
}

}  // namespace

std::int64_t derive_budget(EstimatorMethod method, int n_players, double epsilon, double delta) {
  BoundQuery query;
  query.n_players = n_players;
  query.epsilon = epsilon;
  query.delta = delta;
  query.variant = method;
  if (method == EstimatorMethod::permutation) return required_permutations(query).T;
  return required_T(query).T;
}

namespace {

// ---------------------------------------------------------------------------
// subcommands

struct CommonArgs {
  std::string config_path;
};

std::map<std::string, std::string> maybe_config(const std::string& path) {
  if (path.empty()) return {};
  return load_kv_file(path);
}

int cmd_exact(const std::string& game_path, const std::optional<std::string>& out_path,
              const std::optional<std::string>& cache_path) {
  UtilitySpec game = load_game_file(game_path);
  if (game.n_players > kMaxExactPlayers) {
    throw std::invalid_argument("exact computation requires n_players <= " +
                                std::to_string(kMaxExactPlayers));
  }
  LoadedCache lc = open_cache(cache_path, game.n_players);
  EvalCache cache = lc.initial;
  ShapleyVector phi = exact_shapley(game, &cache);
  emit(out_path, phi_csv(phi.values, "phi"));
  std::cerr << "exact: game=" << game.label << " utility_evals=" << cache.misses() << "\n";
  if (lc.persistent) cache.save(lc.path);
  return 0;
}

int cmd_estimate(const ExperimentConfig& cfg) {
  UtilitySpec game = load_game_file(cfg.game_path);
  if (cfg.methods.empty()) {
    throw std::invalid_argument("estimate: no methods requested");
  }
  if (cfg.budgets.size() > 1) {
    throw std::invalid_argument("estimate: takes a single --budget (use bench for sweeps)");
  }
  if (!cfg.out_path.has_value() && cfg.methods.size() > 1) {
    throw std::invalid_argument("estimate: multiple methods need --out to name output files");
  }

  LoadedCache lc = open_cache(cfg.cache_path, game.n_players);
  // A persistent cache is shared live across the methods of this
  // invocation; without one, each method runs isolated.
  EvalCache shared = lc.initial;

  for (EstimatorMethod method : cfg.methods) {
    std::int64_t T;
    if (!cfg.budgets.empty()) {
      T = cfg.budgets.front();
    } else {
      if (!cfg.epsilon.has_value() || !cfg.delta.has_value()) {
        throw std::invalid_argument(
            "estimate: give --budget, or both --epsilon and --delta to derive it");
      }
      T = derive_budget(method, game.n_players, *cfg.epsilon, *cfg.delta);
    }

    EvalCache isolated = lc.persistent ? EvalCache() : lc.initial;
    EvalCache* cache = lc.persistent ? &shared : &isolated;
    EstimationReport report = run_method(game, method, T, cfg.epsilon, cfg.master_seed, cache);
    report.delta = cfg.delta;

    std::optional<std::string> csv_path;
    if (cfg.out_path.has_value()) {
      csv_path = cfg.methods.size() == 1 ? *cfg.out_path : per_method_path(*cfg.out_path, method);
    }
    emit(csv_path, phi_csv(report.phi_hat.values, "phi_hat"));
    if (csv_path.has_value()) {
      write_file(*csv_path + ".meta", report_meta(report));
    } else {
      std::cerr << report_meta(report);
    }
    std::cerr << "estimate: method=" << to_string(method) << " T=" << report.T
              << " utility_evals=" << report.utility_evals
              << " elapsed_seconds=" << format_real(report.elapsed_seconds) << "\n";
  }
  if (lc.persistent) shared.save(lc.path);
  return 0;
}

int cmd_bound(int n, double epsilon, double delta, EstimatorMethod variant,
              const std::optional<std::string>& out_path) {
  BoundQuery query;
  query.n_players = n;
  query.epsilon = epsilon;
  query.delta = delta;
  query.variant = variant;
  BoundResult result = variant == EstimatorMethod::permutation ? required_permutations(query)
                                                               : required_T(query);
  std::string csv = "variant,n,epsilon,delta,T,utility_evals,Z,q_tot\n";
  csv += to_string(variant) + "," + std::to_string(n) + "," + format_real(epsilon) + "," +
         format_real(delta) + "," + std::to_string(result.T) + "," +
         std::to_string(result.utility_evals) + "," + format_real(result.Z) + "," +
         format_real(result.q_tot) + "\n";
  emit(out_path, csv);
  return 0;
}

std::string trial_csv(const std::vector<TrialRecord>& records) {
  std::string out = "method,trial_index,T,l2_error,linf_error,utility_evals,residual,seed\n";
  for (const TrialRecord& r : records) {
    out += to_string(r.method) + "," + std::to_string(r.trial_index) + "," + std::to_string(r.T) +
           "," + format_real(r.l2_error) + "," + format_real(r.linf_error) + "," +
           std::to_string(r.utility_evals) + "," +
           (r.residual.has_value() ? format_real(*r.residual) : std::string()) + "," +
           std::to_string(r.seed) + "\n";
  }
  return out;
}

void sort_records(std::vector<TrialRecord>& records) {
  std::sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) {
    if (a.method != b.method) return to_string(a.method) < to_string(b.method);
    if (a.T != b.T) return a.T < b.T;
    return a.trial_index < b.trial_index;
  });
}

TrialRecord run_trial(const UtilitySpec& game, EstimatorMethod method, std::int64_t T,
                      std::optional<double> epsilon, int trial_index, std::uint64_t master_seed,
                      const EvalCache& initial_cache, EvalCache* merged,
                      const std::vector<double>& truth) {
  // Each trial runs against a private copy of the starting cache so its
  // reported evaluation count is independent of trial execution order;
  // discoveries are merged back afterwards.
  EvalCache local = initial_cache;
  const std::uint64_t seed = mix_seed(master_seed, static_cast<std::uint64_t>(trial_index));
  EstimationReport report = run_method(game, method, T, epsilon, seed, &local);

  TrialRecord record;
  record.method = method;
  record.trial_index = trial_index;
  record.T = T;
  record.l2_error = l2_distance(report.phi_hat.values, truth);
  record.linf_error = linf_distance(report.phi_hat.values, truth);
  record.utility_evals = report.utility_evals;
  record.residual = report.residual;
  record.seed = seed;
  if (merged != nullptr) merged->merge_from(local);
  return record;
}

int cmd_coverage(const ExperimentConfig& cfg) {
  UtilitySpec game = load_game_file(cfg.game_path);
  if (cfg.methods.empty()) {
    throw std::invalid_argument("coverage: no methods requested");
  }
  if (!cfg.epsilon.has_value() || !cfg.delta.has_value()) {
    throw std::invalid_argument("coverage: needs --epsilon and --delta");
  }
  if (cfg.n_trials < 1) {
    throw std::invalid_argument("coverage: needs --trials >= 1");
  }
  if (cfg.budgets.size() > 1) {
    throw std::invalid_argument("coverage: takes at most one --budget override");
  }
  const std::vector<double> truth = oracle_phi(game);

  LoadedCache lc = open_cache(cfg.cache_path, game.n_players);
  EvalCache merged = lc.initial;

  std::vector<TrialRecord> records;
  std::string summary = "method,T,trials,covered,coverage,epsilon,delta\n";
  bool all_pass = true;
  for (EstimatorMethod method : cfg.methods) {
    const std::int64_t T = cfg.budgets.empty() ? derive_budget(method, game.n_players,
                                                               *cfg.epsilon, *cfg.delta)
                                               : cfg.budgets.front();
    int covered = 0;
    for (int trial = 0; trial < cfg.n_trials; ++trial) {
      TrialRecord record = run_trial(game, method, T, cfg.epsilon, trial, cfg.master_seed,
                                     lc.initial, &merged, truth);
      if (record.l2_error <= *cfg.epsilon) ++covered;
      records.push_back(record);
    }
    const double coverage = static_cast<double>(covered) / static_cast<double>(cfg.n_trials);
    summary += to_string(method) + "," + std::to_string(T) + "," + std::to_string(cfg.n_trials) +
               "," + std::to_string(covered) + "," + format_real(coverage) + "," +
               format_real(*cfg.epsilon) + "," + format_real(*cfg.delta) + "\n";
    if (coverage < 1.0 - *cfg.delta) all_pass = false;
    std::cerr << "coverage: method=" << to_string(method) << " T=" << T
              << " coverage=" << format_real(coverage) << "\n";
  }
  sort_records(records);
  if (cfg.out_path.has_value()) {
    write_file(*cfg.out_path, trial_csv(records));
    write_file(*cfg.out_path + ".summary", summary);
  } else {
    std::cout << trial_csv(records) << summary;
  }
  if (lc.persistent) merged.save(lc.path);
  if (cfg.check && !all_pass) {
    std::cerr << "coverage: --check failed: empirical coverage below 1 - delta\n";
    return 3;
  }
  return 0;
}

int cmd_bench(const ExperimentConfig& cfg) {
  UtilitySpec game = load_game_file(cfg.game_path);
  if (cfg.methods.empty()) {
    throw std::invalid_argument("bench: no methods requested");
  }
  if (cfg.budgets.empty()) {
    throw std::invalid_argument("bench: needs --budgets");
  }
  if (cfg.n_trials < 1) {
    throw std::invalid_argument("bench: needs --trials >= 1");
  }
  const std::vector<double> truth = oracle_phi(game);

  LoadedCache lc = open_cache(cfg.cache_path, game.n_players);
  EvalCache merged = lc.initial;

  std::string csv = "method,T,utility_evals,mean_l2,std_l2\n";
  for (EstimatorMethod method : cfg.methods) {
    for (std::int64_t T : cfg.budgets) {
      double sum_l2 = 0.0, sum_sq = 0.0, sum_evals = 0.0;
      for (int trial = 0; trial < cfg.n_trials; ++trial) {
        TrialRecord record = run_trial(game, method, T, cfg.epsilon, trial, cfg.master_seed,
                                       lc.initial, &merged, truth);
        sum_l2 += record.l2_error;
        sum_sq += record.l2_error * record.l2_error;
        sum_evals += static_cast<double>(record.utility_evals);
      }
      const double inv = 1.0 / static_cast<double>(cfg.n_trials);
      const double mean = sum_l2 * inv;
      const double variance = std::max(0.0, sum_sq * inv - mean * mean);
      csv += to_string(method) + "," + std::to_string(T) + "," + format_real(sum_evals * inv) +
             "," + format_real(mean) + "," + format_real(std::sqrt(variance)) + "\n";
    }
  }
  emit(cfg.out_path, csv);
  if (lc.persistent) merged.save(lc.path);
  return 0;
}

int cmd_diagnose(const std::vector<int>& ns, DistributionVariant variant, std::int64_t empirical_T,
                 std::uint64_t seed, const std::optional<std::string>& out_path) {
  std::string csv = "n,variant,Z,q_tot,effective_fraction,two_over_Z";
  if (empirical_T > 0) csv += ",empirical_fraction";
  csv += "\n";
  for (int n : ns) {
    SamplingDistribution dist = build_distribution(n, variant);
    const double qt = q_tot(dist);
    csv += std::to_string(n) + "," + to_string(variant) + "," + format_real(dist.Z) + "," +
           format_real(qt) + "," + format_real(1.0 - qt) + "," + format_real(2.0 / dist.Z);
    if (empirical_T > 0) {
      // Fixed pair (0, 1); q_tot is the same for every pair.
      std::int64_t effective = 0;
      for (std::int64_t t = 0; t < empirical_T; ++t) {
        Xoshiro256StarStar rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
        Coalition s = draw_coalition(dist, rng);
        if (s.contains(0) != s.contains(1)) ++effective;
      }
      csv += "," + format_real(static_cast<double>(effective) / static_cast<double>(empirical_T));
    }
    csv += "\n";
  }
  emit(out_path, csv);
  return 0;
}

// ---------------------------------------------------------------------------
// flag wiring

std::string find_config_path(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return "";
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  try {
    const std::map<std::string, std::string> kv = maybe_config(find_config_path(argc, argv));

    CLI::App app{"Exact and sampled Shapley-value computation for bounded cooperative games"};
    app.require_subcommand(1);
    std::string config_path;  // consumed above; registered so parsing accepts it

    int exit_status = 0;

    // ---- exact ----
    auto* sub_exact = app.add_subcommand("exact", "Exact attribution by full enumeration");
    sub_exact->add_option("--config", config_path, "key=value defaults file");
    auto ex_game = Setting(sub_exact, kv, "--game", "game", "game definition file");
    auto ex_out = Setting(sub_exact, kv, "--out", "out", "output CSV path (default stdout)");
    auto ex_cache = Setting(sub_exact, kv, "--cache", "cache", "persistent evaluation cache file");
    sub_exact->callback([&] {
      exit_status = cmd_exact(
          ex_game.require(),
          ex_out.provided() ? std::optional<std::string>(ex_out.value()) : std::nullopt,
          ex_cache.provided() ? std::optional<std::string>(ex_cache.value()) : std::nullopt);
    });

    // ---- estimate ----
    auto* sub_est = app.add_subcommand("estimate", "Monte Carlo attribution estimate");
    sub_est->add_option("--config", config_path, "key=value defaults file");
    auto es_game = Setting(sub_est, kv, "--game", "game", "game definition file");
    auto es_method = Setting(sub_est, kv, "--method", "method",
                             "comma list of perm|gt|gt-improved");
    auto es_eps = Setting(sub_est, kv, "--epsilon", "epsilon", "target l2 accuracy");
    auto es_delta = Setting(sub_est, kv, "--delta", "delta", "failure probability");
    auto es_budget = Setting(sub_est, kv, "--budget", "budget",
                             "sample count T (overrides the bound-derived value)");
    auto es_seed = Setting(sub_est, kv, "--seed", "seed", "master seed (default 0)");
    auto es_out = Setting(sub_est, kv, "--out", "out", "output CSV path (default stdout)");
    auto es_cache = Setting(sub_est, kv, "--cache", "cache", "persistent evaluation cache file");
    sub_est->callback([&] {
      ExperimentConfig cfg;
      cfg.game_path = es_game.require();
      cfg.methods = parse_methods(es_method.require());
      if (es_eps.provided()) cfg.epsilon = parse_real(es_eps.value(), "--epsilon");
      if (es_delta.provided()) cfg.delta = parse_real(es_delta.value(), "--delta");
      if (es_budget.provided()) {
        std::int64_t b = parse_i64(es_budget.value(), "--budget");
        if (b < 1) throw std::invalid_argument("--budget must be >= 1");
        cfg.budgets.push_back(b);
      }
      cfg.master_seed = parse_seed(es_seed.value_or("0"), "--seed");
      if (es_out.provided()) cfg.out_path = es_out.value();
      if (es_cache.provided()) cfg.cache_path = es_cache.value();
      exit_status = cmd_estimate(cfg);
    });

    // ---- bound ----
    auto* sub_bound = app.add_subcommand("bound", "Sample-complexity bound calculator");
    sub_bound->add_option("--config", config_path, "key=value defaults file");
    auto bo_n = Setting(sub_bound, kv, "--n", "n", "number of players");
    auto bo_eps = Setting(sub_bound, kv, "--epsilon", "epsilon", "target l2 accuracy");
    auto bo_delta = Setting(sub_bound, kv, "--delta", "delta", "failure probability");
    auto bo_variant = Setting(sub_bound, kv, "--variant", "variant", "gt|gt-improved|perm");
    auto bo_out = Setting(sub_bound, kv, "--out", "out", "output CSV path (default stdout)");
    sub_bound->callback([&] {
      exit_status = cmd_bound(
          static_cast<int>(parse_i64(bo_n.require(), "--n")),
          parse_real(bo_eps.require(), "--epsilon"), parse_real(bo_delta.require(), "--delta"),
          method_from_string(bo_variant.require()),
          bo_out.provided() ? std::optional<std::string>(bo_out.value()) : std::nullopt);
    });

    // ---- coverage ----
    auto* sub_cov = app.add_subcommand(
        "coverage", "Empirical (epsilon, delta) coverage trials against the exact oracle");
    sub_cov->add_option("--config", config_path, "key=value defaults file");
    auto co_game = Setting(sub_cov, kv, "--game", "game", "game definition file");
    auto co_method = Setting(sub_cov, kv, "--method", "method",
                             "comma list of perm|gt|gt-improved");
    auto co_eps = Setting(sub_cov, kv, "--epsilon", "epsilon", "target l2 accuracy");
    auto co_delta = Setting(sub_cov, kv, "--delta", "delta", "failure probability");
    auto co_trials = Setting(sub_cov, kv, "--trials", "trials", "number of trials (default 100)");
    auto co_budget = Setting(sub_cov, kv, "--budget", "budget",
                             "override the bound-derived T for every method");
    auto co_seed = Setting(sub_cov, kv, "--seed", "seed", "master seed (default 0)");
    auto co_out = Setting(sub_cov, kv, "--out", "out",
                          "trial CSV path; summary goes to <out>.summary (default stdout)");
    auto co_cache = Setting(sub_cov, kv, "--cache", "cache", "persistent evaluation cache file");
    bool co_check = false;
    sub_cov->add_flag("--check", co_check, "exit nonzero if coverage < 1 - delta");
    sub_cov->callback([&] {
      ExperimentConfig cfg;
      cfg.game_path = co_game.require();
      cfg.methods = parse_methods(co_method.require());
      cfg.epsilon = parse_real(co_eps.require(), "--epsilon");
      cfg.delta = parse_real(co_delta.require(), "--delta");
      cfg.n_trials = static_cast<int>(parse_i64(co_trials.value_or("100"), "--trials"));
      if (co_budget.provided()) {
        cfg.budgets.push_back(parse_i64(co_budget.value(), "--budget"));
      }
      cfg.master_seed = parse_seed(co_seed.value_or("0"), "--seed");
      if (co_out.provided()) cfg.out_path = co_out.value();
      if (co_cache.provided()) cfg.cache_path = co_cache.value();
      cfg.check = co_check;
      exit_status = cmd_coverage(cfg);
    });

    // ---- bench ----
    auto* sub_bench = app.add_subcommand("bench", "Error-versus-budget convergence table");
    sub_bench->add_option("--config", config_path, "key=value defaults file");
    auto be_game = Setting(sub_bench, kv, "--game", "game", "game definition file");
    auto be_method = Setting(sub_bench, kv, "--method", "method",
                             "comma list of perm|gt|gt-improved");
    auto be_budgets = Setting(sub_bench, kv, "--budgets", "budgets", "comma list of T values");
    auto be_trials = Setting(sub_bench, kv, "--trials", "trials", "trials per cell (default 10)");
    auto be_eps = Setting(sub_bench, kv, "--epsilon", "epsilon",
                          "feasibility tolerance parameter (needed by gt)");
    auto be_seed = Setting(sub_bench, kv, "--seed", "seed", "master seed (default 0)");
    auto be_out = Setting(sub_bench, kv, "--out", "out", "output CSV path (default stdout)");
    auto be_cache = Setting(sub_bench, kv, "--cache", "cache", "persistent evaluation cache file");
    sub_bench->callback([&] {
      ExperimentConfig cfg;
      cfg.game_path = be_game.require();
      cfg.methods = parse_methods(be_method.require());
      cfg.budgets = parse_budgets(be_budgets.require());
      cfg.n_trials = static_cast<int>(parse_i64(be_trials.value_or("10"), "--trials"));
      if (be_eps.provided()) cfg.epsilon = parse_real(be_eps.value(), "--epsilon");
      cfg.master_seed = parse_seed(be_seed.value_or("0"), "--seed");
      if (be_out.provided()) cfg.out_path = be_out.value();
      if (be_cache.provided()) cfg.cache_path = be_cache.value();
      exit_status = cmd_bench(cfg);
    });

    // ---- diagnose ----
    auto* sub_diag = app.add_subcommand(
        "diagnose", "Size-distribution diagnostics: Z, q_tot, effective sample fraction");
    sub_diag->add_option("--config", config_path, "key=value defaults file");
    auto di_n = Setting(sub_diag, kv, "--n", "n", "comma list of player counts");
    auto di_variant = Setting(sub_diag, kv, "--variant", "variant",
                              "original|augmented (default original)");
    auto di_emp = Setting(sub_diag, kv, "--empirical", "empirical",
                          "also measure the fraction from this many draws");
    auto di_seed = Setting(sub_diag, kv, "--seed", "seed", "master seed (default 0)");
    auto di_out = Setting(sub_diag, kv, "--out", "out", "output CSV path (default stdout)");
    sub_diag->callback([&] {
      std::vector<int> ns;
      for (const std::string& item : split_list(di_n.require())) {
        ns.push_back(static_cast<int>(parse_i64(item, "--n")));
      }
      if (ns.empty()) throw std::invalid_argument("--n: empty list");
      const std::string variant_name = di_variant.value_or("original");
      DistributionVariant variant;
      if (variant_name == "original") {
        variant = DistributionVariant::original;
      } else if (variant_name == "augmented") {
        variant = DistributionVariant::augmented;
      } else {
        throw std::invalid_argument("--variant must be original or augmented, got '" +
                                    variant_name + "'");
      }
      const std::int64_t empirical_T =
          di_emp.provided() ? parse_i64(di_emp.value(), "--empirical") : 0;
      exit_status = cmd_diagnose(
          ns, variant, empirical_T, parse_seed(di_seed.value_or("0"), "--seed"),
          di_out.provided() ? std::optional<std::string>(di_out.value()) : std::nullopt);
    });

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      return app.exit(e);
    }
    return exit_status;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace gtshap
