#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gtshap/bounds.hpp"
#include "gtshap/estimators.hpp"
#include "gtshap/games.hpp"

namespace gtshap {

/// Settings shared by the experiment subcommands (estimate, coverage,
/// bench). Built from CLI flags, optionally overlaid on a key=value
/// config file (flags win).
struct ExperimentConfig {
  std::string game_path;
  std::vector<EstimatorMethod> methods;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::vector<std::int64_t> budgets;  // explicit T values; empty = derive from bounds
  int n_trials = 100;
  std::uint64_t master_seed = 0;
  std::optional<std::string> out_path;
  std::optional<std::string> cache_path;
  bool check = false;
};

/// One seeded estimation scored against the exact oracle.
struct TrialRecord {
  EstimatorMethod method = EstimatorMethod::permutation;
  int trial_index = 0;
  std::int64_t T = 0;
  double l2_error = 0.0;
  double linf_error = 0.0;
  std::int64_t utility_evals = 0;
  std::optional<double> residual;
  std::uint64_t seed = 0;
};

/// Bound-derived sample budget for one method: required_T for the two
/// group-testing variants, required_permutations for perm.
std::int64_t derive_budget(EstimatorMethod method, int n_players, double epsilon, double delta);

/// Entry point behind main(). Returns the process exit status.
int run_cli(int argc, const char* const* argv);

}  // namespace gtshap
