#include "gtshap/estimators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gtshap/numeric.hpp"

namespace gtshap {

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

std::string to_string(EstimatorMethod method) {
  switch (method) {
    case EstimatorMethod::permutation: return "perm";
    case EstimatorMethod::gt_original: return "gt";
    case EstimatorMethod::gt_improved: return "gt-improved";
  }
  throw std::logic_error("to_string(EstimatorMethod): unknown value");
}

EstimatorMethod method_from_string(const std::string& name) {
  if (name == "perm") return EstimatorMethod::permutation;
  if (name == "gt") return EstimatorMethod::gt_original;
  if (name == "gt-improved") return EstimatorMethod::gt_improved;
  throw std::invalid_argument("unknown estimator method '" + name +
                              "' (expected perm, gt, or gt-improved)");
}

DifferenceMatrix DifferenceMatrix::all_pairs(int n_players) {
  if (n_players < 2) {
    throw std::invalid_argument("DifferenceMatrix::all_pairs needs n_players >= 2");
  }
  DifferenceMatrix d;
  d.form = DifferenceForm::all_pairs;
  d.n_players = n_players;
  d.values.assign(static_cast<std::size_t>(n_players) * (n_players - 1) / 2, 0.0);
  return d;
}

DifferenceMatrix DifferenceMatrix::pivot_column(int n_players) {
  if (n_players < 1) {
    throw std::invalid_argument("DifferenceMatrix::pivot_column needs n_players >= 1");
  }
  DifferenceMatrix d;
  d.form = DifferenceForm::pivot;
  d.n_players = n_players;
  d.values.assign(static_cast<std::size_t>(n_players), 0.0);
  return d;
}

std::size_t DifferenceMatrix::pair_index(int i, int j) const {
  // Caller guarantees 0 <= i < j < n_players.
  const std::size_t n = static_cast<std::size_t>(n_players);
  const std::size_t si = static_cast<std::size_t>(i);
  const std::size_t sj = static_cast<std::size_t>(j);
  return si * (2 * n - si - 1) / 2 + (sj - si - 1);
}

double DifferenceMatrix::get(int i, int j) const {
  if (form != DifferenceForm::all_pairs) {
    throw std::logic_error("DifferenceMatrix::get requires the all_pairs form");
  }
  if (i == j) {
    throw std::invalid_argument("DifferenceMatrix::get: players must be distinct");
  }
  if (i < 0 || i >= n_players || j < 0 || j >= n_players) {
    throw std::out_of_range("DifferenceMatrix::get: player index out of range");
  }
  if (i < j) return values[pair_index(i, j)];
  return -values[pair_index(j, i)];
}

void DifferenceMatrix::set(int i, int j, double value) {
  if (form != DifferenceForm::all_pairs) {
    throw std::logic_error("DifferenceMatrix::set requires the all_pairs form");
  }
  if (i == j) {
    throw std::invalid_argument("DifferenceMatrix::set: players must be distinct");
  }
  if (i < 0 || i >= n_players || j < 0 || j >= n_players) {
    throw std::out_of_range("DifferenceMatrix::set: player index out of range");
  }
  if (i < j) {
    values[pair_index(i, j)] = value;
  } else {
    values[pair_index(j, i)] = -value;
  }
}

double DifferenceMatrix::pivot_delta(int i) const {
  if (form != DifferenceForm::pivot) {
    throw std::logic_error("DifferenceMatrix::pivot_delta requires the pivot form");
  }
  if (i < 0 || i >= n_players) {
    throw std::out_of_range("DifferenceMatrix::pivot_delta: player index out of range");
  }
  return values[static_cast<std::size_t>(i)];
}

EstimationReport permutation_sampling_estimate(const UtilitySpec& u, std::int64_t n_permutations,
                                               std::uint64_t seed, EvalCache* cache) {
  if (n_permutations < 1) {
    throw std::invalid_argument("permutation_sampling_estimate needs n_permutations >= 1");
  }
  if (u.n_players < 1) {
    throw std::invalid_argument("permutation_sampling_estimate needs n_players >= 1");
  }
  Stopwatch clock;
  EvalCache local;
  EvalCache* c = cache != nullptr ? cache : &local;
  const std::uint64_t misses_before = c->misses();
  const int n = u.n_players;

  const double baseline = c->evaluate(u, Coalition(n));

  std::vector<NeumaierSum> contribution(static_cast<std::size_t>(n));
  std::vector<int> order(static_cast<std::size_t>(n));
  for (std::int64_t t = 0; t < n_permutations; ++t) {
    Xoshiro256StarStar rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    std::iota(order.begin(), order.end(), 0);
    for (int a = 0; a < n - 1; ++a) {
      const int b = a + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - a)));
      std::swap(order[static_cast<std::size_t>(a)], order[static_cast<std::size_t>(b)]);
    }
    Coalition prefix(n);
    double previous = baseline;
    for (int idx : order) {
      prefix.add(idx);
      const double current = c->evaluate(u, prefix);
      contribution[static_cast<std::size_t>(idx)].add(current - previous);
      previous = current;
    }
  }

  EstimationReport report;
  report.method = EstimatorMethod::permutation;
  report.T = n_permutations;
  report.seed = seed;
  report.phi_hat.values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    report.phi_hat.values[static_cast<std::size_t>(i)] =
        contribution[static_cast<std::size_t>(i)].value() / static_cast<double>(n_permutations);
  }
  report.utility_evals = static_cast<std::int64_t>(c->misses() - misses_before);
  report.elapsed_seconds = clock.seconds();
  return report;
}

SampleBatch collect_samples(const UtilitySpec& u_effective, const SamplingDistribution& dist,
                            std::int64_t T, std::uint64_t seed, EvalCache* cache) {
  if (T < 1) {
    throw std::invalid_argument("collect_samples needs T >= 1");
  }
  if (u_effective.n_players != dist.n_effective) {
    throw std::invalid_argument("collect_samples: utility spans " +
                                std::to_string(u_effective.n_players) +
                                " players but the distribution samples subsets of " +
                                std::to_string(dist.n_effective));
  }
  SampleBatch batch;
  batch.dist = dist;
  batch.seed = seed;
  batch.memberships.reserve(static_cast<std::size_t>(T));
  batch.utilities.reserve(static_cast<std::size_t>(T));
  batch.baseline = cached_evaluate(u_effective, Coalition(dist.n_effective), cache);
  for (std::int64_t t = 0; t < T; ++t) {
    Xoshiro256StarStar rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    Coalition s = draw_coalition(dist, rng);
    batch.utilities.push_back(cached_evaluate(u_effective, s, cache));
    batch.memberships.push_back(std::move(s));
  }
  return batch;
}

namespace {

/// Per-player weighted presence sums a_i = (Z/T) * sum_t (u_t - baseline) * B_ti.
/// Every pairwise difference estimate is a_i - a_j by linearity.
std::vector<double> weighted_presence_sums(const SampleBatch& batch) {
  const int m = batch.dist.n_effective;
  std::vector<NeumaierSum> sums(static_cast<std::size_t>(m));
  for (std::size_t t = 0; t < batch.memberships.size(); ++t) {
    const double shifted = batch.utilities[t] - batch.baseline;
    if (shifted == 0.0) continue;
    for (int i : batch.memberships[t].indices()) {
      sums[static_cast<std::size_t>(i)].add(shifted);
    }
  }
  const double scale = batch.dist.Z / static_cast<double>(batch.size());
  std::vector<double> a(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) a[static_cast<std::size_t>(i)] = scale * sums[static_cast<std::size_t>(i)].value();
  return a;
}

}  // namespace

DifferenceMatrix estimate_pair_differences(const SampleBatch& batch) {
  const int n = batch.dist.n_players;
  if (n < 2) {
    throw std::invalid_argument("estimate_pair_differences (all pairs) needs n_players >= 2");
  }
  const std::vector<double> a = weighted_presence_sums(batch);
  DifferenceMatrix d = DifferenceMatrix::all_pairs(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      d.set(i, j, a[static_cast<std::size_t>(i)] - a[static_cast<std::size_t>(j)]);
    }
  }
  return d;
}

DifferenceMatrix estimate_pair_differences(const SampleBatch& batch, int pivot) {
  if (batch.dist.variant != DistributionVariant::augmented) {
    throw std::invalid_argument(
        "estimate_pair_differences (pivot form) needs an augmented-variant batch");
  }
  if (pivot != batch.dist.pivot_index()) {
    throw std::invalid_argument("estimate_pair_differences: pivot must be the appended dummy (index " +
                                std::to_string(batch.dist.pivot_index()) + "), got " +
                                std::to_string(pivot));
  }
  const int n = batch.dist.n_players;
  const std::vector<double> a = weighted_presence_sums(batch);
  DifferenceMatrix d = DifferenceMatrix::pivot_column(n);
  const double a_pivot = a[static_cast<std::size_t>(pivot)];
  for (int i = 0; i < n; ++i) {
    d.values[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)] - a_pivot;
  }
  return d;
}

FeasibilityResult solve_feasibility(const DifferenceMatrix& deltas, double net_total,
                                    double tolerance) {
  if (deltas.form != DifferenceForm::all_pairs) {
    throw std::invalid_argument("solve_feasibility needs the all_pairs difference form");
  }
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("solve_feasibility needs tolerance > 0");
  }
  const int n = deltas.n_players;
  FeasibilityResult result;
  result.phi_hat.values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    NeumaierSum row;
    for (int j = 0; j < n; ++j) {
      if (j != i) row.add(deltas.get(i, j));
    }
    result.phi_hat.values[static_cast<std::size_t>(i)] =
        (net_total + row.value()) / static_cast<double>(n);
  }
  double residual = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double gap = (result.phi_hat.values[static_cast<std::size_t>(i)] -
                          result.phi_hat.values[static_cast<std::size_t>(j)]) -
                         deltas.get(i, j);
      residual = std::max(residual, std::abs(gap));
    }
  }
  result.residual = residual;
  result.feasible = residual <= tolerance;
  return result;
}

EstimationReport group_testing_original_estimate(const UtilitySpec& u, std::int64_t T,
                                                 double epsilon, std::uint64_t seed,
                                                 EvalCache* cache) {
  if (u.n_players < 2) {
    throw std::invalid_argument("group_testing_original_estimate needs n_players >= 2");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("group_testing_original_estimate needs epsilon > 0");
  }
  Stopwatch clock;
  EvalCache local;
  EvalCache* c = cache != nullptr ? cache : &local;
  const std::uint64_t misses_before = c->misses();

  const SamplingDistribution dist = build_distribution(u.n_players, DistributionVariant::original);
  const SampleBatch batch = collect_samples(u, dist, T, seed, c);
  const DifferenceMatrix deltas = estimate_pair_differences(batch);
  const double total = c->evaluate(u, Coalition::full(u.n_players));
  const double tolerance = epsilon / (2.0 * std::sqrt(static_cast<double>(u.n_players)));
  const FeasibilityResult feasibility =
      solve_feasibility(deltas, total - batch.baseline, tolerance);

  EstimationReport report;
  report.phi_hat = feasibility.phi_hat;
  report.method = EstimatorMethod::gt_original;
  report.T = T;
  report.seed = seed;
  report.epsilon = epsilon;
  report.residual = feasibility.residual;
  report.feasible = feasibility.feasible;
  report.utility_evals = static_cast<std::int64_t>(c->misses() - misses_before);
  report.elapsed_seconds = clock.seconds();
  return report;
}

UtilitySpec augment_with_dummy(const UtilitySpec& u) {
  if (u.n_players < 1) {
    throw std::invalid_argument("augment_with_dummy needs n_players >= 1");
  }
  if (u.n_players >= kMaxPlayers) {
    throw std::invalid_argument("augment_with_dummy: cannot exceed " +
                                std::to_string(kMaxPlayers) + " players");
  }
  UtilitySpec out;
  out.n_players = u.n_players + 1;
  out.label = u.label + "+dummy";
  out.evaluate = [inner = u.evaluate, n = u.n_players](const Coalition& s) {
    return inner(s.truncated(n));
  };
  if (u.known_shapley.has_value()) {
    out.known_shapley = *u.known_shapley;
    out.known_shapley->push_back(0.0);
  }
  return out;
}

EstimationReport group_testing_improved_estimate(const UtilitySpec& u, std::int64_t T,
                                                 std::uint64_t seed, EvalCache* cache) {
  if (u.n_players < 1) {
    throw std::invalid_argument("group_testing_improved_estimate needs n_players >= 1");
  }
  Stopwatch clock;
  EvalCache local;
  EvalCache* c = cache != nullptr ? cache : &local;
  const std::uint64_t misses_before = c->misses();

  // The augmented view caches at the original width, so entries are shared
  // with every other consumer of the same cache.
  UtilitySpec u_aug;
  u_aug.n_players = u.n_players + 1;
  u_aug.label = u.label + "+dummy";
  u_aug.evaluate = [&u, c](const Coalition& s) { return c->evaluate(u, s.truncated(u.n_players)); };

  const SamplingDistribution dist =
      build_distribution(u.n_players, DistributionVariant::augmented);
  const SampleBatch batch = collect_samples(u_aug, dist, T, seed, nullptr);
  const DifferenceMatrix deltas = estimate_pair_differences(batch, dist.pivot_index());

  EstimationReport report;
  report.method = EstimatorMethod::gt_improved;
  report.T = T;
  report.seed = seed;
  report.phi_hat.values.resize(static_cast<std::size_t>(u.n_players));
  for (int i = 0; i < u.n_players; ++i) {
    report.phi_hat.values[static_cast<std::size_t>(i)] = deltas.pivot_delta(i);
  }
  report.utility_evals = static_cast<std::int64_t>(c->misses() - misses_before);
  report.elapsed_seconds = clock.seconds();
  return report;
}

ReuseDiagnostics sample_reuse_diagnostics(const SampleBatch& batch, int i, int j) {
  if (i == j) {
    throw std::invalid_argument("sample_reuse_diagnostics: players must be distinct");
  }
  const int m = batch.dist.n_effective;
  if (i < 0 || i >= m || j < 0 || j >= m) {
    throw std::out_of_range("sample_reuse_diagnostics: index out of range");
  }
  std::int64_t effective = 0;
  for (const Coalition& s : batch.memberships) {
    if (s.contains(i) != s.contains(j)) ++effective;
  }
  ReuseDiagnostics diag;
  diag.effective_fraction = static_cast<double>(effective) / static_cast<double>(batch.size());
  diag.expected_fraction = 1.0 - q_tot(batch.dist);
  return diag;
}

}  // namespace gtshap
