#include "gtshap/exact.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gtshap/numeric.hpp"

namespace gtshap {

namespace {

void check_exact_size(int n_players, int limit, const char* what) {
  if (n_players < 1) {
    throw std::invalid_argument(std::string(what) + ": n_players must be >= 1");
  }
  if (n_players > limit) {
    throw std::invalid_argument(std::string(what) + ": n_players " + std::to_string(n_players) +
                                " exceeds the enumeration limit of " + std::to_string(limit));
  }
}

}  // namespace

std::vector<double> build_full_table(const UtilitySpec& u, EvalCache* cache) {
  check_exact_size(u.n_players, kMaxExactPlayers, "build_full_table");
  const std::size_t size = std::size_t{1} << u.n_players;
  std::vector<double> table(size);
  for (std::size_t mask = 0; mask < size; ++mask) {
    table[mask] = cached_evaluate(u, Coalition::from_mask(mask, u.n_players), cache);
  }
  return table;
}

ShapleyVector exact_shapley(const UtilitySpec& u, EvalCache* cache) {
  check_exact_size(u.n_players, kMaxExactPlayers, "exact_shapley");
  const int n = u.n_players;
  const std::vector<double> table = build_full_table(u, cache);

  // weight[k] applies to a marginal contribution over a coalition of size
  // k-1 (i.e. |S ∪ i| = k): 1 / (N * C(N-1, k-1)). All binomials here are
  // exact in 64-bit integers for N <= 20.
  std::vector<double> weight(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 1; k <= n; ++k) {
    weight[static_cast<std::size_t>(k)] =
        1.0 / (static_cast<double>(n) * static_cast<double>(binomial(n - 1, k - 1)));
  }

  ShapleyVector phi;
  phi.values.resize(static_cast<std::size_t>(n));
  const std::size_t size = std::size_t{1} << n;
  for (int i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    NeumaierSum sum;
    for (std::size_t mask = 0; mask < size; ++mask) {
      if (mask & bit) continue;
      const int k = std::popcount(mask) + 1;
      sum.add(weight[static_cast<std::size_t>(k)] * (table[mask | bit] - table[mask]));
    }
    phi.values[static_cast<std::size_t>(i)] = sum.value();
  }
  return phi;
}

ShapleyVector exact_shapley_by_permutations(const UtilitySpec& u, EvalCache* cache) {
  check_exact_size(u.n_players, 9, "exact_shapley_by_permutations");
  const int n = u.n_players;
  const std::vector<double> table = build_full_table(u, cache);

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);

  std::vector<NeumaierSum> contribution(static_cast<std::size_t>(n));
  std::uint64_t permutation_count = 0;
  do {
    ++permutation_count;
    std::size_t mask = 0;
    double previous = table[0];
    for (int idx : order) {
      mask |= std::size_t{1} << idx;
      const double current = table[mask];
      contribution[static_cast<std::size_t>(idx)].add(current - previous);
      previous = current;
    }
  } while (std::next_permutation(order.begin(), order.end()));

  ShapleyVector phi;
  phi.values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    phi.values[static_cast<std::size_t>(i)] =
        contribution[static_cast<std::size_t>(i)].value() / static_cast<double>(permutation_count);
  }
  return phi;
}

double exact_pair_difference(const UtilitySpec& u, int i, int j, EvalCache* cache) {
  check_exact_size(u.n_players, kMaxExactPlayers, "exact_pair_difference");
  const int n = u.n_players;
  if (i == j) {
    throw std::invalid_argument("exact_pair_difference: players must be distinct, got i = j = " +
                                std::to_string(i));
  }
  if (i < 0 || i >= n || j < 0 || j >= n) {
    throw std::out_of_range("exact_pair_difference: player index out of range");
  }
  const std::vector<double> table = build_full_table(u, cache);

  std::vector<double> weight(static_cast<std::size_t>(n) - 1, 0.0);
  for (int k = 0; k <= n - 2; ++k) {
    weight[static_cast<std::size_t>(k)] =
        1.0 / (static_cast<double>(n - 1) * static_cast<double>(binomial(n - 2, k)));
  }

  const std::size_t bit_i = std::size_t{1} << i;
  const std::size_t bit_j = std::size_t{1} << j;
  const std::size_t size = std::size_t{1} << n;
  NeumaierSum sum;
  for (std::size_t mask = 0; mask < size; ++mask) {
    if (mask & (bit_i | bit_j)) continue;
    const int k = std::popcount(mask);
    sum.add(weight[static_cast<std::size_t>(k)] * (table[mask | bit_i] - table[mask | bit_j]));
  }
  return sum.value();
}

double exact_statistic_expectation(const SamplingDistribution& dist, const UtilitySpec& u, int i,
                                   int j, EvalCache* cache) {
  const int m = dist.n_effective;
  if (u.n_players != m) {
    throw std::invalid_argument(
        "exact_statistic_expectation: utility spans " + std::to_string(u.n_players) +
        " players but the distribution samples subsets of " + std::to_string(m) +
        " (augment the game first for the augmented variant)");
  }
  if (m > 14) {
    throw std::invalid_argument("exact_statistic_expectation: n_effective " + std::to_string(m) +
                                " exceeds the enumeration limit of 14");
  }
  if (i == j) {
    throw std::invalid_argument("exact_statistic_expectation: indices must be distinct");
  }
  if (i < 0 || i >= m || j < 0 || j >= m) {
    throw std::out_of_range("exact_statistic_expectation: index out of range");
  }
  const std::vector<double> table = build_full_table(u, cache);

  // weight per subset of size k: q_k / C(m, k), zero outside 1..m-1.
  std::vector<double> weight(static_cast<std::size_t>(m) + 1, 0.0);
  for (int k = 1; k <= dist.max_size(); ++k) {
    weight[static_cast<std::size_t>(k)] =
        dist.q[static_cast<std::size_t>(k - 1)] / static_cast<double>(binomial(m, k));
  }

  const std::size_t bit_i = std::size_t{1} << i;
  const std::size_t bit_j = std::size_t{1} << j;
  const std::size_t size = std::size_t{1} << m;
  NeumaierSum sum;
  for (std::size_t mask = 0; mask < size; ++mask) {
    const bool has_i = (mask & bit_i) != 0;
    const bool has_j = (mask & bit_j) != 0;
    if (has_i == has_j) continue;
    const int k = std::popcount(mask);
    const double sign = has_i ? 1.0 : -1.0;
    sum.add(sign * weight[static_cast<std::size_t>(k)] * table[mask]);
  }
  return sum.value();
}

}  // namespace gtshap
