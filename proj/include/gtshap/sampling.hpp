#pragma once

#include <string>
#include <vector>

#include "gtshap/coalition.hpp"
#include "gtshap/rng.hpp"

namespace gtshap {

/// Which size-biased coalition distribution to build:
///  - original:  sizes k = 1..N-1 over the N real players
///  - augmented: sizes k = 1..N over the N real players plus one appended
///    pivot player at index N (n_effective = N + 1)
enum class DistributionVariant { original, augmented };

std::string to_string(DistributionVariant variant);

/// The size distribution both group-testing estimators draw from. With
/// M := n_effective, the support is k = 1..M-1 and
///
///   Z = 2 * sum_{k=1}^{M-1} 1/k,      q_k = (1/Z) * (1/k + 1/(M-k)).
///
/// q is symmetric (q_k = q_{M-k}) and sums to 1. Z is also the scale of
/// the single-sample difference statistic.
struct SamplingDistribution {
  DistributionVariant variant = DistributionVariant::original;
  int n_players = 0;    // number of real players N
  int n_effective = 0;  // N (original) or N + 1 (augmented)
  double Z = 0.0;
  std::vector<double> q;           // q[k-1] = q_k, k = 1..n_effective-1
  std::vector<double> cumulative;  // cumulative[k-1] = q_1 + ... + q_k

  int max_size() const { return n_effective - 1; }
  /// Index of the appended pivot player (augmented variant only).
  int pivot_index() const { return n_players; }
};

/// Builds the distribution for n_players real players. The original
/// variant needs n_players >= 2 (a pair of distinct players to compare);
/// the augmented variant accepts n_players >= 1 because the appended pivot
/// supplies the second index.
SamplingDistribution build_distribution(int n_players, DistributionVariant variant);

/// One draw: size k by inverse-CDF over the precomputed cumulative
/// weights, then a uniform size-k subset of {0..n_effective-1} via partial
/// Fisher-Yates. Consumes exactly one next_unit() and k next_below()
/// calls, in that order, so the stream layout is part of the
/// reproducibility contract.
Coalition draw_coalition(const SamplingDistribution& dist, Xoshiro256StarStar& rng);

/// Probability that a sampled coalition treats a fixed pair of distinct
/// indices identically (both in or both out), i.e. contributes nothing to
/// their difference estimate. Closed form; equals 1 - 2/Z.
double q_tot(const SamplingDistribution& dist);

}  // namespace gtshap
