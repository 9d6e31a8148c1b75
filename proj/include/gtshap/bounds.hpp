#pragma once

#include <cstdint>

#include "gtshap/estimators.hpp"

namespace gtshap {

/// A request for the minimal sample count guaranteeing that the chosen
/// estimator lands within l2 distance epsilon of the exact attribution
/// vector with probability at least 1 - delta.
struct BoundQuery {
  int n_players = 0;  // >= 2
  double epsilon = 0.0;
  double delta = 0.0;
  EstimatorMethod variant = EstimatorMethod::gt_original;
};

struct BoundResult {
  std::int64_t T = 0;              // ceil(raw_bound): tests or permutations
  std::int64_t utility_evals = 0;  // T for gt variants; T * (N + 1) for perm
  double Z = 0.0;                  // 0 for perm
  double q_tot = 0.0;              // 0 for perm
  double h_argument = 0.0;         // 0 for perm
  double raw_bound = 0.0;          // real-valued bound before the ceiling
};

/// h(u) = (1 + u) log(1 + u) - u, the rate function of Bennett's
/// inequality. Below u = 1e-4 the two-term series u^2/2 - u^3/6 is used to
/// avoid cancellation. Requires u >= 0.
double bennett_h(double u);

/// Minimal number of sampled coalitions for the group-testing variants.
/// With Z and q_tot from the variant's size distribution (augmented
/// distribution for gt_improved, where M = N + 1):
///
///   gt:          ceil( log(N(N-1)/delta) / ((1-q_tot) h(eps / (2 Z sqrt(N) (1-q_tot)))) )
///   gt-improved: ceil( log(N/delta)      / ((1-q_tot) h(eps / (Z sqrt(N+1) (1-q_tot)))) )
///
/// The identity Z (1 - q_tot) = 2 is asserted internally as a cross-check.
BoundResult required_T(const BoundQuery& query);

/// Hoeffding-based permutation count: each player's mean marginal
/// contribution must land within eps/sqrt(N); contributions span a range
/// of width at most 2; a union bound covers the N players. This yields
///
///   m = ceil( (2 N / eps^2) * log(2 N / delta) )
///
/// permutations, i.e. m * (N + 1) utility evaluations.
BoundResult required_permutations(const BoundQuery& query);

}  // namespace gtshap
