#pragma once

#include <vector>

#include "gtshap/sampling.hpp"
#include "gtshap/utility.hpp"

namespace gtshap {

/// Full utility table indexed by coalition bitmask (table[mask] = U(S)),
/// built through the optional cache. Requires u.n_players <= 20.
std::vector<double> build_full_table(const UtilitySpec& u, EvalCache* cache = nullptr);

/// Exact attribution by direct evaluation of the size-stratified sum: for
/// each player i, average the marginal contribution U(S ∪ i) - U(S) over
/// subset sizes with exact integer binomial weights. One utility
/// evaluation per subset (2^N through the cache). Requires n_players <= 20.
ShapleyVector exact_shapley(const UtilitySpec& u, EvalCache* cache = nullptr);

/// Independent cross-check: averages marginal contributions over all N!
/// player orderings. Same answer as exact_shapley by a different
/// enumeration. Requires n_players <= 9.
ShapleyVector exact_shapley_by_permutations(const UtilitySpec& u, EvalCache* cache = nullptr);

/// Exact attribution difference phi_i - phi_j as a single sum over the
/// 2^(N-2) subsets avoiding both players:
///
///   (1/(N-1)) * sum_S C(N-2, |S|)^{-1} [U(S ∪ i) - U(S ∪ j)].
///
/// Requires i != j and n_players <= 20.
double exact_pair_difference(const UtilitySpec& u, int i, int j, EvalCache* cache = nullptr);

/// Exact expectation of the unscaled single-sample difference statistic
/// (beta_i - beta_j) * U(S) under `dist`, by full enumeration of every
/// (size, subset) pair. Multiplying by dist.Z gives the exact attribution
/// difference phi_i - phi_j; with the augmented variant and j = the pivot
/// index it gives phi_i itself. u must span dist.n_effective players
/// (i.e. pass the pivot-augmented game for the augmented variant).
/// Requires dist.n_effective <= 14.
double exact_statistic_expectation(const SamplingDistribution& dist, const UtilitySpec& u, int i,
                                   int j, EvalCache* cache = nullptr);

}  // namespace gtshap
