#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gtshap/sampling.hpp"
#include "gtshap/utility.hpp"

namespace gtshap {

enum class EstimatorMethod { permutation, gt_original, gt_improved };

/// CLI spellings: "perm", "gt", "gt-improved".
std::string to_string(EstimatorMethod method);
EstimatorMethod method_from_string(const std::string& name);

/// T sampled coalitions with their utilities. Utilities are stored raw
/// (unshifted, in [0,1]); the empty-set baseline rides along so downstream
/// difference estimation can subtract it. Row t is reproducible on its
/// own: it was drawn from the substream mix_seed(seed, t).
struct SampleBatch {
  SamplingDistribution dist;
  std::vector<Coalition> memberships;  // row t: the sampled coalition B_t
  std::vector<double> utilities;       // row t: U(B_t), raw
  double baseline = 0.0;               // U(empty set)
  std::uint64_t seed = 0;

  std::int64_t size() const { return static_cast<std::int64_t>(memberships.size()); }
};

enum class DifferenceForm { all_pairs, pivot };

/// Estimated attribution differences. Two storage forms:
///  - all_pairs: packed upper triangle over the N real players,
///    entry (i, j) with i < j holding the estimate of phi_i - phi_j
///  - pivot: length-N column of estimates of phi_i - phi_pivot, where the
///    pivot is the appended dummy player (whose exact attribution is 0)
struct DifferenceMatrix {
  DifferenceForm form = DifferenceForm::all_pairs;
  int n_players = 0;
  std::vector<double> values;

  static DifferenceMatrix all_pairs(int n_players);
  static DifferenceMatrix pivot_column(int n_players);

  /// Antisymmetric pair access (all_pairs form): get(i, j) = -get(j, i).
  double get(int i, int j) const;
  void set(int i, int j, double value);

  /// Pivot-column access (pivot form).
  double pivot_delta(int i) const;

 private:
  std::size_t pair_index(int i, int j) const;
};

struct EstimationReport {
  ShapleyVector phi_hat;
  EstimatorMethod method = EstimatorMethod::permutation;
  std::int64_t T = 0;              // permutations (perm) or samples (gt variants)
  std::int64_t utility_evals = 0;  // distinct evaluations = cache misses this run
  std::uint64_t seed = 0;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<double> residual;  // feasibility residual (gt original only)
  std::optional<bool> feasible;    // residual <= tolerance (gt original only)
  double elapsed_seconds = 0.0;    // wall time; never written to output files
};

struct FeasibilityResult {
  ShapleyVector phi_hat;
  double residual = 0.0;
  bool feasible = false;
};

struct ReuseDiagnostics {
  double effective_fraction = 0.0;  // measured share of rows with B_i != B_j
  double expected_fraction = 0.0;   // 1 - q_tot = 2/Z
};

/// Averages marginal contributions over n_permutations uniformly random
/// player orderings, walking each ordering's prefix sets incrementally (N
/// evaluations per ordering plus the empty set once). The estimate's
/// entries always sum to exactly U(full) - U(empty) because each walk
/// telescopes. Permutation t is drawn from substream mix_seed(seed, t).
EstimationReport permutation_sampling_estimate(const UtilitySpec& u, std::int64_t n_permutations,
                                               std::uint64_t seed, EvalCache* cache = nullptr);

/// Draws T coalitions from `dist` (row t from substream mix_seed(seed, t))
/// and evaluates `u_effective` on each through the optional cache.
SampleBatch collect_samples(const UtilitySpec& u_effective, const SamplingDistribution& dist,
                            std::int64_t T, std::uint64_t seed, EvalCache* cache = nullptr);

/// All-pairs difference estimates over the real players:
///   (i, j) entry = (Z/T) * sum_t (u_t - baseline) * (B_ti - B_tj).
DifferenceMatrix estimate_pair_differences(const SampleBatch& batch);

/// Pivot-column form (augmented batches only): entry i estimates
/// phi_i - phi_pivot = phi_i. `pivot` must be batch.dist.pivot_index().
DifferenceMatrix estimate_pair_differences(const SampleBatch& batch, int pivot);

/// Recovers an attribution vector from all-pairs differences under the
/// exact total constraint sum(phi_hat) = net_total:
///
///   phi_hat_i = net_total/N + (1/N) * sum_{j != i} delta(i, j)
///
/// (the least-squares point). residual is the largest violation of the
/// pairwise constraints |(phi_hat_i - phi_hat_j) - delta(i, j)|; the
/// result is flagged feasible when residual <= tolerance. An infeasible
/// result is still returned (best point estimate), never thrown.
FeasibilityResult solve_feasibility(const DifferenceMatrix& deltas, double net_total,
                                    double tolerance);

/// Difference-based estimator over the real players: samples with the
/// original size distribution, estimates all pairwise differences, then
/// solves the constrained recovery above with tolerance
/// epsilon / (2 sqrt(N)). Requires n_players >= 2.
EstimationReport group_testing_original_estimate(const UtilitySpec& u, std::int64_t T,
                                                 double epsilon, std::uint64_t seed,
                                                 EvalCache* cache = nullptr);

/// Extends u with one appended dummy player (index N) whose presence never
/// changes the value: evaluating any coalition strips the dummy bit and
/// delegates. Attributions are unchanged and the dummy's is exactly 0, so
/// differences against it recover the original attributions directly.
UtilitySpec augment_with_dummy(const UtilitySpec& u);

/// Pivot estimator: augments with the dummy, samples with the augmented
/// size distribution, and reads phi_hat_i off the pivot difference column.
/// No recovery step and no epsilon parameter. Requires n_players >= 1.
/// Evaluations are cached at the original N-player width, so a cache can
/// be shared with the other estimators and the exact oracle.
EstimationReport group_testing_improved_estimate(const UtilitySpec& u, std::int64_t T,
                                                 std::uint64_t seed, EvalCache* cache = nullptr);

/// Share of rows that distinguish players i and j (exactly one of the two
/// present) versus the distribution's expectation 2/Z for that event.
ReuseDiagnostics sample_reuse_diagnostics(const SampleBatch& batch, int i, int j);

}  // namespace gtshap
