"""Exact and sampled Shapley-value computation for cooperative games.

Games map coalitions (subsets of ``range(n_players)``) into [0, 1]. The
exact oracles enumerate every subset; the three estimators (permutation
sampling, the difference-based sampler ``gt``, and the pivot sampler
``gt-improved``) trade evaluations for accuracy, with sample-complexity
calculators to size their budgets.
"""

from ._core import (
    Bound,
    DistributionInfo,
    Game,
    Report,
    UtilityRangeError,
    augment_with_dummy,
    distribution_info,
    exact_pair_difference,
    exact_shapley,
    exact_shapley_by_permutations,
    from_callable,
    gt_estimate,
    gt_improved_estimate,
    load_game_file,
    make_additive_game,
    make_glove_game,
    make_random_bounded_game,
    make_threshold_game,
    make_unanimity_game,
    permutation_estimate,
    required_samples,
)

__version__ = "0.1.0"

__all__ = [
    "Bound",
    "DistributionInfo",
    "Game",
    "Report",
    "UtilityRangeError",
    "augment_with_dummy",
    "distribution_info",
    "exact_pair_difference",
    "exact_shapley",
    "exact_shapley_by_permutations",
    "from_callable",
    "gt_estimate",
    "gt_improved_estimate",
    "load_game_file",
    "make_additive_game",
    "make_glove_game",
    "make_random_bounded_game",
    "make_threshold_game",
    "make_unanimity_game",
    "permutation_estimate",
    "required_samples",
    "__version__",
]
