#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fixtures.hpp"
#include "gtshap/estimators.hpp"
#include "gtshap/exact.hpp"
#include "gtshap/rng.hpp"

using namespace gtshap;

namespace {

UtilitySpec single_player_game() {
  UtilitySpec u;
  u.n_players = 1;
  u.label = "single";
  u.evaluate = [](const Coalition& s) { return s.contains(0) ? 1.0 : 0.0; };
  u.known_shapley = std::vector<double>{1.0};
  return u;
}

}  // namespace

TEST_CASE("method names round-trip") {
  for (EstimatorMethod m : {EstimatorMethod::permutation, EstimatorMethod::gt_original,
                            EstimatorMethod::gt_improved}) {
    CHECK(method_from_string(to_string(m)) == m);
  }
  CHECK(to_string(EstimatorMethod::gt_original) == "gt");
  CHECK_THROWS_AS(method_from_string("montecarlo"), std::invalid_argument);
}

TEST_CASE("difference matrix storage is antisymmetric and guarded") {
  DifferenceMatrix d = DifferenceMatrix::all_pairs(4);
  d.set(2, 0, 0.5);
  CHECK(d.get(2, 0) == 0.5);
  CHECK(d.get(0, 2) == -0.5);
  d.set(0, 1, -0.125);
  CHECK(d.get(1, 0) == 0.125);
  CHECK_THROWS_AS(d.get(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(d.set(0, 4, 1.0), std::out_of_range);
  CHECK_THROWS_AS(d.pivot_delta(0), std::logic_error);

  DifferenceMatrix p = DifferenceMatrix::pivot_column(3);
  p.values[1] = 0.25;
  CHECK(p.pivot_delta(1) == 0.25);
  CHECK_THROWS_AS(p.get(0, 1), std::logic_error);
  CHECK_THROWS_AS(p.pivot_delta(3), std::out_of_range);
}

TEST_CASE("one permutation suffices for an additive game") {
  UtilitySpec u = make_additive_game({0.5, 0.3, 0.2});
  EstimationReport r = permutation_sampling_estimate(u, 1, 7);
  REQUIRE(r.phi_hat.n_players() == 3);
  CHECK(std::abs(r.phi_hat.values[0] - 0.5) <= 1e-12);
  CHECK(std::abs(r.phi_hat.values[1] - 0.3) <= 1e-12);
  CHECK(std::abs(r.phi_hat.values[2] - 0.2) <= 1e-12);
  CHECK(r.T == 1);
  CHECK(r.method == EstimatorMethod::permutation);
}

TEST_CASE("permutation estimates preserve the net total and converge") {
  UtilitySpec u = make_glove_game({0, 1}, {2});
  const double net = u(Coalition::full(3)) - u(Coalition(3));

  EstimationReport small = permutation_sampling_estimate(u, 37, 11);
  CHECK(std::abs(small.phi_hat.total() - net) <= 1e-12);

  EstimationReport big = permutation_sampling_estimate(u, 10000, 11);
  ShapleyVector phi = exact_shapley(u);
  CHECK(linf_distance(big.phi_hat.values, phi.values) <= 0.05);
  CHECK(std::abs(big.phi_hat.total() - net) <= 1e-12);
}

TEST_CASE("permutation estimates are deterministic in the seed") {
  UtilitySpec u = make_random_bounded_game(5, 42);
  EstimationReport a = permutation_sampling_estimate(u, 200, 3);
  EstimationReport b = permutation_sampling_estimate(u, 200, 3);
  CHECK(a.phi_hat.values == b.phi_hat.values);
  EstimationReport c = permutation_sampling_estimate(u, 200, 4);
  CHECK(a.phi_hat.values != c.phi_hat.values);
  CHECK_THROWS_AS(permutation_sampling_estimate(u, 0, 3), std::invalid_argument);
}

TEST_CASE("permutation evaluation accounting matches the cache") {
  UtilitySpec u = make_random_bounded_game(6, 9);
  EvalCache cache;
  EstimationReport r = permutation_sampling_estimate(u, 50, 5, &cache);
  CHECK(r.utility_evals == static_cast<std::int64_t>(cache.misses()));
  CHECK(r.utility_evals <= 1 + 50 * 6);

  // A fully warm cache means zero new evaluations.
  exact_shapley(u, &cache);
  const std::uint64_t before = cache.misses();
  EstimationReport warm = permutation_sampling_estimate(u, 50, 99, &cache);
  CHECK(warm.utility_evals == 0);
  CHECK(cache.misses() == before);
}

TEST_CASE("sample batches are reproducible row by row") {
  UtilitySpec u = make_glove_game({0, 1}, {2, 3});
  SamplingDistribution dist = build_distribution(4, DistributionVariant::original);
  SampleBatch ten = collect_samples(u, dist, 10, 123);
  SampleBatch five = collect_samples(u, dist, 5, 123);
  REQUIRE(ten.size() == 10);
  REQUIRE(five.size() == 5);
  CHECK(ten.baseline == five.baseline);
  for (std::size_t t = 0; t < 5; ++t) {
    CHECK(ten.memberships[t] == five.memberships[t]);  // substream per row
    CHECK(ten.utilities[t] == five.utilities[t]);
  }
  CHECK_THROWS_AS(collect_samples(u, dist, 0, 123), std::invalid_argument);

  SamplingDistribution wrong = build_distribution(5, DistributionVariant::original);
  CHECK_THROWS_AS(collect_samples(u, wrong, 5, 123), std::invalid_argument);
}

TEST_CASE("pairwise difference estimation matches a hand computation") {
  SampleBatch batch;
  batch.dist = build_distribution(3, DistributionVariant::original);
  REQUIRE(batch.dist.Z == doctest::Approx(3.0).epsilon(1e-15));
  batch.baseline = 0.1;
  batch.memberships = {Coalition::from_indices({0}, 3), Coalition::from_indices({0, 1}, 3),
                       Coalition::from_indices({2}, 3)};
  batch.utilities = {0.2, 0.9, 0.4};

  // scale Z/T = 1; a_0 = 0.1 + 0.8, a_1 = 0.8, a_2 = 0.3
  DifferenceMatrix d = estimate_pair_differences(batch);
  const double a0 = (0.2 - 0.1) + (0.9 - 0.1);
  const double a1 = 0.9 - 0.1;
  const double a2 = 0.4 - 0.1;
  CHECK(d.get(0, 1) == doctest::Approx(a0 - a1).epsilon(1e-14));
  CHECK(d.get(0, 2) == doctest::Approx(a0 - a2).epsilon(1e-14));
  CHECK(d.get(1, 2) == doctest::Approx(a1 - a2).epsilon(1e-14));
  CHECK(d.get(2, 1) == -d.get(1, 2));
}

TEST_CASE("sampled differences approach the exact pairwise difference") {
  UtilitySpec u = make_glove_game({0, 1}, {2, 3});
  SamplingDistribution dist = build_distribution(4, DistributionVariant::original);
  SampleBatch batch = collect_samples(u, dist, 40000, 7);
  DifferenceMatrix d = estimate_pair_differences(batch);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      CAPTURE(i);
      CAPTURE(j);
      CHECK(std::abs(d.get(i, j) - exact_pair_difference(u, i, j)) <= 0.08);
    }
  }
}

TEST_CASE("pivot-form estimation rejects misuse") {
  UtilitySpec u = make_glove_game({0, 1}, {2});
  SamplingDistribution original = build_distribution(3, DistributionVariant::original);
  SampleBatch batch = collect_samples(u, original, 10, 1);
  CHECK_THROWS_AS(estimate_pair_differences(batch, 2), std::invalid_argument);

  UtilitySpec aug = augment_with_dummy(u);
  SamplingDistribution augmented = build_distribution(3, DistributionVariant::augmented);
  SampleBatch abatch = collect_samples(aug, augmented, 10, 1);
  CHECK_THROWS_AS(estimate_pair_differences(abatch, 1), std::invalid_argument);
  CHECK_NOTHROW(estimate_pair_differences(abatch, augmented.pivot_index()));
}

TEST_CASE("recovery from exact differences reproduces the attribution") {
  for (const UtilitySpec& u : testfx::fixtures_up_to(8)) {
    if (u.n_players < 2) continue;
    CAPTURE(u.label);
    ShapleyVector phi = exact_shapley(u);
    DifferenceMatrix d = DifferenceMatrix::all_pairs(u.n_players);
    for (int i = 0; i < u.n_players; ++i) {
      for (int j = i + 1; j < u.n_players; ++j) {
        d.set(i, j, phi.values[static_cast<std::size_t>(i)] -
                        phi.values[static_cast<std::size_t>(j)]);
      }
    }
    FeasibilityResult r = solve_feasibility(d, phi.total(), 1e-9);
    REQUIRE(linf_distance(r.phi_hat.values, phi.values) <= 1e-12);
    REQUIRE(r.residual <= 1e-13);
    REQUIRE(r.feasible);
  }
}

TEST_CASE("recovery from zero differences splits the total evenly") {
  DifferenceMatrix d = DifferenceMatrix::all_pairs(4);
  FeasibilityResult r = solve_feasibility(d, 1.0, 1e-9);
  for (double v : r.phi_hat.values) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(r.residual == 0.0);
  CHECK(r.feasible);
}

TEST_CASE("recovery from differences perturbed inside the tolerance box stays accurate") {
  UtilitySpec u = make_glove_game({0}, {1, 2, 3});
  ShapleyVector phi = exact_shapley(u);
  const int n = 4;
  const double epsilon = 0.4;
  const double box = epsilon / (2.0 * std::sqrt(static_cast<double>(n)));  // 0.1
  Xoshiro256StarStar rng(mix_seed(31, 0));
  for (int rep = 0; rep < 50; ++rep) {
    DifferenceMatrix d = DifferenceMatrix::all_pairs(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double noise = (2.0 * rng.next_unit() - 1.0) * (box / 3.0);
        d.set(i, j, phi.values[static_cast<std::size_t>(i)] -
                        phi.values[static_cast<std::size_t>(j)] + noise);
      }
    }
    FeasibilityResult r = solve_feasibility(d, phi.total(), box);
    CAPTURE(rep);
    REQUIRE(r.feasible);
    REQUIRE(linf_distance(r.phi_hat.values, phi.values) <=
            epsilon / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("recovery flags an out-of-tolerance difference set but still answers") {
  DifferenceMatrix d = DifferenceMatrix::all_pairs(3);
  d.set(0, 1, 0.9);
  d.set(0, 2, 0.0);
  d.set(1, 2, 0.0);
  FeasibilityResult r = solve_feasibility(d, 1.0, 1e-3);
  CHECK_FALSE(r.feasible);
  CHECK(r.residual > 1e-3);
  CHECK(r.phi_hat.n_players() == 3);
  CHECK(std::abs(r.phi_hat.total() - 1.0) <= 1e-12);

  CHECK_THROWS_AS(solve_feasibility(d, 1.0, 0.0), std::invalid_argument);
  DifferenceMatrix p = DifferenceMatrix::pivot_column(3);
  CHECK_THROWS_AS(solve_feasibility(p, 1.0, 1e-3), std::invalid_argument);
}

TEST_CASE("difference-based estimator: fields, determinism, convergence") {
  UtilitySpec u = make_glove_game({0, 1}, {2});
  EvalCache cache;
  EstimationReport r = group_testing_original_estimate(u, 20000, 0.2, 17, &cache);
  CHECK(r.method == EstimatorMethod::gt_original);
  CHECK(r.T == 20000);
  CHECK(r.seed == 17);
  CHECK(r.epsilon.has_value());
  REQUIRE(r.residual.has_value());
  REQUIRE(r.feasible.has_value());
  // Batch-derived differences are already consistent (all entries are gaps
  // of per-player sums), so the recovery residual is floating-point noise.
  CHECK(*r.residual <= 1e-12);
  CHECK(*r.feasible);
  CHECK(r.utility_evals == static_cast<std::int64_t>(cache.misses()));

  ShapleyVector phi = exact_shapley(u);
  CHECK(linf_distance(r.phi_hat.values, phi.values) <= 0.1);
  const double net = u(Coalition::full(3)) - u(Coalition(3));
  CHECK(std::abs(r.phi_hat.total() - net) <= 1e-12);

  EstimationReport again = group_testing_original_estimate(u, 20000, 0.2, 17);
  CHECK(again.phi_hat.values == r.phi_hat.values);

  CHECK_THROWS_AS(group_testing_original_estimate(single_player_game(), 10, 0.2, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(group_testing_original_estimate(u, 10, 0.0, 1), std::invalid_argument);
}

TEST_CASE("appending a dummy player changes nothing it should not") {
  UtilitySpec u = make_glove_game({0, 1}, {2});
  UtilitySpec aug = augment_with_dummy(u);
  REQUIRE(aug.n_players == 4);
  CHECK(aug.label.find("dummy") != std::string::npos);

  // The appended player is worthless alone and worthless in company.
  CHECK(aug(Coalition::from_indices({3}, 4)) == u(Coalition(3)));
  CHECK(aug(Coalition::from_indices({0, 1, 3}, 4)) == u(Coalition::from_indices({0, 1}, 3)));
  CHECK(aug(Coalition(4)) == u(Coalition(3)));

  // Glove games carry no precomputed values, and augmentation must not invent any.
  CHECK(!aug.known_shapley.has_value());

  // When the base game does know its values, the appended player gets exactly 0.
  UtilitySpec known = augment_with_dummy(make_unanimity_game(3, {0, 1}));
  REQUIRE(known.known_shapley.has_value());
  REQUIRE(known.known_shapley->size() == 4);
  CHECK((*known.known_shapley)[0] == 0.5);
  CHECK(known.known_shapley->back() == 0.0);

  for (const UtilitySpec& g : testfx::fixtures_up_to(8)) {
    CAPTURE(g.label);
    ShapleyVector phi = exact_shapley(g);
    ShapleyVector phi_aug = exact_shapley(augment_with_dummy(g));
    REQUIRE(phi_aug.n_players() == g.n_players + 1);
    for (int i = 0; i < g.n_players; ++i) {
      REQUIRE(std::abs(phi_aug.values[static_cast<std::size_t>(i)] -
                       phi.values[static_cast<std::size_t>(i)]) <= 1e-10);
    }
    REQUIRE(std::abs(phi_aug.values.back()) <= 1e-12);
  }

  // Augmenting twice is still harmless.
  ShapleyVector twice = exact_shapley(augment_with_dummy(augment_with_dummy(u)));
  CHECK(std::abs(twice.values[2] - 2.0 / 3) <= 1e-10);
  CHECK(std::abs(twice.values[3]) <= 1e-12);
  CHECK(std::abs(twice.values[4]) <= 1e-12);
}

TEST_CASE("pivot estimator: single player, determinism, convergence") {
  EstimationReport one = group_testing_improved_estimate(single_player_game(), 10000, 5);
  REQUIRE(one.phi_hat.n_players() == 1);
  CHECK(std::abs(one.phi_hat.values[0] - 1.0) <= 0.1);
  CHECK(one.method == EstimatorMethod::gt_improved);
  CHECK_FALSE(one.residual.has_value());

  UtilitySpec u = make_glove_game({0, 1}, {2});
  EstimationReport r = group_testing_improved_estimate(u, 30000, 21);
  ShapleyVector phi = exact_shapley(u);
  CHECK(linf_distance(r.phi_hat.values, phi.values) <= 0.1);

  EstimationReport again = group_testing_improved_estimate(u, 30000, 21);
  CHECK(again.phi_hat.values == r.phi_hat.values);
  EstimationReport other = group_testing_improved_estimate(u, 30000, 22);
  CHECK(other.phi_hat.values != r.phi_hat.values);
}

TEST_CASE("pivot estimator caches at the original width and shares entries") {
  UtilitySpec u = make_glove_game({0, 1}, {2, 3});
  EvalCache cache;
  EstimationReport r = group_testing_improved_estimate(u, 500, 13, &cache);
  CHECK(r.utility_evals == static_cast<std::int64_t>(cache.misses()));
  CHECK(cache.entry_count() > 0);
  for (const auto& [coalition, value] : cache.sorted_entries()) {
    REQUIRE(coalition.n_players() == 4);  // never the augmented width
  }

  // Re-running the same seed finds every evaluation already cached.
  EstimationReport warm = group_testing_improved_estimate(u, 500, 13, &cache);
  CHECK(warm.utility_evals == 0);
  CHECK(warm.phi_hat.values == r.phi_hat.values);

  // The exact oracle reuses those entries: total distinct evaluations stay 2^4.
  exact_shapley(u, &cache);
  CHECK(cache.entry_count() == 16);
  CHECK(cache.misses() == 16);
}

TEST_CASE("reuse diagnostics measure how many samples separate a pair") {
  UtilitySpec u = make_glove_game({0, 1}, {2});
  SamplingDistribution dist = build_distribution(3, DistributionVariant::original);
  SampleBatch batch = collect_samples(u, dist, 100000, 2025);
  ReuseDiagnostics diag = sample_reuse_diagnostics(batch, 0, 2);
  CHECK(diag.expected_fraction == 1.0 - q_tot(dist));
  CHECK(std::abs(diag.expected_fraction - 2.0 / 3.0) <= 1e-14);
  const double se = std::sqrt(diag.expected_fraction * (1.0 - diag.expected_fraction) / 100000.0);
  CHECK(std::abs(diag.effective_fraction - diag.expected_fraction) <= 4.0 * se);

  SampleBatch tiny = collect_samples(u, dist, 1, 4);
  ReuseDiagnostics d1 = sample_reuse_diagnostics(tiny, 0, 1);
  CHECK((d1.effective_fraction == 0.0 || d1.effective_fraction == 1.0));

  CHECK_THROWS_AS(sample_reuse_diagnostics(batch, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_reuse_diagnostics(batch, 0, 3), std::out_of_range);
}

TEST_CASE("sampled estimates agree with the enumerated expectation at scale") {
  // Z * E[statistic] is computed exactly by enumeration; the Monte Carlo
  // estimate over a large batch must land within a few standard errors.
  UtilitySpec u = make_threshold_game(5, 3);
  SamplingDistribution dist = build_distribution(5, DistributionVariant::original);
  SampleBatch batch = collect_samples(u, dist, 60000, 77);
  DifferenceMatrix d = estimate_pair_differences(batch);
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) {
      const double exact = dist.Z * exact_statistic_expectation(dist, u, i, j);
      CAPTURE(i);
      CAPTURE(j);
      REQUIRE(std::abs(d.get(i, j) - exact) <= 0.1);
    }
  }
}
