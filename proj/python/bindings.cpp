#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gtshap/bounds.hpp"
#include "gtshap/estimators.hpp"
#include "gtshap/exact.hpp"
#include "gtshap/games.hpp"
#include "gtshap/sampling.hpp"

namespace py = pybind11;
using namespace gtshap;

namespace {

Coalition coalition_from_members(const std::vector<int>& members, int n_players) {
  return Coalition::from_indices(std::span<const int>(members.data(), members.size()), n_players);
}

DistributionVariant variant_from_string(const std::string& name) {
  if (name == "original") return DistributionVariant::original;
  if (name == "augmented") return DistributionVariant::augmented;
  throw std::invalid_argument("variant must be 'original' or 'augmented', got '" + name + "'");
}

struct DistributionInfo {
  int n_players;
  int n_effective;
  std::string variant;
  double Z;
  double q_tot;
  std::vector<double> q;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact and sampled Shapley-value computation for cooperative games with "
            "utilities in [0, 1]";

  py::register_exception<UtilityRangeError>(m, "UtilityRangeError", PyExc_ValueError);

  py::class_<UtilitySpec>(m, "Game",
                          "A cooperative game: a deterministic map from coalitions "
                          "(subsets of range(n_players)) into [0, 1].")
      .def_readonly("n_players", &UtilitySpec::n_players)
      .def_readonly("label", &UtilitySpec::label)
      .def_property_readonly(
          "known_values",
          [](const UtilitySpec& u) -> py::object {
            if (!u.known_shapley.has_value()) return py::none();
            return py::cast(*u.known_shapley);
          },
          "Analytically known attribution vector, or None.")
      .def(
          "value",
          [](const UtilitySpec& u, const std::vector<int>& members) {
            const Coalition s = coalition_from_members(members, u.n_players);
            return validate_utility(u, s, u.evaluate(s));
          },
          py::arg("members"), "Utility of the coalition given as a list of player indices.")
      .def("__repr__", [](const UtilitySpec& u) {
        return "<Game '" + u.label + "' with " + std::to_string(u.n_players) + " players>";
      });

  py::class_<EstimationReport>(m, "Report", "One estimator run: values plus accounting.")
      .def_property_readonly(
          "phi", [](const EstimationReport& r) { return r.phi_hat.values; },
          "Estimated attribution, one value per player.")
      .def_property_readonly(
          "method", [](const EstimationReport& r) { return to_string(r.method); })
      .def_readonly("T", &EstimationReport::T)
      .def_readonly("utility_evals", &EstimationReport::utility_evals)
      .def_readonly("seed", &EstimationReport::seed)
      .def_readonly("epsilon", &EstimationReport::epsilon)
      .def_readonly("delta", &EstimationReport::delta)
      .def_readonly("residual", &EstimationReport::residual)
      .def_readonly("feasible", &EstimationReport::feasible)
      .def("__repr__", [](const EstimationReport& r) {
        return "<Report method=" + to_string(r.method) + " T=" + std::to_string(r.T) +
               " utility_evals=" + std::to_string(r.utility_evals) + ">";
      });

  py::class_<BoundResult>(m, "Bound", "Sample-complexity bound evaluation.")
      .def_readonly("T", &BoundResult::T)
      .def_readonly("utility_evals", &BoundResult::utility_evals)
      .def_readonly("Z", &BoundResult::Z)
      .def_readonly("q_tot", &BoundResult::q_tot)
      .def_readonly("raw_bound", &BoundResult::raw_bound)
      .def("__repr__", [](const BoundResult& b) {
        return "<Bound T=" + std::to_string(b.T) +
               " utility_evals=" + std::to_string(b.utility_evals) + ">";
      });

  py::class_<DistributionInfo>(m, "DistributionInfo",
                               "Constants of the size-biased coalition distribution.")
      .def_readonly("n_players", &DistributionInfo::n_players)
      .def_readonly("n_effective", &DistributionInfo::n_effective)
      .def_readonly("variant", &DistributionInfo::variant)
      .def_readonly("Z", &DistributionInfo::Z)
      .def_readonly("q_tot", &DistributionInfo::q_tot)
      .def_readonly("q", &DistributionInfo::q);

  // ---- game constructions ----
  m.def("make_additive_game", &make_additive_game, py::arg("weights"),
        "U(S) = sum of per-player weights over members (weights >= 0, total <= 1).");
  m.def("make_threshold_game", &make_threshold_game, py::arg("n_players"), py::arg("quota"),
        "U(S) = 1 when |S| >= quota, else 0.");
  m.def("make_glove_game", &make_glove_game, py::arg("left"), py::arg("right"),
        "U(S) = matched pairs across the two sides, scaled into [0, 1].");
  m.def("make_unanimity_game", &make_unanimity_game, py::arg("n_players"), py::arg("carrier"),
        "U(S) = 1 when the carrier set is contained in S, else 0.");
  m.def("make_random_bounded_game", &make_random_bounded_game, py::arg("n_players"),
        py::arg("seed"), "A seeded full table of independent uniform [0, 1) utilities.");
  m.def("load_game_file", &load_game_file, py::arg("path"),
        "Reads a key=value game definition file.");
  m.def(
      "from_callable",
      [](int n_players, py::object fn, const std::string& label) {
        UtilitySpec u;
        u.n_players = n_players;
        u.label = label;
        u.evaluate = [fn](const Coalition& s) {
          py::gil_scoped_acquire gil;
          py::object result = fn(py::cast(s.indices()));
          return result.cast<double>();
        };
        return u;
      },
      py::arg("n_players"), py::arg("fn"), py::arg("label") = std::string("callable"),
      "Wraps a Python function mapping a sorted list of member indices to a "
      "utility in [0, 1]. The function must be deterministic.");
  m.def("augment_with_dummy", &augment_with_dummy, py::arg("game"),
        "Appends one player whose presence never changes the utility; its "
        "attribution is exactly 0 and all others are unchanged.");

  // ---- exact oracles ----
  m.def(
      "exact_shapley",
      [](const UtilitySpec& u) { return exact_shapley(u).values; }, py::arg("game"),
      "Exact attribution by full subset enumeration (n_players <= 20).");
  m.def(
      "exact_shapley_by_permutations",
      [](const UtilitySpec& u) { return exact_shapley_by_permutations(u).values; },
      py::arg("game"),
      "Exact attribution by enumerating all player orderings (n_players <= 9).");
  m.def(
      "exact_pair_difference",
      [](const UtilitySpec& u, int i, int j) { return exact_pair_difference(u, i, j); },
      py::arg("game"), py::arg("i"), py::arg("j"),
      "Exact attribution difference phi_i - phi_j by direct enumeration.");

  // ---- estimators ----
  m.def(
      "permutation_estimate",
      [](const UtilitySpec& u, std::int64_t permutations, std::uint64_t seed) {
        return permutation_sampling_estimate(u, permutations, seed);
      },
      py::arg("game"), py::arg("permutations"), py::arg("seed") = 0,
      "Averages marginal contributions over seeded random player orderings.");
  m.def(
      "gt_estimate",
      [](const UtilitySpec& u, std::int64_t samples, double epsilon, std::uint64_t seed) {
        return group_testing_original_estimate(u, samples, epsilon, seed);
      },
      py::arg("game"), py::arg("samples"), py::arg("epsilon"), py::arg("seed") = 0,
      "Difference-based estimator over shared coalition samples, recovered "
      "under the exact-total constraint (tolerance epsilon / (2 sqrt(N))).");
  m.def(
      "gt_improved_estimate",
      [](const UtilitySpec& u, std::int64_t samples, std::uint64_t seed) {
        return group_testing_improved_estimate(u, samples, seed);
      },
      py::arg("game"), py::arg("samples"), py::arg("seed") = 0,
      "Pivot estimator: reads attributions directly off differences against "
      "an appended dummy player. No recovery step.");

  // ---- bounds and distribution constants ----
  m.def(
      "required_samples",
      [](int n_players, double epsilon, double delta, const std::string& variant) {
        BoundQuery query;
        query.n_players = n_players;
        query.epsilon = epsilon;
        query.delta = delta;
        query.variant = method_from_string(variant);
        return query.variant == EstimatorMethod::permutation ? required_permutations(query)
                                                             : required_T(query);
      },
      py::arg("n_players"), py::arg("epsilon"), py::arg("delta"), py::arg("variant"),
      "Minimal sample count (or permutation count for 'perm') guaranteeing an "
      "(epsilon, delta) l2 approximation. Variants: 'gt', 'gt-improved', 'perm'.");
  m.def(
      "distribution_info",
      [](int n_players, const std::string& variant) {
        const SamplingDistribution dist =
            build_distribution(n_players, variant_from_string(variant));
        DistributionInfo info;
        info.n_players = dist.n_players;
        info.n_effective = dist.n_effective;
        info.variant = to_string(dist.variant);
        info.Z = dist.Z;
        info.q_tot = q_tot(dist);
        info.q = dist.q;
        return info;
      },
      py::arg("n_players"), py::arg("variant") = std::string("original"),
      "Z, q_tot, and the size weights q_k of the coalition size distribution.");
}
