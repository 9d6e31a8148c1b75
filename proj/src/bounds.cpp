#include "gtshap/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gtshap {

namespace {

void check_query(const BoundQuery& query) {
  if (query.n_players < 2) {
    throw std::invalid_argument("bound query needs n_players >= 2, got " +
                                std::to_string(query.n_players));
  }
  if (!(query.epsilon > 0.0)) {
    throw std::invalid_argument("bound query needs epsilon > 0");
  }
  if (!(query.delta > 0.0 && query.delta < 1.0)) {
    throw std::invalid_argument("bound query needs delta in (0, 1)");
  }
}

std::int64_t ceil_to_count(double raw, const char* what) {
  if (!std::isfinite(raw) || raw < 0.0) {
    throw std::domain_error(std::string(what) + ": bound evaluated to a non-finite value");
  }
  double c = std::ceil(raw);
  if (c < 1.0) c = 1.0;
  return static_cast<std::int64_t>(c);
}

}  // namespace

double bennett_h(double u) {
  if (u < 0.0) {
    throw std::invalid_argument("bennett_h requires u >= 0");
  }
  if (u < 1e-4) {
    return u * u / 2.0 - u * u * u / 6.0;
  }
  return (1.0 + u) * std::log1p(u) - u;
}

BoundResult required_T(const BoundQuery& query) {
  check_query(query);
  if (query.variant != EstimatorMethod::gt_original &&
      query.variant != EstimatorMethod::gt_improved) {
    throw std::invalid_argument("required_T handles the gt variants; use required_permutations");
  }
  const int n = query.n_players;
  const double eps = query.epsilon;
  const double delta = query.delta;
  const bool improved = query.variant == EstimatorMethod::gt_improved;

  const SamplingDistribution dist = build_distribution(
      n, improved ? DistributionVariant::augmented : DistributionVariant::original);
  const double z = dist.Z;
  const double qt = q_tot(dist);
  if (std::abs(z * (1.0 - qt) - 2.0) > 1e-9) {
    throw std::logic_error("required_T: internal identity Z(1 - q_tot) = 2 violated");
  }

  BoundResult result;
  result.Z = z;
  result.q_tot = qt;
  if (improved) {
    result.h_argument = eps / (z * std::sqrt(static_cast<double>(n + 1)) * (1.0 - qt));
    result.raw_bound = std::log(static_cast<double>(n) / delta) /
                       ((1.0 - qt) * bennett_h(result.h_argument));
  } else {
    result.h_argument =
        eps / (2.0 * z * std::sqrt(static_cast<double>(n)) * (1.0 - qt));
    result.raw_bound = std::log(static_cast<double>(n) * (n - 1) / delta) /
                       ((1.0 - qt) * bennett_h(result.h_argument));
  }
  result.T = ceil_to_count(result.raw_bound, "required_T");
  result.utility_evals = result.T;
  return result;
}

BoundResult required_permutations(const BoundQuery& query) {
  check_query(query);
  if (query.variant != EstimatorMethod::permutation) {
    throw std::invalid_argument("required_permutations handles the perm variant only");
  }
  const double n = static_cast<double>(query.n_players);
  const double eps = query.epsilon;
  const double delta = query.delta;

  BoundResult result;
  result.raw_bound = 2.0 * n / (eps * eps) * std::log(2.0 * n / delta);
  result.T = ceil_to_count(result.raw_bound, "required_permutations");
  result.utility_evals = result.T * (query.n_players + 1);
  return result;
}

}  // namespace gtshap
