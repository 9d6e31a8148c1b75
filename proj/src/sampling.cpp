#include "gtshap/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace gtshap {

std::string to_string(DistributionVariant variant) {
  switch (variant) {
    case DistributionVariant::original: return "original";
    case DistributionVariant::augmented: return "augmented";
  }
  throw std::logic_error("to_string(DistributionVariant): unknown value");
}

SamplingDistribution build_distribution(int n_players, DistributionVariant variant) {
  const int min_players = variant == DistributionVariant::original ? 2 : 1;
  if (n_players < min_players) {
    throw std::invalid_argument("build_distribution(" + to_string(variant) +
                                ") needs n_players >= " + std::to_string(min_players) +
                                ", got " + std::to_string(n_players));
  }
  SamplingDistribution dist;
  dist.variant = variant;
  dist.n_players = n_players;
  dist.n_effective = variant == DistributionVariant::original ? n_players : n_players + 1;

  const int m = dist.n_effective;
  const int k_max = m - 1;
  double z = 0.0;
  for (int k = 1; k <= k_max; ++k) z += 1.0 / k;
  z *= 2.0;
  dist.Z = z;

  dist.q.resize(static_cast<std::size_t>(k_max));
  dist.cumulative.resize(static_cast<std::size_t>(k_max));
  const double inv_z = 1.0 / z;
  double running = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    double qk = inv_z * (1.0 / k + 1.0 / (m - k));
    dist.q[static_cast<std::size_t>(k - 1)] = qk;
    running += qk;
    dist.cumulative[static_cast<std::size_t>(k - 1)] = running;
  }
  // Pin the last cumulative weight so inverse-CDF can never run off the
  // end from rounding.
  dist.cumulative.back() = 1.0;
  return dist;
}

Coalition draw_coalition(const SamplingDistribution& dist, Xoshiro256StarStar& rng) {
  const double x = rng.next_unit();
  auto it = std::upper_bound(dist.cumulative.begin(), dist.cumulative.end(), x);
  if (it == dist.cumulative.end()) --it;
  const int k = static_cast<int>(it - dist.cumulative.begin()) + 1;

  const int m = dist.n_effective;
  std::vector<int> indices(static_cast<std::size_t>(m));
  std::iota(indices.begin(), indices.end(), 0);
  Coalition s(m);
  for (int t = 0; t < k; ++t) {
    const int j = t + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m - t)));
    std::swap(indices[static_cast<std::size_t>(t)], indices[static_cast<std::size_t>(j)]);
    s.add(indices[static_cast<std::size_t>(t)]);
  }
  return s;
}

double q_tot(const SamplingDistribution& dist) {
  const int m = dist.n_effective;
  const auto q_at = [&dist](int k) { return dist.q[static_cast<std::size_t>(k - 1)]; };
  double total = (static_cast<double>(m - 2) / m) * q_at(1);
  for (int k = 2; k <= m - 1; ++k) {
    total += q_at(k) * (1.0 + 2.0 * k * (k - m) / (static_cast<double>(m) * (m - 1)));
  }
  return total;
}

}  // namespace gtshap
