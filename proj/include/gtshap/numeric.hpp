#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gtshap {

/// Neumaier's improved Kahan summation. Used wherever many small terms are
/// accumulated (exact oracles, estimator averages) so that results are
/// deterministic across optimization levels and accurate to ~1 ulp.
class NeumaierSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Exact binomial coefficient C(n, k) in unsigned 64-bit arithmetic.
/// Throws std::overflow_error if the true value exceeds 2^64-1. The
/// multiply-then-divide order keeps every intermediate value an integer.
inline std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0) {
    throw std::invalid_argument("binomial: negative argument");
  }
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    std::uint64_t factor = static_cast<std::uint64_t>(n - k + i);
    // result * factor / i is exact; check the multiply for overflow.
    __uint128_t wide = static_cast<__uint128_t>(result) * factor;
    wide /= static_cast<std::uint64_t>(i);
    if (wide > static_cast<__uint128_t>(~std::uint64_t{0})) {
      throw std::overflow_error("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                                ") exceeds 64 bits");
    }
    result = static_cast<std::uint64_t>(wide);
  }
  return result;
}

}  // namespace gtshap
