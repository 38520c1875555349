#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace skewjs {

/// Compensated (Neumaier) accumulator. Every reduction over histogram bins
/// goes through this so that 256+ bin sums stay accurate to a few ulps.
class CompensatedSum {
 public:
  CompensatedSum() = default;

  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  [[nodiscard]] double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

[[nodiscard]] inline double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum acc;
  for (double x : xs) acc += x;
  return acc.value();
}

[[nodiscard]] inline double compensated_dot(std::span<const double> a,
                                            std::span<const double> b) noexcept {
  CompensatedSum acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc.value();
}

/// x log x with the 0 log 0 = 0 convention.
[[nodiscard]] inline double xlogx(double x) noexcept {
  return x > 0.0 ? x * std::log(x) : 0.0;
}

}  // namespace skewjs
