#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace skewjs {

/// Bins of a histogram must sum to one within this tolerance at construction.
inline constexpr double kSimplexTolerance = 1e-9;
/// Skew weights must sum to one within this tolerance.
inline constexpr double kWeightTolerance = 1e-12;

/// Tag for constructors whose caller already guarantees the invariants
/// (e.g. convex combinations of valid densities).
struct TrustedTag {
  explicit TrustedTag() = default;
};
inline constexpr TrustedTag trusted{};

/// A point of the closed probability simplex: d >= 1 non-negative bins
/// summing to one. Zero bins are stored as exact zeros.
class DiscreteDensity {
 public:
  /// Validates non-negativity and |sum - 1| <= kSimplexTolerance, then
  /// rescales so the stored bins sum to one to machine precision.
  explicit DiscreteDensity(std::vector<double> bins);
  DiscreteDensity(std::vector<double> bins, TrustedTag) noexcept : bins_(std::move(bins)) {}

  static DiscreteDensity uniform(std::size_t d);
  /// Point mass at `index`.
  static DiscreteDensity dirac(std::size_t d, std::size_t index);

  [[nodiscard]] std::span<const double> bins() const noexcept { return bins_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return bins_; }
  [[nodiscard]] std::size_t size() const noexcept { return bins_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const noexcept { return bins_[i]; }

  friend bool operator==(const DiscreteDensity&, const DiscreteDensity&) = default;

 private:
  std::vector<double> bins_;
};

/// A finite, non-negative, not necessarily normalized measure on d bins.
class PositiveDensity {
 public:
  explicit PositiveDensity(std::vector<double> bins);
  PositiveDensity(std::vector<double> bins, TrustedTag);
  explicit PositiveDensity(const DiscreteDensity& p) : PositiveDensity(p.values(), trusted) {}

  [[nodiscard]] std::span<const double> bins() const noexcept { return bins_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return bins_; }
  [[nodiscard]] std::size_t size() const noexcept { return bins_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const noexcept { return bins_[i]; }
  /// Total mass mu(p) = sum of bins.
  [[nodiscard]] double mass() const noexcept { return mass_; }

  friend bool operator==(const PositiveDensity&, const PositiveDensity&) = default;

 private:
  std::vector<double> bins_;
  double mass_ = 0.0;
};

/// Skew vector alpha in [0,1]^k with positive weights w summing to one, and
/// the derived mean skew alpha_bar = sum_i w_i alpha_i.
class SkewProfile {
 public:
  SkewProfile(std::vector<double> alpha, std::vector<double> weights);

  /// alpha = (0, 1), w = (1/2, 1/2): the ordinary Jensen-Shannon divergence.
  static SkewProfile jensen_shannon();
  static SkewProfile with_uniform_weights(std::vector<double> alpha);

  [[nodiscard]] std::span<const double> alpha() const noexcept { return alpha_; }
  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
  [[nodiscard]] double alpha_bar() const noexcept { return alpha_bar_; }
  [[nodiscard]] std::size_t size() const noexcept { return alpha_.size(); }

  /// alpha_bar lies strictly inside (0, 1).
  [[nodiscard]] bool has_interior_mean() const noexcept;
  /// Throws std::invalid_argument unless has_interior_mean().
  void require_interior_mean() const;
  /// Every alpha_i is exactly 0 or 1.
  [[nodiscard]] bool is_binary() const noexcept;

  friend bool operator==(const SkewProfile&, const SkewProfile&) = default;

 private:
  std::vector<double> alpha_;
  std::vector<double> weights_;
  double alpha_bar_ = 0.0;
};

/// (pq)_a = (1 - a) p + a q, bin by bin.
[[nodiscard]] DiscreteDensity mix(const DiscreteDensity& p, const DiscreteDensity& q, double a);
[[nodiscard]] PositiveDensity mix(const PositiveDensity& p, const PositiveDensity& q, double a);

/// Zero-based indices of the strictly positive bins.
[[nodiscard]] std::vector<std::size_t> support(const DiscreteDensity& p);

/// Divides every bin by the total mass.
[[nodiscard]] DiscreteDensity normalize(const PositiveDensity& p);

namespace detail {

/// (1 - a) p_i + a q_i into a fresh vector; sizes must already match.
[[nodiscard]] std::vector<double> mix_bins(std::span<const double> p, std::span<const double> q,
                                           double a);

}  // namespace detail

}  // namespace skewjs
