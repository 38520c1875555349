#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "skewjs/simplex.hpp"

// Information-geometric chart of the categorical distributions on D+1 bins,
// viewed as a mixture family of order D. The natural parameter theta holds
// the first D bin masses; the last bin is theta_0 = 1 - sum(theta). The
// convex generator is the Shannon negentropy
//   F(theta) = sum_i theta_i log theta_i + theta_0 log theta_0,
// whose Bregman divergence is the Kullback-Leibler divergence.

namespace skewjs {

/// Zero bins are lifted to this value before entering the chart.
inline constexpr double kInteriorEpsilon = 1e-10;

/// Strictly interior point of the open simplex: theta_i > 0, sum < 1.
class NaturalParam {
 public:
  /// The last bin is recovered as 1 - sum(theta) with compensated summation.
  explicit NaturalParam(std::vector<double> theta);
  /// Carries an explicitly known last bin, which keeps full relative accuracy
  /// when it is tiny. theta and last must sum to one within 1e-9.
  NaturalParam(std::vector<double> theta, double last);

  [[nodiscard]] std::span<const double> theta() const noexcept { return theta_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return theta_; }
  [[nodiscard]] std::size_t dimension() const noexcept { return theta_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const noexcept { return theta_[i]; }
  /// Mass of the dropped last bin, 1 - sum(theta).
  [[nodiscard]] double last() const noexcept { return last_; }
  /// All D+1 bin masses, last bin at the end.
  [[nodiscard]] std::vector<double> full_bins() const;

  friend bool operator==(const NaturalParam&, const NaturalParam&) = default;

 private:
  std::vector<double> theta_;
  double last_ = 0.0;
};

/// Expectation coordinates eta = grad F(theta).
class DualParam {
 public:
  explicit DualParam(std::vector<double> eta);

  [[nodiscard]] std::span<const double> eta() const noexcept { return eta_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return eta_; }
  [[nodiscard]] std::size_t dimension() const noexcept { return eta_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const noexcept { return eta_[i]; }

 private:
  std::vector<double> eta_;
};

/// Lifts every bin below `eps` up to `eps` and takes the added mass from the
/// largest bin, so the result still sums to one and untouched bins keep their
/// exact values.
[[nodiscard]] std::vector<double> project_to_interior(std::span<const double> bins,
                                                      double eps = kInteriorEpsilon);

/// Drops the last bin, after interior projection when some bin is below eps.
[[nodiscard]] NaturalParam to_natural(const DiscreteDensity& p, double eps = kInteriorEpsilon);
/// (theta_1, ..., theta_D, 1 - sum theta).
[[nodiscard]] DiscreteDensity to_density(const NaturalParam& theta);

/// (1 - t) a + t b, which stays in the chart for t in [0,1].
[[nodiscard]] NaturalParam interpolate(const NaturalParam& a, const NaturalParam& b, double t);

/// Shannon negentropy F(theta) = -h(m_theta).
[[nodiscard]] double negentropy(const NaturalParam& theta);
/// eta_i = log(theta_i / theta_0).
[[nodiscard]] DualParam grad_negentropy(const NaturalParam& theta);
/// theta_i = exp(eta_i) / (1 + sum_j exp(eta_j)), evaluated with shifted
/// exponentials so large |eta| cannot overflow.
[[nodiscard]] NaturalParam grad_negentropy_inverse(const DualParam& eta);
/// Legendre conjugate F*(eta) = <theta, eta> - F(theta) at theta = (grad F)^-1(eta).
[[nodiscard]] double conjugate_negentropy(const DualParam& eta);

/// B_F(a:b) = F(a) - F(b) - <a - b, grad F(b)>; equals KL(m_a : m_b).
[[nodiscard]] double bregman(const NaturalParam& a, const NaturalParam& b);

/// Skew Jensen divergence (1-t) F(a) + t F(b) - F((ab)_t), t in (0,1).
/// At t = 1/2 this is JS(m_a, m_b).
[[nodiscard]] double jensen_divergence(const NaturalParam& a, const NaturalParam& b, double t);

/// Jensen diversity sum_i w_i F(x_i) - F(sum_i w_i x_i).
[[nodiscard]] double jensen_diversity(std::span<const NaturalParam> points,
                                      std::span<const double> weights);
/// Vector-skew Jensen-Bregman divergence of two points:
/// sum_i w_i F((ab)_{alpha_i}) - F((ab)_{alpha_bar}).
[[nodiscard]] double jensen_diversity(const NaturalParam& a, const NaturalParam& b,
                                      const SkewProfile& profile);

/// Closed-form cross-entropy h^x(m_a : m_b) = -F(b) - <a - b, grad F(b)>.
[[nodiscard]] double mixture_cross_entropy(const NaturalParam& a, const NaturalParam& b);

/// Negentropy of a mixture whose D+1 components have pairwise disjoint
/// supports and entropies h_i:
///   sum_i theta_i log theta_i - sum_i theta_i h_i.
/// `component_entropies` follows bin order, its last entry belongs to theta_0.
[[nodiscard]] double disjoint_support_negentropy(const NaturalParam& theta,
                                                 std::span<const double> component_entropies);
/// Bregman divergence generated by disjoint_support_negentropy. It differs
/// from F by an affine term, so it coincides with bregman().
[[nodiscard]] double disjoint_support_bregman(const NaturalParam& a, const NaturalParam& b,
                                              std::span<const double> component_entropies);

}  // namespace skewjs
