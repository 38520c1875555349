#include "skewjs/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "skewjs/errors.hpp"
#include "skewjs/numeric.hpp"

namespace skewjs {

namespace {

void check_bins(std::span<const double> bins, const char* what) {
  if (bins.empty()) throw std::invalid_argument(std::string(what) + ": needs at least one bin");
  for (double b : bins) {
    if (!std::isfinite(b) || b < 0.0) {
      throw std::invalid_argument(std::string(what) + ": bins must be finite and non-negative");
    }
  }
}

}  // namespace

DiscreteDensity::DiscreteDensity(std::vector<double> bins) : bins_(std::move(bins)) {
  check_bins(bins_, "DiscreteDensity");
  const double total = compensated_sum(bins_);
  if (std::abs(total - 1.0) > kSimplexTolerance) {
    throw std::invalid_argument("DiscreteDensity: bins sum to " + std::to_string(total) +
                                ", expected 1");
  }
  if (total != 1.0) {
    for (double& b : bins_) b /= total;
  }
}

DiscreteDensity DiscreteDensity::uniform(std::size_t d) {
  if (d == 0) throw std::invalid_argument("DiscreteDensity: needs at least one bin");
  return DiscreteDensity(std::vector<double>(d, 1.0 / static_cast<double>(d)), trusted);
}

DiscreteDensity DiscreteDensity::dirac(std::size_t d, std::size_t index) {
  if (index >= d) throw std::invalid_argument("DiscreteDensity: dirac index out of range");
  std::vector<double> bins(d, 0.0);
  bins[index] = 1.0;
  return DiscreteDensity(std::move(bins), trusted);
}

PositiveDensity::PositiveDensity(std::vector<double> bins) : bins_(std::move(bins)) {
  check_bins(bins_, "PositiveDensity");
  mass_ = compensated_sum(bins_);
  if (!(mass_ > 0.0) || !std::isfinite(mass_)) {
    throw std::invalid_argument("PositiveDensity: total mass must be positive and finite");
  }
}

PositiveDensity::PositiveDensity(std::vector<double> bins, TrustedTag)
    : bins_(std::move(bins)), mass_(compensated_sum(bins_)) {}

SkewProfile::SkewProfile(std::vector<double> alpha, std::vector<double> weights)
    : alpha_(std::move(alpha)), weights_(std::move(weights)) {
  if (alpha_.empty()) throw std::invalid_argument("SkewProfile: needs at least one skew");
  if (alpha_.size() != weights_.size()) {
    throw std::invalid_argument("SkewProfile: alpha and weights differ in length");
  }
  for (double a : alpha_) {
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("SkewProfile: alpha outside [0,1]");
  }
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("SkewProfile: weights must be strictly positive");
    }
  }
  if (std::abs(compensated_sum(weights_) - 1.0) > kWeightTolerance) {
    throw std::invalid_argument("SkewProfile: weights must sum to 1");
  }
  alpha_bar_ = compensated_dot(weights_, alpha_);
}

SkewProfile SkewProfile::jensen_shannon() { return SkewProfile({0.0, 1.0}, {0.5, 0.5}); }

SkewProfile SkewProfile::with_uniform_weights(std::vector<double> alpha) {
  const auto k = alpha.size();
  if (k == 0) throw std::invalid_argument("SkewProfile: needs at least one skew");
  return SkewProfile(std::move(alpha), std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

bool SkewProfile::has_interior_mean() const noexcept {
  return alpha_bar_ > 0.0 && alpha_bar_ < 1.0;
}

void SkewProfile::require_interior_mean() const {
  if (!has_interior_mean()) {
    throw std::invalid_argument("SkewProfile: mean skew alpha_bar must lie in (0,1), got " +
                                std::to_string(alpha_bar_));
  }
}

bool SkewProfile::is_binary() const noexcept {
  return std::all_of(alpha_.begin(), alpha_.end(), [](double a) { return a == 0.0 || a == 1.0; });
}

namespace detail {

std::vector<double> mix_bins(std::span<const double> p, std::span<const double> q, double a) {
  const double keep = 1.0 - a;
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = keep * p[i] + a * q[i];
  return out;
}

}  // namespace detail

namespace {

void check_mix_weight(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("mix: weight outside [0,1]");
}

}  // namespace

DiscreteDensity mix(const DiscreteDensity& p, const DiscreteDensity& q, double a) {
  require_same_dimension(p.size(), q.size());
  check_mix_weight(a);
  return DiscreteDensity(detail::mix_bins(p.bins(), q.bins(), a), trusted);
}

PositiveDensity mix(const PositiveDensity& p, const PositiveDensity& q, double a) {
  require_same_dimension(p.size(), q.size());
  check_mix_weight(a);
  return PositiveDensity(detail::mix_bins(p.bins(), q.bins(), a), trusted);
}

std::vector<std::size_t> support(const DiscreteDensity& p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) out.push_back(i);
  }
  return out;
}

DiscreteDensity normalize(const PositiveDensity& p) {
  const double total = p.mass();
  if (!(total > 0.0)) throw std::invalid_argument("normalize: zero total mass");
  std::vector<double> bins(p.values());
  // Tiny or huge masses are rescaled by the largest bin first so that the
  // final division does not go through subnormals or overflow.
  constexpr double kSafeLow = 1e-280;
  constexpr double kSafeHigh = 1e280;
  if (total < kSafeLow || total > kSafeHigh) {
    const double peak = *std::max_element(bins.begin(), bins.end());
    for (double& b : bins) b /= peak;
    const double rescaled = compensated_sum(bins);
    for (double& b : bins) b /= rescaled;
  } else {
    for (double& b : bins) b /= total;
  }
  return DiscreteDensity(std::move(bins));
}

}  // namespace skewjs
