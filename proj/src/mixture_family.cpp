#include "skewjs/mixture_family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "skewjs/errors.hpp"
#include "skewjs/numeric.hpp"

namespace skewjs {

namespace {

double complement(std::span<const double> theta) {
  CompensatedSum acc;
  acc += 1.0;
  for (double t : theta) acc += -t;
  return acc.value();
}

void check_interior(std::span<const double> theta, double last) {
  if (theta.empty()) throw std::invalid_argument("NaturalParam: dimension must be at least 1");
  for (double t : theta) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("NaturalParam: coordinates must be strictly positive");
    }
  }
  if (!(last > 0.0)) throw std::invalid_argument("NaturalParam: coordinates must sum below 1");
}

}  // namespace

NaturalParam::NaturalParam(std::vector<double> theta) : theta_(std::move(theta)) {
  last_ = complement(theta_);
  check_interior(theta_, last_);
}

NaturalParam::NaturalParam(std::vector<double> theta, double last)
    : theta_(std::move(theta)), last_(last) {
  check_interior(theta_, last_);
  CompensatedSum total;
  for (double t : theta_) total += t;
  total += last_;
  if (std::abs(total.value() - 1.0) > 1e-9) {
    throw std::invalid_argument("NaturalParam: coordinates and last bin must sum to 1");
  }
}

std::vector<double> NaturalParam::full_bins() const {
  std::vector<double> out(theta_);
  out.push_back(last_);
  return out;
}

DualParam::DualParam(std::vector<double> eta) : eta_(std::move(eta)) {
  if (eta_.empty()) throw std::invalid_argument("DualParam: dimension must be at least 1");
  for (double e : eta_) {
    if (!std::isfinite(e)) throw std::invalid_argument("DualParam: coordinates must be finite");
  }
}

std::vector<double> project_to_interior(std::span<const double> bins, double eps) {
  std::vector<double> out(bins.begin(), bins.end());
  if (out.empty()) return out;
  CompensatedSum lifted;
  for (double& b : out) {
    if (b < eps) {
      lifted += eps - b;
      b = eps;
    }
  }
  const double deficit = lifted.value();
  if (deficit > 0.0) {
    auto largest = std::max_element(out.begin(), out.end());
    *largest -= deficit;
    if (!(*largest >= eps)) {
      throw std::invalid_argument("project_to_interior: too many bins to lift to epsilon");
    }
  }
  return out;
}

NaturalParam to_natural(const DiscreteDensity& p, double eps) {
  if (p.size() < 2) throw std::invalid_argument("to_natural: needs at least two bins");
  const auto bins = p.bins();
  const bool on_boundary = std::any_of(bins.begin(), bins.end(), [eps](double b) { return b < eps; });
  std::vector<double> full = on_boundary ? project_to_interior(bins, eps)
                                         : std::vector<double>(bins.begin(), bins.end());
  const double last = full.back();
  full.pop_back();
  return NaturalParam(std::move(full), last);
}

DiscreteDensity to_density(const NaturalParam& theta) {
  return DiscreteDensity(theta.full_bins(), trusted);
}

NaturalParam interpolate(const NaturalParam& a, const NaturalParam& b, double t) {
  require_same_dimension(a.dimension(), b.dimension());
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("interpolate: weight outside [0,1]");
  const double keep = 1.0 - t;
  std::vector<double> out(a.dimension());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = keep * a[i] + t * b[i];
  return NaturalParam(std::move(out), keep * a.last() + t * b.last());
}

double negentropy(const NaturalParam& theta) {
  CompensatedSum acc;
  for (double t : theta.theta()) acc += xlogx(t);
  acc += xlogx(theta.last());
  return acc.value();
}

DualParam grad_negentropy(const NaturalParam& theta) {
  const double log_last = std::log(theta.last());
  std::vector<double> eta(theta.dimension());
  for (std::size_t i = 0; i < eta.size(); ++i) eta[i] = std::log(theta[i]) - log_last;
  return DualParam(std::move(eta));
}

NaturalParam grad_negentropy_inverse(const DualParam& eta) {
  const double shift = std::max(0.0, *std::max_element(eta.values().begin(), eta.values().end()));
  std::vector<double> theta(eta.dimension());
  CompensatedSum denom;
  const double last_numerator = std::exp(-shift);
  denom += last_numerator;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    theta[i] = std::exp(eta[i] - shift);
    denom += theta[i];
  }
  // Coordinates below the smallest normal double are clamped so the point
  // stays in the open simplex.
  constexpr double kTiny = std::numeric_limits<double>::min();
  const double z = denom.value();
  for (double& t : theta) t = std::max(kTiny, t / z);
  return NaturalParam(std::move(theta), std::max(kTiny, last_numerator / z));
}

double conjugate_negentropy(const DualParam& eta) {
  const NaturalParam theta = grad_negentropy_inverse(eta);
  return compensated_dot(theta.theta(), eta.eta()) - negentropy(theta);
}

double bregman(const NaturalParam& a, const NaturalParam& b) {
  require_same_dimension(a.dimension(), b.dimension());
  const DualParam grad = grad_negentropy(b);
  CompensatedSum acc;
  acc += negentropy(a);
  acc += -negentropy(b);
  for (std::size_t i = 0; i < a.dimension(); ++i) acc += -(a[i] - b[i]) * grad[i];
  return acc.value();
}

double jensen_divergence(const NaturalParam& a, const NaturalParam& b, double t) {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("jensen_divergence: skew must lie in (0,1)");
  return (1.0 - t) * negentropy(a) + t * negentropy(b) - negentropy(interpolate(a, b, t));
}

double jensen_diversity(std::span<const NaturalParam> points, std::span<const double> weights) {
  if (points.empty() || points.size() != weights.size()) {
    throw std::invalid_argument("jensen_diversity: need one weight per point");
  }
  const std::size_t dim = points.front().dimension();
  std::vector<double> centre(dim, 0.0);
  CompensatedSum weighted_values;
  CompensatedSum centre_last;
  for (std::size_t j = 0; j < points.size(); ++j) {
    require_same_dimension(points[j].dimension(), dim);
    weighted_values += weights[j] * negentropy(points[j]);
    for (std::size_t i = 0; i < dim; ++i) centre[i] += weights[j] * points[j][i];
    centre_last += weights[j] * points[j].last();
  }
  return weighted_values.value() - negentropy(NaturalParam(std::move(centre), centre_last.value()));
}

double jensen_diversity(const NaturalParam& a, const NaturalParam& b, const SkewProfile& profile) {
  profile.require_interior_mean();
  CompensatedSum acc;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    acc += profile.weights()[i] * negentropy(interpolate(a, b, profile.alpha()[i]));
  }
  return acc.value() - negentropy(interpolate(a, b, profile.alpha_bar()));
}

double mixture_cross_entropy(const NaturalParam& a, const NaturalParam& b) {
  require_same_dimension(a.dimension(), b.dimension());
  const DualParam grad = grad_negentropy(b);
  CompensatedSum acc;
  acc += -negentropy(b);
  for (std::size_t i = 0; i < a.dimension(); ++i) acc += -(a[i] - b[i]) * grad[i];
  return acc.value();
}

double disjoint_support_negentropy(const NaturalParam& theta,
                                   std::span<const double> component_entropies) {
  if (component_entropies.size() != theta.dimension() + 1) {
    throw std::invalid_argument("disjoint_support_negentropy: need D+1 component entropies");
  }
  CompensatedSum acc;
  acc += negentropy(theta);
  for (std::size_t i = 0; i < theta.dimension(); ++i) acc += -theta[i] * component_entropies[i];
  acc += -theta.last() * component_entropies.back();
  return acc.value();
}

double disjoint_support_bregman(const NaturalParam& a, const NaturalParam& b,
                                std::span<const double> component_entropies) {
  require_same_dimension(a.dimension(), b.dimension());
  // d/dtheta_i of the affine part is h_0 - h_i (h_0 = last component).
  const DualParam grad = grad_negentropy(b);
  const double h_last = component_entropies.back();
  CompensatedSum acc;
  acc += disjoint_support_negentropy(a, component_entropies);
  acc += -disjoint_support_negentropy(b, component_entropies);
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    acc += -(a[i] - b[i]) * (grad[i] + h_last - component_entropies[i]);
  }
  return acc.value();
}

}  // namespace skewjs
