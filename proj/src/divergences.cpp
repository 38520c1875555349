#include "skewjs/divergences.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "skewjs/errors.hpp"
#include "skewjs/numeric.hpp"

namespace skewjs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_open_unit(double a, const char* what) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument(std::string(what) + ": skew must lie in (0,1)");
}

void require_closed_unit(double a, const char* what) {
  if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument(std::string(what) + ": skew must lie in [0,1]");
}

double weighted_mixture_entropies(std::span<const double> p, std::span<const double> q,
                                  const SkewProfile& profile) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    acc += profile.weights()[i] * detail::shannon_sum(detail::mix_bins(p, q, profile.alpha()[i]));
  }
  return acc.value();
}

double weighted_mixture_kls(std::span<const double> p, std::span<const double> q,
                            const SkewProfile& profile) {
  const auto centre = detail::mix_bins(p, q, profile.alpha_bar());
  CompensatedSum acc;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    acc += profile.weights()[i] * detail::kl_sum(detail::mix_bins(p, q, profile.alpha()[i]), centre);
  }
  return acc.value();
}

}  // namespace

namespace detail {

double shannon_sum(std::span<const double> x) {
  CompensatedSum acc;
  for (double v : x) acc += -xlogx(v);
  return acc.value();
}

double kl_sum(std::span<const double> p, std::span<const double> q) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      if (q[i] <= 0.0) return kInf;
      acc += p[i] * std::log(p[i] / q[i]);
    }
  }
  return acc.value();
}

}  // namespace detail

double entropy(const DiscreteDensity& p) { return detail::shannon_sum(p.bins()); }

double cross_entropy(const DiscreteDensity& p, const DiscreteDensity& q) {
  require_same_dimension(p.size(), q.size());
  CompensatedSum acc;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      if (q[i] <= 0.0) return kInf;
      acc += -p[i] * std::log(q[i]);
    }
  }
  return acc.value();
}

double kl(const DiscreteDensity& p, const DiscreteDensity& q) {
  require_same_dimension(p.size(), q.size());
  return detail::kl_sum(p.bins(), q.bins());
}

double kl_plus(const PositiveDensity& p, const PositiveDensity& q) {
  require_same_dimension(p.size(), q.size());
  CompensatedSum acc;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      if (q[i] <= 0.0) return kInf;
      acc += p[i] * std::log(p[i] / q[i]);
    }
    acc += q[i] - p[i];
  }
  return acc.value();
}

double jeffreys(const DiscreteDensity& p, const DiscreteDensity& q) { return kl(p, q) + kl(q, p); }

double jeffreys_plus(const PositiveDensity& p, const PositiveDensity& q) {
  return kl_plus(p, q) + kl_plus(q, p);
}

double js(const DiscreteDensity& p, const DiscreteDensity& q) {
  require_same_dimension(p.size(), q.size());
  CompensatedSum acc;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) acc += p[i] * std::log(p[i] / m);
    if (q[i] > 0.0) acc += q[i] * std::log(q[i] / m);
  }
  return 0.5 * acc.value();
}

double skew_k(const DiscreteDensity& p, const DiscreteDensity& q, double alpha) {
  require_same_dimension(p.size(), q.size());
  require_closed_unit(alpha, "skew_k");
  return detail::kl_sum(p.bins(), detail::mix_bins(p.bins(), q.bins(), alpha));
}

double skew_js_asym(const DiscreteDensity& p, const DiscreteDensity& q, double alpha) {
  require_same_dimension(p.size(), q.size());
  require_open_unit(alpha, "skew_js_asym");
  const auto m = detail::mix_bins(p.bins(), q.bins(), alpha);
  return (1.0 - alpha) * detail::kl_sum(p.bins(), m) + alpha * detail::kl_sum(q.bins(), m);
}

double skew_js_sym(const DiscreteDensity& p, const DiscreteDensity& q, double alpha) {
  require_open_unit(alpha, "skew_js_sym");
  return 0.5 * (skew_k(p, q, alpha) + skew_k(q, p, alpha));
}

double kl_alpha_beta(const DiscreteDensity& p, const DiscreteDensity& q, double alpha, double beta) {
  require_same_dimension(p.size(), q.size());
  require_closed_unit(alpha, "kl_alpha_beta");
  require_open_unit(beta, "kl_alpha_beta");
  if (alpha == beta) throw std::invalid_argument("kl_alpha_beta: alpha must differ from beta");
  return detail::kl_sum(detail::mix_bins(p.bins(), q.bins(), alpha),
                        detail::mix_bins(p.bins(), q.bins(), beta));
}

double vector_skew_js(const DiscreteDensity& p, const DiscreteDensity& q, const SkewProfile& profile) {
  require_same_dimension(p.size(), q.size());
  profile.require_interior_mean();
  const double value =
      detail::shannon_sum(detail::mix_bins(p.bins(), q.bins(), profile.alpha_bar())) -
      weighted_mixture_entropies(p.bins(), q.bins(), profile);
#ifndef NDEBUG
  const double reference = weighted_mixture_kls(p.bins(), q.bins(), profile);
  assert(std::abs(value - reference) <= 1e-9 * (1.0 + reference));
#endif
  return value;
}

double vector_skew_js_kl_form(const DiscreteDensity& p, const DiscreteDensity& q,
                              const SkewProfile& profile) {
  require_same_dimension(p.size(), q.size());
  profile.require_interior_mean();
  return weighted_mixture_kls(p.bins(), q.bins(), profile);
}

double vector_skew_js_positive(const PositiveDensity& p, const PositiveDensity& q,
                               const SkewProfile& profile) {
  require_same_dimension(p.size(), q.size());
  profile.require_interior_mean();
  // h+(x) = -sum (x log x + x)
  auto extended_entropy = [](std::span<const double> x) {
    return detail::shannon_sum(x) - compensated_sum(x);
  };
  const double centre = extended_entropy(detail::mix_bins(p.bins(), q.bins(), profile.alpha_bar()));
  CompensatedSum acc;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    acc += profile.weights()[i] *
           extended_entropy(detail::mix_bins(p.bins(), q.bins(), profile.alpha()[i]));
  }
  return centre - acc.value();
}

double vector_skew_js_positive_kl_form(const PositiveDensity& p, const PositiveDensity& q,
                                       const SkewProfile& profile) {
  require_same_dimension(p.size(), q.size());
  profile.require_interior_mean();
  const PositiveDensity centre(detail::mix_bins(p.bins(), q.bins(), profile.alpha_bar()), trusted);
  CompensatedSum acc;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const PositiveDensity m(detail::mix_bins(p.bins(), q.bins(), profile.alpha()[i]), trusted);
    acc += profile.weights()[i] * kl_plus(m, centre);
  }
  return acc.value();
}

double sym_vector_skew_js(const DiscreteDensity& p, const DiscreteDensity& q,
                          const SkewProfile& profile) {
  require_same_dimension(p.size(), q.size());
  // mix_bins(q, p, a) is (pq)_{1-a} evaluated with the same products as
  // mix_bins(p, q, a), so swapping p and q only reorders a commutative sum.
  const double centre = detail::shannon_sum(detail::mix_bins(p.bins(), q.bins(), 0.5));
  CompensatedSum acc;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double a = profile.alpha()[i];
    const double pair = detail::shannon_sum(detail::mix_bins(p.bins(), q.bins(), a)) +
                        detail::shannon_sum(detail::mix_bins(q.bins(), p.bins(), a));
    acc += profile.weights()[i] * 0.5 * pair;
  }
  return centre - acc.value();
}

SkewProfile symmetrize_by_doubling(const SkewProfile& profile) {
  std::vector<double> alpha(profile.alpha().begin(), profile.alpha().end());
  std::vector<double> weights;
  weights.reserve(2 * profile.size());
  for (double a : profile.alpha()) alpha.push_back(1.0 - a);
  for (int copy = 0; copy < 2; ++copy) {
    for (double w : profile.weights()) weights.push_back(0.5 * w);
  }
  return SkewProfile(std::move(alpha), std::move(weights));
}

double bi_vector_skew(const DiscreteDensity& p, const DiscreteDensity& q,
                      const DensityDivergence& base, std::span<const double> alpha,
                      std::span<const double> beta, std::span<const double> weights) {
  require_same_dimension(p.size(), q.size());
  if (alpha.size() != beta.size() || alpha.size() != weights.size() || alpha.empty()) {
    throw std::invalid_argument("bi_vector_skew: alpha, beta and weights need equal non-zero length");
  }
  if (std::equal(alpha.begin(), alpha.end(), beta.begin())) {
    throw std::invalid_argument("bi_vector_skew: alpha and beta must differ");
  }
  CompensatedSum acc;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    require_closed_unit(alpha[i], "bi_vector_skew");
    require_closed_unit(beta[i], "bi_vector_skew");
    if (!(weights[i] > 0.0)) throw std::invalid_argument("bi_vector_skew: weights must be positive");
    const double term = base(mix(p, q, alpha[i]), mix(p, q, beta[i]));
    if (std::isinf(term)) return kInf;
    acc += weights[i] * term;
  }
  return acc.value();
}

double mean_symmetrized_kl(const DiscreteDensity& p, const DiscreteDensity& q,
                           SymmetrizingMean mean) {
  const double forward = kl(p, q);
  const double reverse = kl(q, p);
  switch (mean) {
    case SymmetrizingMean::arithmetic:
      return forward + reverse;
    case SymmetrizingMean::harmonic: {
      const bool inf_f = std::isinf(forward);
      const bool inf_r = std::isinf(reverse);
      if (inf_f && inf_r) return kInf;
      if (inf_f) return 2.0 * reverse;
      if (inf_r) return 2.0 * forward;
      const double total = forward + reverse;
      return total > 0.0 ? 2.0 * forward * reverse / total : 0.0;
    }
    case SymmetrizingMean::min:
      return std::min(forward, reverse);
    case SymmetrizingMean::max:
      return std::max(forward, reverse);
  }
  throw std::invalid_argument("mean_symmetrized_kl: unknown mean");
}

}  // namespace skewjs
