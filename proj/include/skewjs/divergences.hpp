#pragma once

#include <functional>
#include <span>

#include "skewjs/simplex.hpp"

// Two-point divergences on discrete and positive densities, in nats.
//
// Conventions: 0 log 0 = 0 and log(0/0) = 0, implemented by skipping bins
// where the left density vanishes. A bin with p_i > 0 and q_i = 0 makes the
// Kullback-Leibler family return +infinity (never NaN).

namespace skewjs {

/// Shannon entropy -sum p log p.
[[nodiscard]] double entropy(const DiscreteDensity& p);

/// Cross-entropy -sum p log q; +inf when p puts mass where q has none.
[[nodiscard]] double cross_entropy(const DiscreteDensity& p, const DiscreteDensity& q);

/// Kullback-Leibler divergence KL(p:q).
[[nodiscard]] double kl(const DiscreteDensity& p, const DiscreteDensity& q);

/// Extended KL for unnormalized densities: sum p log(p/q) + q - p.
[[nodiscard]] double kl_plus(const PositiveDensity& p, const PositiveDensity& q);

/// Jeffreys divergence KL(p:q) + KL(q:p).
[[nodiscard]] double jeffreys(const DiscreteDensity& p, const DiscreteDensity& q);
[[nodiscard]] double jeffreys_plus(const PositiveDensity& p, const PositiveDensity& q);

/// Jensen-Shannon divergence; always in [0, log 2].
[[nodiscard]] double js(const DiscreteDensity& p, const DiscreteDensity& q);

/// K_a(p:q) = KL(p : (pq)_a), a in [0,1].
[[nodiscard]] double skew_k(const DiscreteDensity& p, const DiscreteDensity& q, double alpha);

/// (1-a) KL(p:(pq)_a) + a KL(q:(pq)_a), a in (0,1).
[[nodiscard]] double skew_js_asym(const DiscreteDensity& p, const DiscreteDensity& q, double alpha);

/// Symmetric scalar skew JSD: (K_a(p:q) + K_a(q:p)) / 2, a in (0,1).
[[nodiscard]] double skew_js_sym(const DiscreteDensity& p, const DiscreteDensity& q, double alpha);

/// KL((pq)_alpha : (pq)_beta) with alpha in [0,1], beta in (0,1), alpha != beta.
/// Bounded above by log(1 / (beta (1 - beta))).
[[nodiscard]] double kl_alpha_beta(const DiscreteDensity& p, const DiscreteDensity& q, double alpha,
                                   double beta);

/// Weighted vector-skew Jensen-Shannon divergence
///   h((pq)_abar) - sum_i w_i h((pq)_{alpha_i}),
/// the entropy form, which is finite for any pair of supports. The profile
/// must have alpha_bar in (0,1).
[[nodiscard]] double vector_skew_js(const DiscreteDensity& p, const DiscreteDensity& q,
                                    const SkewProfile& profile);

/// Same quantity through its defining sum sum_i w_i KL((pq)_{alpha_i} : (pq)_abar).
[[nodiscard]] double vector_skew_js_kl_form(const DiscreteDensity& p, const DiscreteDensity& q,
                                            const SkewProfile& profile);

/// Vector-skew JSD extended to positive densities (sum of KL+ terms). Equal to
/// the entropy gap with h+(x) = -sum (x log x + x); the mass terms cancel.
[[nodiscard]] double vector_skew_js_positive(const PositiveDensity& p, const PositiveDensity& q,
                                             const SkewProfile& profile);
[[nodiscard]] double vector_skew_js_positive_kl_form(const PositiveDensity& p,
                                                     const PositiveDensity& q,
                                                     const SkewProfile& profile);

/// Symmetric family sum_i w_i JS_s^{alpha_i}(p,q) with
/// JS_s^a(p,q) = h((pq)_{1/2}) - (h((pq)_a) + h((pq)_{1-a})) / 2.
/// The profile's mean skew is not used and may sit on the boundary.
[[nodiscard]] double sym_vector_skew_js(const DiscreteDensity& p, const DiscreteDensity& q,
                                        const SkewProfile& profile);

/// (alpha, w) -> ((alpha, 1 - alpha), (w/2, w/2)); the resulting vector-skew
/// JSD is symmetric in its arguments.
[[nodiscard]] SkewProfile symmetrize_by_doubling(const SkewProfile& profile);

using DensityDivergence = std::function<double(const DiscreteDensity&, const DiscreteDensity&)>;

/// Bi-vector-skew divergence sum_i w_i D((pq)_{alpha_i} : (pq)_{beta_i}).
/// Weights only need to be positive; alpha and beta must differ as vectors.
[[nodiscard]] double bi_vector_skew(const DiscreteDensity& p, const DiscreteDensity& q,
                                    const DensityDivergence& base, std::span<const double> alpha,
                                    std::span<const double> beta, std::span<const double> weights);

enum class SymmetrizingMean {
  arithmetic,  // twice the arithmetic mean: Jeffreys
  harmonic,    // resistor average 2ab/(a+b)
  min,
  max,
};

/// M(KL(p:q), KL(q:p)) for the chosen mean. The harmonic mean with exactly
/// one infinite side returns twice the finite side (its limit).
[[nodiscard]] double mean_symmetrized_kl(const DiscreteDensity& p, const DiscreteDensity& q,
                                         SymmetrizingMean mean);

namespace detail {

/// -sum x log x over raw bins (no mass correction).
[[nodiscard]] double shannon_sum(std::span<const double> x);
/// sum_{p>0} p log(p/q), +inf on support violation.
[[nodiscard]] double kl_sum(std::span<const double> p, std::span<const double> q);

}  // namespace detail

}  // namespace skewjs
