#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "skewjs/mixture_family.hpp"
#include "skewjs/simplex.hpp"

// Jensen-Shannon-type centroids of categorical distributions.
//
// The barycenter minimizes L(theta) = sum_j omega_j JS^{alpha,w}(m_{theta_j} : m_theta),
// a difference of two convex functions A - B with
//   A(theta) = sum_j sum_i omega_j w_i F((theta_j theta)_{alpha_i})
//   B(theta) = sum_j omega_j F((theta_j theta)_{alpha_bar}).
// The concave-convex procedure linearizes -B at the current iterate and
// minimizes the convex remainder exactly:
//   theta_{t+1} = (grad A)^{-1}(grad B(theta_t)),
// which never increases L. When every alpha_i is 0 or 1, grad A is a
// multiple of grad F and the step has the closed form
//   theta_{t+1} = (grad F)^{-1}(sum_j omega_j grad F((theta_j theta_t)_{alpha_bar})),
// the quasi-arithmetic mean update of the plain JS centroid.

namespace skewjs {

struct SolverSettings {
  int max_iters = 1000;
  /// Stall test: stop once the energy moves less than this...
  double energy_tol = 1e-12;
  /// ...and no bin moves by more than this fraction of its value.
  double param_tol = 1e-10;
  /// Converged once ||grad A - grad B||_inf is at or below this.
  double grad_tol = 1e-8;
  /// After each CCCP step, also try a safeguarded Newton step on the loss
  /// and keep it when it lowers the loss. Plain CCCP contracts slowly when
  /// the skews are clustered.
  bool accelerate = false;
};

class CentroidProblem {
 public:
  /// Empty omega means uniform weights. Throws std::invalid_argument on
  /// n = 0, mixed dimensions, or weights that are not a positive unit vector.
  explicit CentroidProblem(std::vector<NaturalParam> thetas, std::vector<double> omega = {},
                           SkewProfile profile = SkewProfile::jensen_shannon(),
                           SolverSettings settings = {});

  /// Maps each density into the chart (with interior projection) and keeps
  /// the raw densities for reporting the objective on the original data.
  static CentroidProblem from_densities(std::span<const DiscreteDensity> densities,
                                        std::vector<double> omega = {},
                                        SkewProfile profile = SkewProfile::jensen_shannon(),
                                        SolverSettings settings = {});

  [[nodiscard]] std::span<const NaturalParam> thetas() const noexcept { return thetas_; }
  [[nodiscard]] std::span<const double> omega() const noexcept { return omega_; }
  [[nodiscard]] const SkewProfile& profile() const noexcept { return profile_; }
  [[nodiscard]] const SolverSettings& settings() const noexcept { return settings_; }
  [[nodiscard]] std::size_t size() const noexcept { return thetas_.size(); }
  [[nodiscard]] std::size_t dimension() const noexcept { return thetas_.front().dimension(); }
  [[nodiscard]] std::span<const DiscreteDensity> raw_densities() const noexcept { return raw_; }

  /// theta^(0); defaults to sum_j omega_j theta_j.
  [[nodiscard]] NaturalParam initial_point() const;
  void set_initial_point(NaturalParam theta);
  void set_settings(SolverSettings settings) { settings_ = settings; }

 private:
  std::vector<NaturalParam> thetas_;
  std::vector<double> omega_;
  SkewProfile profile_;
  SolverSettings settings_;
  std::optional<NaturalParam> initial_;
  std::vector<DiscreteDensity> raw_;
};

struct CentroidResult {
  NaturalParam theta;
  DiscreteDensity density;
  /// Objective at theta^(0), theta^(1), ...; non-increasing.
  std::vector<double> energy_trace;
  int iterations = 0;
  double stationarity_gap = 0.0;
  bool converged = false;
  /// Some iterate left the chart and was pulled back to the interior.
  bool projected = false;
};

/// A(theta) - B(theta) with the theta-independent alpha_i = 0 terms of A
/// dropped. For the plain JS profile this is
/// E(theta) = F(theta)/2 - sum_j omega_j F((theta_j + theta)/2).
[[nodiscard]] double objective(const CentroidProblem& problem, const NaturalParam& theta);

/// grad A(theta) = sum_j sum_i omega_j w_i alpha_i grad F((theta_j theta)_{alpha_i}).
[[nodiscard]] std::vector<double> convex_part_gradient(const CentroidProblem& problem,
                                                       const NaturalParam& theta);
/// grad B(theta) = sum_j omega_j alpha_bar grad F((theta_j theta)_{alpha_bar}).
[[nodiscard]] std::vector<double> concave_part_gradient(const CentroidProblem& problem,
                                                        const NaturalParam& theta);
/// ||grad A(theta) - grad B(theta)||_inf.
[[nodiscard]] double stationarity_gap(const CentroidProblem& problem, const NaturalParam& theta);

struct CccpStep {
  NaturalParam theta;
  bool projected = false;
};

/// One CCCP update from `theta`.
[[nodiscard]] CccpStep cccp_step(const CentroidProblem& problem, const NaturalParam& theta);

/// CCCP for profiles whose skews are all 0 or 1 (the plain JS profile by
/// default). Throws std::invalid_argument for other profiles.
[[nodiscard]] CentroidResult js_centroid(const CentroidProblem& problem);

/// CCCP for any profile with alpha_bar in (0,1).
[[nodiscard]] CentroidResult vector_skew_centroid(const CentroidProblem& problem);

/// sum_j omega_j JS^{alpha,w}(p_j : centroid) evaluated directly on densities.
[[nodiscard]] double centroid_loss(std::span<const DiscreteDensity> densities,
                                   std::span<const double> omega, const SkewProfile& profile,
                                   const DiscreteDensity& centroid);

/// Scalar JS centroid of Bernoulli parameters in (0,1):
///   theta <- sigmoid(sum_i w_i logit((theta + theta_i) / 2)).
[[nodiscard]] double bernoulli_centroid(std::span<const double> thetas,
                                        std::span<const double> weights = {},
                                        SolverSettings settings = {});

struct PositiveCentroid {
  PositiveDensity positive;
  DiscreteDensity normalized;
  /// Largest per-bin iteration count.
  int iterations = 0;
  bool converged = false;
};

/// Relaxation over positive measures: each bin is an independent 1-D CCCP
/// with generator x log x - x, followed by normalization. Bins are floored at
/// kInteriorEpsilon. For the plain JS profile the update is
///   x <- exp(sum_j omega_j log((x_j + x) / 2)).
[[nodiscard]] PositiveCentroid separable_positive_centroid(
    std::span<const PositiveDensity> histograms, std::span<const double> omega = {},
    const SkewProfile& profile = SkewProfile::jensen_shannon(), SolverSettings settings = {});

/// Per-bin minimizer of sum_j omega_j J+(x_j, x), normalized afterwards.
/// The stationarity condition log x - A/x = log G - 1 (A, G the weighted
/// arithmetic and geometric means of the bin) is solved by a Newton
/// iteration in log x, safeguarded by the bracket [G, A].
[[nodiscard]] PositiveCentroid jeffreys_centroid_fixed_point(
    std::span<const PositiveDensity> histograms, std::span<const double> omega = {},
    SolverSettings settings = {});

/// sum_j omega_j J+(p_j, c).
[[nodiscard]] double jeffreys_loss(std::span<const PositiveDensity> histograms,
                                   std::span<const double> omega, const PositiveDensity& centroid);

}  // namespace skewjs
