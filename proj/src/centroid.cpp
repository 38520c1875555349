#include "skewjs/centroid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "skewjs/divergences.hpp"
#include "skewjs/errors.hpp"
#include "skewjs/numeric.hpp"
#include "skewjs/parallel.hpp"

namespace skewjs {

namespace {

using Bins = std::vector<double>;

std::vector<double> uniform_weights(std::size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

std::vector<double> checked_weights(std::vector<double> omega, std::size_t n, const char* what) {
  if (omega.empty()) return uniform_weights(n);
  if (omega.size() != n) throw std::invalid_argument(std::string(what) + ": need one weight per input");
  for (double w : omega) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument(std::string(what) + ": weights must be strictly positive");
    }
  }
  if (std::abs(compensated_sum(omega) - 1.0) > kWeightTolerance) {
    throw std::invalid_argument(std::string(what) + ": weights must sum to 1");
  }
  return omega;
}

// (1 - a) x + a y over full bin vectors (last bin included).
Bins blend(const Bins& x, const Bins& y, double a) {
  const double keep = 1.0 - a;
  Bins out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = keep * x[k] + a * y[k];
  return out;
}

double negentropy_full(const Bins& x) {
  CompensatedSum acc;
  for (double v : x) acc += xlogx(v);
  return acc.value();
}

// out += scale * grad F(x), with grad F(x)_k = log x_k - log x_last.
void accumulate_gradient(const Bins& x, double scale, std::vector<CompensatedSum>& out) {
  const double log_last = std::log(x.back());
  for (std::size_t k = 0; k + 1 < x.size(); ++k) out[k] += scale * (std::log(x[k]) - log_last);
}

std::vector<double> values(const std::vector<CompensatedSum>& acc) {
  std::vector<double> out(acc.size());
  for (std::size_t k = 0; k < acc.size(); ++k) out[k] = acc[k].value();
  return out;
}

bool interior(const Bins& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return v > 0.0 && std::isfinite(v); });
}

// Builds the chart point from full bins, pulling it back inside if needed.
CccpStep make_point(Bins full) {
  bool projected = false;
  if (!interior(full)) {
    for (double& v : full) {
      if (!std::isfinite(v)) v = 0.0;
    }
    full = project_to_interior(full);
    projected = true;
  }
  const double last = full.back();
  full.pop_back();
  return {NaturalParam(std::move(full), last), projected};
}

struct NewtonDirection {
  Bins step;        // full bins, last entry balances the others
  double decrement;  // -<grad, step>
};

// Solves (diag(d) + s 11^T) step = -grad by Sherman-Morrison.
NewtonDirection solve_newton(const std::vector<double>& d, double s, const std::vector<double>& grad) {
  const std::size_t dim = d.size();
  std::vector<double> inv_d_grad(dim);
  CompensatedSum sum_inv_d;
  CompensatedSum sum_inv_d_grad;
  for (std::size_t k = 0; k < dim; ++k) {
    inv_d_grad[k] = grad[k] / d[k];
    sum_inv_d += 1.0 / d[k];
    sum_inv_d_grad += inv_d_grad[k];
  }
  const double correction = s * sum_inv_d_grad.value() / (1.0 + s * sum_inv_d.value());
  NewtonDirection out{Bins(dim + 1), 0.0};
  CompensatedSum step_sum;
  CompensatedSum decrement;
  for (std::size_t k = 0; k < dim; ++k) {
    out.step[k] = -(inv_d_grad[k] - correction / d[k]);
    step_sum += out.step[k];
    decrement += -grad[k] * out.step[k];
  }
  out.step[dim] = -step_sum.value();
  out.decrement = decrement.value();
  return out;
}

class Evaluator {
 public:
  explicit Evaluator(const CentroidProblem& problem) : problem_(problem) {
    inputs_.reserve(problem.size());
    for (const auto& t : problem.thetas()) inputs_.push_back(t.full_bins());
  }

  // A (without alpha = 0 terms) minus B.
  double objective(const Bins& x) const { return convex_part(x) - concave_part(x); }

  double convex_part(const Bins& x) const {
    const auto& profile = problem_.profile();
    CompensatedSum acc;
    for (std::size_t i = 0; i < profile.size(); ++i) {
      const double a = profile.alpha()[i];
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < inputs_.size(); ++j) {
        acc += problem_.omega()[j] * profile.weights()[i] * negentropy_full(blend(inputs_[j], x, a));
      }
    }
    return acc.value();
  }

  double concave_part(const Bins& x) const {
    const double abar = problem_.profile().alpha_bar();
    CompensatedSum acc;
    for (std::size_t j = 0; j < inputs_.size(); ++j) {
      acc += problem_.omega()[j] * negentropy_full(blend(inputs_[j], x, abar));
    }
    return acc.value();
  }

  std::vector<double> convex_gradient(const Bins& x) const {
    const auto& profile = problem_.profile();
    std::vector<CompensatedSum> acc(x.size() - 1);
    for (std::size_t i = 0; i < profile.size(); ++i) {
      const double a = profile.alpha()[i];
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < inputs_.size(); ++j) {
        accumulate_gradient(blend(inputs_[j], x, a), problem_.omega()[j] * profile.weights()[i] * a, acc);
      }
    }
    return values(acc);
  }

  // Without the alpha_bar factor: sum_j omega_j grad F((theta_j x)_abar).
  std::vector<double> mean_gradient_at_centre(const Bins& x) const {
    const double abar = problem_.profile().alpha_bar();
    std::vector<CompensatedSum> acc(x.size() - 1);
    for (std::size_t j = 0; j < inputs_.size(); ++j) {
      accumulate_gradient(blend(inputs_[j], x, abar), problem_.omega()[j], acc);
    }
    return values(acc);
  }

  std::vector<double> concave_gradient(const Bins& x) const {
    auto g = mean_gradient_at_centre(x);
    for (double& v : g) v *= problem_.profile().alpha_bar();
    return g;
  }

  // Minimizes A(x) - <target, x> by damped Newton, starting at `start`. The
  // Hessian of A is diag(d) + s 11^T, inverted with Sherman-Morrison.
  Bins minimize_convex_surrogate(const std::vector<double>& target, Bins x) const {
    const auto& profile = problem_.profile();
    const std::size_t dim = x.size() - 1;
    auto surrogate = [&](const Bins& y) { return convex_part(y) - compensated_dot(target, std::span(y).first(dim)); };

    constexpr int kMaxInner = 200;
    double value = surrogate(x);
    for (int iter = 0; iter < kMaxInner; ++iter) {
      std::vector<double> grad = convex_gradient(x);
      for (std::size_t k = 0; k < dim; ++k) grad[k] -= target[k];

      std::vector<CompensatedSum> diag(dim);
      CompensatedSum rank_one;
      for (std::size_t i = 0; i < profile.size(); ++i) {
        const double a = profile.alpha()[i];
        if (a == 0.0) continue;
        for (std::size_t j = 0; j < inputs_.size(); ++j) {
          const double c = problem_.omega()[j] * profile.weights()[i] * a * a;
          const Bins m = blend(inputs_[j], x, a);
          for (std::size_t k = 0; k < dim; ++k) diag[k] += c / m[k];
          rank_one += c / m.back();
        }
      }
      const NewtonDirection nd = solve_newton(values(diag), rank_one.value(), grad);
      const Bins& step = nd.step;

      double relative = 0.0;
      double max_t = 1.0;
      for (std::size_t k = 0; k <= dim; ++k) {
        relative = std::max(relative, std::abs(step[k]) / x[k]);
        if (step[k] < 0.0) max_t = std::min(max_t, 0.9 * x[k] / -step[k]);
      }
      const double lambda_sq = nd.decrement;
      if (!(lambda_sq > 0.0) || relative < 1e-15) break;

      auto moved = [&](double t) {
        Bins y(x);
        for (std::size_t k = 0; k <= dim; ++k) y[k] += t * step[k];
        return y;
      };

      // Below the rounding level of the surrogate, Armijo cannot resolve the
      // decrease any more; take the Newton step directly.
      if (lambda_sq < 1e-12 * (1.0 + std::abs(value)) && max_t == 1.0) {
        Bins y = moved(1.0);
        if (!interior(y)) break;
        x = std::move(y);
        value = surrogate(x);
        if (relative < 1e-13) break;
        continue;
      }

      double t = max_t;
      bool accepted = false;
      for (int backtrack = 0; backtrack < 60; ++backtrack, t *= 0.5) {
        Bins y = moved(t);
        if (!interior(y)) continue;
        const double trial = surrogate(y);
        if (trial <= value - 1e-4 * t * lambda_sq) {
          x = std::move(y);
          value = trial;
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
    }
    return x;
  }

  // One Newton step on the objective itself, safeguarded by a fraction to
  // the boundary and Armijo backtracking. Returns x unchanged unless the
  // objective drops below `value`.
  Bins newton_on_objective(Bins x, double& value) const {
    const auto& profile = problem_.profile();
    const double abar = profile.alpha_bar();
    const std::size_t dim = x.size() - 1;
    std::vector<double> grad = convex_gradient(x);
    const std::vector<double> concave = concave_gradient(x);
    for (std::size_t k = 0; k < dim; ++k) grad[k] -= concave[k];

    // Second derivative per bin: sum_i w_i m_i (alpha_i / m_i - abar / mbar)^2.
    std::vector<CompensatedSum> curvature(dim + 1);
    for (std::size_t j = 0; j < inputs_.size(); ++j) {
      const Bins centre = blend(inputs_[j], x, abar);
      for (std::size_t i = 0; i < profile.size(); ++i) {
        const double a = profile.alpha()[i];
        const double c = problem_.omega()[j] * profile.weights()[i];
        const Bins m = blend(inputs_[j], x, a);
        for (std::size_t k = 0; k <= dim; ++k) {
          const double r = a / m[k] - abar / centre[k];
          curvature[k] += c * m[k] * r * r;
        }
      }
    }
    std::vector<double> d = values(curvature);
    if (!std::all_of(d.begin(), d.end(), [](double v) { return v > 0.0 && std::isfinite(v); })) return x;
    const double s = d.back();
    d.pop_back();

    const NewtonDirection nd = solve_newton(d, s, grad);
    if (!(nd.decrement > 0.0)) return x;
    double t = 1.0;
    for (std::size_t k = 0; k <= dim; ++k) {
      if (nd.step[k] < 0.0) t = std::min(t, 0.9 * x[k] / -nd.step[k]);
    }
    for (int backtrack = 0; backtrack < 60; ++backtrack, t *= 0.5) {
      Bins y(x);
      for (std::size_t k = 0; k <= dim; ++k) y[k] += t * nd.step[k];
      if (!interior(y)) continue;
      const double trial = objective(y);
      if (trial < value && trial <= value - 1e-4 * t * nd.decrement) {
        value = trial;
        return y;
      }
    }
    return x;
  }

 private:
  const CentroidProblem& problem_;
  std::vector<Bins> inputs_;
};

// Largest per-bin change relative to the previous bin value.
double max_rel_diff(const Bins& a, const Bins& b) {
  double out = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) out = std::max(out, std::abs(a[k] - b[k]) / a[k]);
  return out;
}

CentroidResult run_cccp(const CentroidProblem& problem) {
  const Evaluator eval(problem);
  const auto& settings = problem.settings();

  NaturalParam theta = problem.initial_point();
  Bins x = theta.full_bins();
  double energy = eval.objective(x);
  CentroidResult result{theta, to_density(theta), {energy}, 0, 0.0, false, false};

  double gap = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= settings.max_iters; ++it) {
    CccpStep step = cccp_step(problem, theta);
    result.projected = result.projected || step.projected;
    Bins next = step.theta.full_bins();
    double next_energy = eval.objective(next);
    if (settings.accelerate) {
      next = eval.newton_on_objective(std::move(next), next_energy);
      step = make_point(next);
    }
    result.energy_trace.push_back(next_energy);

    const double moved = max_rel_diff(x, next);
    const double energy_change = std::abs(energy - next_energy);
    theta = std::move(step.theta);
    x = std::move(next);
    energy = next_energy;
    result.iterations = it;

    gap = stationarity_gap(problem, theta);
    if (gap <= settings.grad_tol) break;
    if (energy_change < settings.energy_tol && moved < settings.param_tol) break;
  }
  result.stationarity_gap = stationarity_gap(problem, theta);
  result.converged = result.stationarity_gap <= settings.grad_tol;
  result.density = to_density(theta);
  result.theta = std::move(theta);
  return result;
}

}  // namespace

CentroidProblem::CentroidProblem(std::vector<NaturalParam> thetas, std::vector<double> omega,
                                 SkewProfile profile, SolverSettings settings)
    : thetas_(std::move(thetas)), profile_(std::move(profile)), settings_(settings) {
  if (thetas_.empty()) throw std::invalid_argument("CentroidProblem: needs at least one input");
  for (const auto& t : thetas_) require_same_dimension(t.dimension(), thetas_.front().dimension());
  omega_ = checked_weights(std::move(omega), thetas_.size(), "CentroidProblem");
  profile_.require_interior_mean();
  if (settings_.max_iters < 1) throw std::invalid_argument("CentroidProblem: max_iters must be >= 1");
}

CentroidProblem CentroidProblem::from_densities(std::span<const DiscreteDensity> densities,
                                                std::vector<double> omega, SkewProfile profile,
                                                SolverSettings settings) {
  std::vector<NaturalParam> thetas;
  thetas.reserve(densities.size());
  for (const auto& p : densities) thetas.push_back(to_natural(p));
  CentroidProblem problem(std::move(thetas), std::move(omega), std::move(profile), settings);
  problem.raw_.assign(densities.begin(), densities.end());
  return problem;
}

NaturalParam CentroidProblem::initial_point() const {
  if (initial_) return *initial_;
  std::vector<CompensatedSum> acc(dimension());
  CompensatedSum last;
  for (std::size_t j = 0; j < thetas_.size(); ++j) {
    for (std::size_t k = 0; k < dimension(); ++k) acc[k] += omega_[j] * thetas_[j][k];
    last += omega_[j] * thetas_[j].last();
  }
  return NaturalParam(values(acc), last.value());
}

void CentroidProblem::set_initial_point(NaturalParam theta) {
  require_same_dimension(theta.dimension(), dimension());
  initial_ = std::move(theta);
}

double objective(const CentroidProblem& problem, const NaturalParam& theta) {
  require_same_dimension(theta.dimension(), problem.dimension());
  return Evaluator(problem).objective(theta.full_bins());
}

std::vector<double> convex_part_gradient(const CentroidProblem& problem, const NaturalParam& theta) {
  require_same_dimension(theta.dimension(), problem.dimension());
  return Evaluator(problem).convex_gradient(theta.full_bins());
}

std::vector<double> concave_part_gradient(const CentroidProblem& problem, const NaturalParam& theta) {
  require_same_dimension(theta.dimension(), problem.dimension());
  return Evaluator(problem).concave_gradient(theta.full_bins());
}

double stationarity_gap(const CentroidProblem& problem, const NaturalParam& theta) {
  const auto a = convex_part_gradient(problem, theta);
  const auto b = concave_part_gradient(problem, theta);
  double gap = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) gap = std::max(gap, std::abs(a[k] - b[k]));
  return gap;
}

CccpStep cccp_step(const CentroidProblem& problem, const NaturalParam& theta) {
  require_same_dimension(theta.dimension(), problem.dimension());
  const Evaluator eval(problem);
  const Bins x = theta.full_bins();

  if (problem.profile().is_binary()) {
    // grad A = alpha_bar grad F, so the alpha_bar factors cancel.
    const auto eta = eval.mean_gradient_at_centre(x);
    const double shift = std::max(0.0, *std::max_element(eta.begin(), eta.end()));
    Bins full(eta.size() + 1);
    CompensatedSum denom;
    for (std::size_t k = 0; k < eta.size(); ++k) {
      full[k] = std::exp(eta[k] - shift);
      denom += full[k];
    }
    full.back() = std::exp(-shift);
    denom += full.back();
    const double z = denom.value();
    for (double& v : full) v /= z;
    return make_point(std::move(full));
  }

  return make_point(eval.minimize_convex_surrogate(eval.concave_gradient(x), x));
}

CentroidResult js_centroid(const CentroidProblem& problem) {
  if (!problem.profile().is_binary()) {
    throw std::invalid_argument("js_centroid: profile skews must all be 0 or 1");
  }
  return run_cccp(problem);
}

CentroidResult vector_skew_centroid(const CentroidProblem& problem) { return run_cccp(problem); }

double centroid_loss(std::span<const DiscreteDensity> densities, std::span<const double> omega,
                     const SkewProfile& profile, const DiscreteDensity& centroid) {
  const auto weights = checked_weights({omega.begin(), omega.end()}, densities.size(), "centroid_loss");
  CompensatedSum acc;
  for (std::size_t j = 0; j < densities.size(); ++j) {
    acc += weights[j] * vector_skew_js(densities[j], centroid, profile);
  }
  return acc.value();
}

double bernoulli_centroid(std::span<const double> thetas, std::span<const double> weights,
                          SolverSettings settings) {
  if (thetas.empty()) throw std::invalid_argument("bernoulli_centroid: needs at least one input");
  for (double t : thetas) {
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("bernoulli_centroid: inputs must lie in (0,1)");
  }
  const auto w = checked_weights({weights.begin(), weights.end()}, thetas.size(), "bernoulli_centroid");
  auto logit = [](double x) { return std::log(x) - std::log1p(-x); };
  auto binary_negentropy = [](double x) { return xlogx(x) + xlogx(1.0 - x); };
  auto mean_logit_of_midpoints = [&](double x) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < thetas.size(); ++i) acc += w[i] * logit(0.5 * (x + thetas[i]));
    return acc.value();
  };
  auto energy = [&](double x) {
    CompensatedSum acc;
    acc += 0.5 * binary_negentropy(x);
    for (std::size_t i = 0; i < thetas.size(); ++i) acc += -w[i] * binary_negentropy(0.5 * (x + thetas[i]));
    return acc.value();
  };

  double x = compensated_dot(w, thetas);
  double e = energy(x);
  for (int it = 0; it < settings.max_iters; ++it) {
    const double eta = mean_logit_of_midpoints(x);
    const double next = eta >= 0.0 ? 1.0 / (1.0 + std::exp(-eta)) : std::exp(eta) / (1.0 + std::exp(eta));
    const double next_e = energy(next);
    const double moved = std::abs(next - x);
    const double energy_change = std::abs(e - next_e);
    x = next;
    e = next_e;
    const double gap = 0.5 * std::abs(logit(x) - mean_logit_of_midpoints(x));
    if (gap <= settings.grad_tol) break;
    if (energy_change < settings.energy_tol && moved < settings.param_tol) break;
  }
  return x;
}

namespace {

struct ScalarSolve {
  double value;
  int iterations;
  bool converged;
};

// 1-D CCCP for the generator x log x - x on one bin.
ScalarSolve positive_bin_centroid(const std::vector<double>& xs, std::span<const double> omega,
                                  const SkewProfile& profile, const SolverSettings& settings) {
  const double abar = profile.alpha_bar();
  auto blend1 = [](double a, double b, double t) { return (1.0 - t) * a + t * b; };
  // B'(x) / abar
  auto centre_log_mean = [&](double x) {
    CompensatedSum acc;
    for (std::size_t j = 0; j < xs.size(); ++j) acc += omega[j] * std::log(blend1(xs[j], x, abar));
    return acc.value();
  };
  auto convex_derivative = [&](double x) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < profile.size(); ++i) {
      const double a = profile.alpha()[i];
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < xs.size(); ++j) {
        acc += omega[j] * profile.weights()[i] * a * std::log(blend1(xs[j], x, a));
      }
    }
    return acc.value();
  };
  auto convex_curvature = [&](double x) {  // d/du of A'(e^u)
    CompensatedSum acc;
    for (std::size_t i = 0; i < profile.size(); ++i) {
      const double a = profile.alpha()[i];
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < xs.size(); ++j) {
        acc += omega[j] * profile.weights()[i] * a * a * x / blend1(xs[j], x, a);
      }
    }
    return acc.value();
  };
  // Solves A'(e^u) = target for u, safeguarded Newton inside a bracket.
  auto invert_convex_derivative = [&](double target, double x0) {
    double lo = std::log(x0) - 1.0;
    double hi = std::log(x0) + 1.0;
    constexpr double kLowest = -700.0;
    while (convex_derivative(std::exp(lo)) > target && lo > kLowest) lo = std::max(kLowest, lo - 2.0 * (hi - lo));
    while (convex_derivative(std::exp(hi)) < target) hi += 2.0 * (hi - lo);
    double u = std::log(x0);
    if (u <= lo || u >= hi) u = 0.5 * (lo + hi);
    for (int k = 0; k < 200; ++k) {
      const double f = convex_derivative(std::exp(u)) - target;
      if (f > 0.0) hi = u; else lo = u;
      double next = u - f / convex_curvature(std::exp(u));
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - u) < 1e-15 * (1.0 + std::abs(u))) {
        u = next;
        break;
      }
      u = next;
    }
    return std::exp(u);
  };

  double x = compensated_dot(omega, xs);
  for (int it = 1; it <= settings.max_iters; ++it) {
    double next;
    if (profile.is_binary()) {
      next = std::exp(centre_log_mean(x));
    } else {
      next = invert_convex_derivative(abar * centre_log_mean(x), x);
    }
    const double moved = std::abs(next - x) / x;
    x = next;
    const double gap = std::abs(convex_derivative(x) - abar * centre_log_mean(x));
    if (gap <= settings.grad_tol) return {x, it, true};
    if (moved < settings.param_tol * 1e-3) return {x, it, false};
  }
  return {x, settings.max_iters, false};
}

std::vector<std::vector<double>> floored_bins(std::span<const PositiveDensity> histograms, const char* what) {
  if (histograms.empty()) throw std::invalid_argument(std::string(what) + ": needs at least one histogram");
  std::vector<std::vector<double>> out;
  for (const auto& h : histograms) {
    require_same_dimension(h.size(), histograms.front().size());
    std::vector<double> bins(h.values());
    for (double& b : bins) b = std::max(b, kInteriorEpsilon);
    out.push_back(std::move(bins));
  }
  return out;
}

PositiveCentroid assemble(std::vector<double> bins, const std::vector<int>& iterations,
                          const std::vector<char>& converged) {
  PositiveDensity positive(std::move(bins));
  DiscreteDensity normalized = normalize(positive);
  return {std::move(positive), std::move(normalized),
          *std::max_element(iterations.begin(), iterations.end()),
          std::all_of(converged.begin(), converged.end(), [](char c) { return c != 0; })};
}

}  // namespace

PositiveCentroid separable_positive_centroid(std::span<const PositiveDensity> histograms,
                                             std::span<const double> omega, const SkewProfile& profile,
                                             SolverSettings settings) {
  const auto inputs = floored_bins(histograms, "separable_positive_centroid");
  const auto w = checked_weights({omega.begin(), omega.end()}, inputs.size(), "separable_positive_centroid");
  profile.require_interior_mean();
  const std::size_t d = inputs.front().size();

  std::vector<double> bins(d);
  std::vector<int> iterations(d);
  std::vector<char> converged(d);
  parallel_for(d, [&](std::size_t b) {
    std::vector<double> column(inputs.size());
    for (std::size_t j = 0; j < inputs.size(); ++j) column[j] = inputs[j][b];
    const ScalarSolve s = positive_bin_centroid(column, w, profile, settings);
    bins[b] = s.value;
    iterations[b] = s.iterations;
    converged[b] = s.converged ? 1 : 0;
  });
  return assemble(std::move(bins), iterations, converged);
}

PositiveCentroid jeffreys_centroid_fixed_point(std::span<const PositiveDensity> histograms,
                                               std::span<const double> omega, SolverSettings settings) {
  const auto inputs = floored_bins(histograms, "jeffreys_centroid_fixed_point");
  const auto w = checked_weights({omega.begin(), omega.end()}, inputs.size(), "jeffreys_centroid_fixed_point");
  const std::size_t d = inputs.front().size();

  std::vector<double> bins(d);
  std::vector<int> iterations(d);
  std::vector<char> converged(d);
  parallel_for(d, [&](std::size_t b) {
    CompensatedSum arith;
    CompensatedSum log_geo;
    for (std::size_t j = 0; j < inputs.size(); ++j) {
      arith += w[j] * inputs[j][b];
      log_geo += w[j] * std::log(inputs[j][b]);
    }
    const double a = arith.value();
    const double lg = log_geo.value();
    // phi(u) = u - a e^{-u} - lg + 1 is increasing, phi(lg) <= 0 <= phi(log a).
    double lo = std::min(lg, std::log(a));
    double hi = std::log(a);
    double u = 0.5 * (lo + hi);
    int it = 0;
    bool done = hi - lo <= 1e-15 * (1.0 + std::abs(hi));
    if (done) u = hi;
    while (!done && it < settings.max_iters) {
      ++it;
      const double phi = u - a * std::exp(-u) - lg + 1.0;
      if (phi > 0.0) hi = u; else lo = u;
      double next = u - phi / (1.0 + a * std::exp(-u));
      if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
      done = std::abs(next - u) <= 1e-15 * (1.0 + std::abs(u)) || phi == 0.0;
      u = next;
    }
    bins[b] = std::exp(u);
    iterations[b] = it;
    converged[b] = done ? 1 : 0;
  });
  return assemble(std::move(bins), iterations, converged);
}

double jeffreys_loss(std::span<const PositiveDensity> histograms, std::span<const double> omega,
                     const PositiveDensity& centroid) {
  const auto w = checked_weights({omega.begin(), omega.end()}, histograms.size(), "jeffreys_loss");
  CompensatedSum acc;
  for (std::size_t j = 0; j < histograms.size(); ++j) acc += w[j] * jeffreys_plus(histograms[j], centroid);
  return acc.value();
}

}  // namespace skewjs
