#include "skewjs/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "skewjs/errors.hpp"
#include "skewjs/mixture_family.hpp"
#include "skewjs/numeric.hpp"
#include "skewjs/parallel.hpp"

namespace skewjs {

namespace {

void validate(std::span<const DiscreteDensity> histograms, const ClusteringConfig& config) {
  if (config.k < 1) throw std::invalid_argument("clustering: k must be at least 1");
  if (histograms.size() < config.k) {
    throw std::invalid_argument("clustering: fewer histograms (" + std::to_string(histograms.size()) +
                                ") than clusters (" + std::to_string(config.k) + ")");
  }
  for (const auto& h : histograms) require_same_dimension(h.size(), histograms.front().size());
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  const auto i = static_cast<std::size_t>(unit_uniform(rng()) * static_cast<double>(n));
  return std::min(i, n - 1);
}

// Picks the position of a uniformly chosen element of `candidates`.
std::size_t uniform_choice(std::mt19937_64& rng, const std::vector<std::size_t>& candidates) {
  return candidates[uniform_index(rng, candidates.size())];
}

const SkewProfile* centroid_profile(const DivergenceKind& kind) {
  static const SkewProfile js = SkewProfile::jensen_shannon();
  if (std::holds_alternative<DivergenceKind::JS>(kind.kind())) return &js;
  if (const auto* v = std::get_if<DivergenceKind::VectorSkewJS>(&kind.kind())) return &v->profile;
  return nullptr;
}

struct Assignment {
  std::vector<std::size_t> label;
  std::vector<double> cost;
  double total = 0.0;
};

Assignment assign(std::span<const DiscreteDensity> points, const std::vector<DiscreteDensity>& centroids,
                  const DivergenceKind& divergence) {
  Assignment out;
  out.label.assign(points.size(), 0);
  out.cost.assign(points.size(), 0.0);
  parallel_for(points.size(), [&](std::size_t i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_c = 0;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double d = divergence(points[i], centroids[c]);
      if (c == 0 || d < best) {
        best = d;
        best_c = c;
      }
    }
    out.label[i] = best_c;
    out.cost[i] = best;
  });
  out.total = compensated_sum(out.cost);
  return out;
}

}  // namespace

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

std::vector<std::size_t> kmeanspp_seed(std::span<const DiscreteDensity> histograms,
                                       const ClusteringConfig& config) {
  validate(histograms, config);
  const std::size_t n = histograms.size();
  std::mt19937_64 rng(config.seed);

  std::vector<std::size_t> seeds{uniform_index(rng, n)};
  std::vector<char> chosen(n, 0);
  chosen[seeds[0]] = 1;
  std::vector<double> weight(n);
  auto refresh = [&](std::size_t seed) {
    parallel_for(n, [&](std::size_t i) {
      const double d = chosen[i] ? 0.0 : config.divergence(histograms[i], histograms[seed]);
      weight[i] = seeds.size() == 1 ? d : std::min(weight[i], d);
    });
  };
  refresh(seeds[0]);

  while (seeds.size() < config.k) {
    std::vector<std::size_t> infinite;
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < n; ++i) {
      if (chosen[i]) continue;
      open.push_back(i);
      if (std::isinf(weight[i])) infinite.push_back(i);
    }
    std::size_t next;
    const double total = compensated_sum(weight);
    if (!infinite.empty()) {
      next = uniform_choice(rng, infinite);
    } else if (!(total > 0.0)) {
      next = uniform_choice(rng, open);
    } else {
      const double target = unit_uniform(rng()) * total;
      CompensatedSum running;
      next = open.back();
      for (std::size_t i : open) {
        if (!(weight[i] > 0.0)) continue;
        running += weight[i];
        next = i;
        if (running.value() > target) break;
      }
    }
    seeds.push_back(next);
    chosen[next] = 1;
    weight[next] = 0.0;
    refresh(next);
  }
  return seeds;
}

ClusteringResult lloyd_cluster(std::span<const DiscreteDensity> histograms, const ClusteringConfig& config) {
  validate(histograms, config);
  const SkewProfile* profile = centroid_profile(config.divergence);
  if (config.use_centroid_updates && profile == nullptr) {
    throw std::invalid_argument("clustering: centroid updates need a js or vskew divergence, got " +
                                config.divergence.name());
  }
  if (config.max_rounds < 0) throw std::invalid_argument("clustering: max_rounds must be >= 0");

  std::vector<DiscreteDensity> points;
  points.reserve(histograms.size());
  if (config.use_centroid_updates) {
    if (histograms.front().size() < 2) throw std::invalid_argument("clustering: histograms need at least 2 bins");
    for (const auto& h : histograms) points.push_back(to_density(to_natural(h)));
  } else {
    points.assign(histograms.begin(), histograms.end());
  }

  ClusteringResult result;
  result.seeds = kmeanspp_seed(points, config);
  for (std::size_t s : result.seeds) result.centroids.push_back(points[s]);

  Assignment current = assign(points, result.centroids, config.divergence);
  result.objective_trace.push_back(current.total);

  if (config.use_centroid_updates) {
    for (int round = 1; round <= config.max_rounds; ++round) {
      std::vector<std::vector<DiscreteDensity>> members(config.k);
      for (std::size_t i = 0; i < points.size(); ++i) members[current.label[i]].push_back(points[i]);

      for (std::size_t c = 0; c < config.k; ++c) {
        if (members[c].empty()) continue;
        auto problem = CentroidProblem::from_densities(members[c], {}, *profile, config.solver);
        problem.set_initial_point(to_natural(result.centroids[c]));
        result.centroids[c] = vector_skew_centroid(problem).density;
      }

      Assignment next = assign(points, result.centroids, config.divergence);
      for (std::size_t c = 0; c < config.k; ++c) {
        if (std::find(next.label.begin(), next.label.end(), c) != next.label.end()) continue;
        // Hand the empty cluster the histogram with the largest cost whose
        // own cluster keeps at least one other member.
        std::vector<std::size_t> sizes(config.k, 0);
        for (std::size_t l : next.label) ++sizes[l];
        std::size_t far = points.size();
        for (std::size_t i = 0; i < points.size(); ++i) {
          if (sizes[next.label[i]] < 2) continue;
          if (far == points.size() || next.cost[i] > next.cost[far]) far = i;
        }
        if (far == points.size()) continue;
        result.centroids[c] = points[far];
        next.label[far] = c;
        next.cost[far] = 0.0;
        ++result.reseeded;
      }
      next.total = compensated_sum(next.cost);

      const bool unchanged = next.label == current.label;
      current = std::move(next);
      result.objective_trace.push_back(current.total);
      result.rounds = round;
      if (unchanged) {
        result.converged = true;
        break;
      }
    }
  } else {
    result.converged = true;
  }
  result.assignment = std::move(current.label);
  return result;
}

}  // namespace skewjs
