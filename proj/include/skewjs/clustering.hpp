#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "skewjs/centroid.hpp"
#include "skewjs/divergence_kind.hpp"
#include "skewjs/simplex.hpp"

namespace skewjs {

struct ClusteringConfig {
  std::size_t k = 1;
  /// Evaluated as D(histogram : seed/centroid).
  DivergenceKind divergence = DivergenceKind::JS{};
  /// Seeds the std::mt19937_64 used by k-means++.
  std::uint64_t seed = 0;
  int max_rounds = 100;
  /// false: assign every histogram to its nearest k-means++ seed and stop.
  bool use_centroid_updates = true;
  SolverSettings solver{};
};

/// Uniform double in [0,1) from the top 53 bits of one generator draw.
/// Used instead of std::uniform_real_distribution so results are identical
/// across standard libraries.
[[nodiscard]] double unit_uniform(std::uint64_t bits);

/// k-means++ with an arbitrary divergence: the first seed is uniform, each
/// further seed is drawn with probability proportional to its smallest
/// divergence to the seeds chosen so far. Candidates at +inf are drawn
/// uniformly among themselves; when every remaining weight is zero the draw
/// is uniform over the unchosen indices.
/// Throws std::invalid_argument unless 1 <= k <= n.
[[nodiscard]] std::vector<std::size_t> kmeanspp_seed(std::span<const DiscreteDensity> histograms,
                                                     const ClusteringConfig& config);

struct ClusteringResult {
  std::vector<std::size_t> assignment;
  std::vector<std::size_t> seeds;
  std::vector<DiscreteDensity> centroids;
  /// Sum over histograms of the divergence to the assigned centroid, after
  /// the initial assignment and after every round.
  std::vector<double> objective_trace;
  int rounds = 0;
  /// Empty clusters that were re-seeded from the farthest histogram.
  int reseeded = 0;
  /// The assignment reached a fixpoint before max_rounds.
  bool converged = false;
};

/// Lloyd iterations with CCCP centroid updates. Centroid updates need a JS
/// or vector-skew JS divergence; other kinds are accepted only with
/// use_centroid_updates = false.
///
/// All histograms are first moved into the interior of the simplex (bins
/// below kInteriorEpsilon are lifted), so the objective and the centroid
/// solver see the same data. Each centroid solve is warm-started at the
/// previous centroid, which keeps the objective non-increasing. An empty
/// cluster takes over the histogram farthest from its current centroid.
[[nodiscard]] ClusteringResult lloyd_cluster(std::span<const DiscreteDensity> histograms,
                                             const ClusteringConfig& config);

}  // namespace skewjs
