#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include <boost/math/distributions/chi_squared.hpp>

#include "skewjs/clustering.hpp"
#include "skewjs/divergences.hpp"
#include "support/random_densities.hpp"

using namespace skewjs;
using skewjs::testing::Gen;

namespace {

DiscreteDensity bernoulli(double t) { return DiscreteDensity({t, 1 - t}); }

}  // namespace

TEST_CASE("unit uniform uses the top 53 bits") {
  CHECK(unit_uniform(0) == 0.0);
  CHECK(unit_uniform(~std::uint64_t{0}) == 1.0 - 0x1.0p-53);
  CHECK(unit_uniform(std::uint64_t{1} << 63) == 0.5);
}

TEST_CASE("seeding picks every point when k = n") {
  Gen gen(41);
  std::vector<DiscreteDensity> hs;
  for (int i = 0; i < 6; ++i) hs.push_back(gen.density(5));
  ClusteringConfig config;
  config.k = 6;
  auto seeds = kmeanspp_seed(hs, config);
  std::sort(seeds.begin(), seeds.end());
  CHECK(seeds == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
  config.k = 7;
  CHECK_THROWS_AS((void)kmeanspp_seed(hs, config), std::invalid_argument);
  config.k = 0;
  CHECK_THROWS_AS((void)kmeanspp_seed(hs, config), std::invalid_argument);
}

TEST_CASE("seeding skips zero-divergence duplicates") {
  const auto p = bernoulli(0.3);
  const auto q = bernoulli(0.8);
  const std::vector<DiscreteDensity> hs{p, p, p, q};
  ClusteringConfig config;
  config.k = 2;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    config.seed = seed;
    const auto s = kmeanspp_seed(hs, config);
    if (s[0] != 3) {
      CHECK(s[1] == 3);
    } else {
      CHECK(s[1] != 3);
    }
  }
}

TEST_CASE("seeding follows divergence-proportional probabilities") {
  Gen gen(42);
  std::vector<DiscreteDensity> hs;
  for (int i = 0; i < 6; ++i) hs.push_back(gen.interior_density(4, 0.05));
  ClusteringConfig config;
  config.k = 2;

  // Expected counts for the second seed, conditioned on the observed first seed.
  std::vector<double> expected(hs.size(), 0.0);
  std::vector<double> observed(hs.size(), 0.0);
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    config.seed = static_cast<std::uint64_t>(t) * 7919 + 1;
    const auto s = kmeanspp_seed(hs, config);
    observed[s[1]] += 1;
    double total = 0;
    std::vector<double> d(hs.size());
    for (std::size_t i = 0; i < hs.size(); ++i) {
      d[i] = i == s[0] ? 0.0 : js(hs[i], hs[s[0]]);
      total += d[i];
    }
    for (std::size_t i = 0; i < hs.size(); ++i) expected[i] += d[i] / total;
  }
  double stat = 0;
  for (std::size_t i = 0; i < hs.size(); ++i) stat += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
  const boost::math::chi_squared dist(static_cast<double>(hs.size() - 1));
  const double p_value = boost::math::cdf(boost::math::complement(dist, stat));
  MESSAGE("chi-square " << stat << ", p = " << p_value);
  CHECK(p_value > 0.01);
}

TEST_CASE("seeding is reproducible") {
  Gen gen(43);
  std::vector<DiscreteDensity> hs;
  for (int i = 0; i < 30; ++i) hs.push_back(gen.density(8, 0.3));
  ClusteringConfig config;
  config.k = 5;
  config.seed = 1234;
  CHECK(kmeanspp_seed(hs, config) == kmeanspp_seed(hs, config));
  config.divergence = DivergenceKind::KL{};
  CHECK(kmeanspp_seed(hs, config) == kmeanspp_seed(hs, config));
}

TEST_CASE("infinite divergences are drawn first") {
  // Under KL every point is at +inf from the Dirac seeds except itself.
  const std::vector<DiscreteDensity> hs{DiscreteDensity::dirac(3, 0), DiscreteDensity::dirac(3, 1),
                                        DiscreteDensity::dirac(3, 2), DiscreteDensity::dirac(3, 2)};
  ClusteringConfig config;
  config.k = 3;
  config.divergence = DivergenceKind::KL{};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    config.seed = seed;
    auto s = kmeanspp_seed(hs, config);
    std::vector<std::size_t> bins;
    for (auto i : s) bins.push_back(i == 3 ? 2 : i);
    std::sort(bins.begin(), bins.end());
    CHECK(bins == std::vector<std::size_t>{0, 1, 2});
  }
}

TEST_CASE("k = 1 gives the centroid of everything") {
  Gen gen(44);
  std::vector<DiscreteDensity> hs;
  for (int i = 0; i < 5; ++i) hs.push_back(gen.interior_density(6));
  ClusteringConfig config;
  const auto r = lloyd_cluster(hs, config);
  CHECK(std::all_of(r.assignment.begin(), r.assignment.end(), [](std::size_t a) { return a == 0; }));
  const auto direct = js_centroid(CentroidProblem::from_densities(hs)).density;
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(r.centroids[0][i] - direct[i]) <= 1e-8);
}

TEST_CASE("separated Bernoulli groups are recovered") {
  const std::vector<double> ts{0.05, 0.9, 0.1, 0.95};
  std::vector<DiscreteDensity> hs;
  for (double t : ts) hs.push_back(bernoulli(t));

  // Oracle: best of all 2-partitions by total divergence to each part's centroid.
  double best = INFINITY;
  unsigned best_mask = 0;
  for (unsigned mask = 1; mask < 15; ++mask) {
    double total = 0;
    for (unsigned side = 0; side < 2; ++side) {
      std::vector<DiscreteDensity> part;
      for (unsigned i = 0; i < 4; ++i) {
        if (((mask >> i) & 1u) == side) part.push_back(hs[i]);
      }
      const auto c = js_centroid(CentroidProblem::from_densities(part)).density;
      for (const auto& p : part) total += js(p, c);
    }
    if (total < best) {
      best = total;
      best_mask = mask;
    }
  }
  CHECK((best_mask == 0b1010u || best_mask == 0b0101u));

  ClusteringConfig config;
  config.k = 2;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    config.seed = seed;
    const auto r = lloyd_cluster(hs, config);
    CHECK(r.assignment[0] == r.assignment[2]);
    CHECK(r.assignment[1] == r.assignment[3]);
    CHECK(r.assignment[0] != r.assignment[1]);
  }
}

TEST_CASE("Lloyd objective never increases") {
  Gen gen(45);
  for (int t = 0; t < 15; ++t) {
    std::vector<DiscreteDensity> hs;
    for (int i = 0; i < 25; ++i) hs.push_back(gen.density(6, 0.3));
    ClusteringConfig config;
    config.k = gen.range(2, 5);
    config.seed = static_cast<std::uint64_t>(t);
    if (t % 2 == 1) config.divergence = DivergenceKind::VectorSkewJS{SkewProfile({0.0, 1.0, 1.0 / 3.0}, {0.25, 0.25, 0.5})};
    const auto r = lloyd_cluster(hs, config);
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
      CHECK(r.objective_trace[i] <= r.objective_trace[i - 1] + 1e-10);
    }
    CHECK((r.converged || r.rounds == config.max_rounds));
    const auto again = lloyd_cluster(hs, config);
    CHECK(again.assignment == r.assignment);
    CHECK(again.objective_trace == r.objective_trace);
  }
}

TEST_CASE("seeding-only clustering and unsupported updates") {
  Gen gen(46);
  std::vector<DiscreteDensity> hs;
  for (int i = 0; i < 10; ++i) hs.push_back(gen.density(4));
  ClusteringConfig config;
  config.k = 3;
  config.divergence = DivergenceKind::Jeffreys{};
  CHECK_THROWS_AS((void)lloyd_cluster(hs, config), std::invalid_argument);
  config.use_centroid_updates = false;
  const auto r = lloyd_cluster(hs, config);
  CHECK(r.rounds == 0);
  for (std::size_t s = 0; s < r.seeds.size(); ++s) CHECK(r.assignment[r.seeds[s]] == s);
}
