#include <doctest.h>

#include <cmath>
#include <limits>

#include "skewjs/errors.hpp"
#include "skewjs/numeric.hpp"
#include "skewjs/simplex.hpp"
#include "support/random_densities.hpp"

using namespace skewjs;

TEST_CASE("discrete density validation") {
  CHECK_NOTHROW(DiscreteDensity({0.25, 0.75}));
  CHECK_NOTHROW(DiscreteDensity({1.0}));
  CHECK_THROWS_AS(DiscreteDensity({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDensity({-0.1, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDensity({std::numeric_limits<double>::quiet_NaN(), 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDensity(std::vector<double>{}), std::invalid_argument);

  // Within tolerance: accepted and rescaled.
  DiscreteDensity p({0.5 + 4e-10, 0.5});
  CHECK(std::abs(p[0] + p[1] - 1.0) <= 1e-15);
}

TEST_CASE("uniform and dirac") {
  const auto u = DiscreteDensity::uniform(4);
  for (double x : u.bins()) CHECK(x == 0.25);
  const auto d = DiscreteDensity::dirac(3, 1);
  CHECK(d[0] == 0.0);
  CHECK(d[1] == 1.0);
  CHECK(support(d) == std::vector<std::size_t>{1});
  CHECK_THROWS(DiscreteDensity::dirac(3, 3));
}

TEST_CASE("positive density") {
  PositiveDensity p({1.0, 2.0, 0.0});
  CHECK(p.mass() == 3.0);
  CHECK_THROWS_AS(PositiveDensity({0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(PositiveDensity({1.0, -1.0}), std::invalid_argument);
  const auto n = normalize(p);
  CHECK(n[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(n[2] == 0.0);
}

TEST_CASE("normalize survives extreme scales") {
  const auto tiny = normalize(PositiveDensity({1e-300, 3e-300}));
  CHECK(tiny[0] == doctest::Approx(0.25).epsilon(1e-14));
  const auto huge = normalize(PositiveDensity({1e300, 1e300}));
  CHECK(huge[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("skew profile") {
  const auto js = SkewProfile::jensen_shannon();
  CHECK(js.alpha_bar() == 0.5);
  CHECK(js.is_binary());
  SkewProfile p({0.0, 1.0, 1.0 / 3.0}, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  CHECK(p.alpha_bar() == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
  CHECK_FALSE(p.is_binary());
  CHECK_THROWS_AS(SkewProfile({0.2, 0.4}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(SkewProfile({1.2}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(SkewProfile({0.2, 0.4}, {0.6, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(SkewProfile({0.2, 0.4}, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(SkewProfile({}, {}), std::invalid_argument);
  SkewProfile boundary({1.0, 1.0}, {0.5, 0.5});
  CHECK_FALSE(boundary.has_interior_mean());
  CHECK_THROWS_AS(boundary.require_interior_mean(), std::invalid_argument);
}

TEST_CASE("mixtures stay on the simplex") {
  testing::Gen gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = gen.range(1, 40);
    const auto p = gen.density(d, 0.3);
    const auto q = gen.density(d, 0.3);
    const double a = gen.uniform();
    const auto m = mix(p, q, a);
    CHECK(std::abs(compensated_sum(m.bins()) - 1.0) <= 1e-14);
    for (double x : m.bins()) CHECK(x >= 0.0);
  }
  CHECK(mix(DiscreteDensity::dirac(2, 0), DiscreteDensity::dirac(2, 1), 0.0) == DiscreteDensity::dirac(2, 0));
  CHECK(mix(DiscreteDensity::dirac(2, 0), DiscreteDensity::dirac(2, 1), 1.0) == DiscreteDensity::dirac(2, 1));
  CHECK_THROWS_AS((void)mix(DiscreteDensity::uniform(2), DiscreteDensity::uniform(3), 0.5), DimensionMismatch);
  CHECK_THROWS_AS((void)mix(DiscreteDensity::uniform(2), DiscreteDensity::uniform(2), 1.5), std::invalid_argument);
}

TEST_CASE("compensated summation") {
  std::vector<double> v{1.0, 1e-16, 1e-16, 1e-16, 1e-16, -1.0};
  CHECK(compensated_sum(v) == doctest::Approx(4e-16).epsilon(1e-12));
  CHECK(xlogx(0.0) == 0.0);
  CHECK(xlogx(1.0) == 0.0);
}
