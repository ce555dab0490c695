#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gearmap/error.hpp"
#include "gearmap/solver.hpp"

using namespace gearmap;

namespace {

constexpr double kPi = std::numbers::pi;

// Interior (t, lambda) sample: t in [0.35, 1.15], lambda at a fixed fraction of the region height.
MapParams interior_point(int i, int k) {
  const double t = 0.35 + 0.2 * i;
  const auto [lo, hi] = lambda_bounds(t);
  return {t, lo + (hi - lo) * (0.2 + 0.15 * k)};
}

}  // namespace

TEST_CASE("region height and limits") {
  for (int i = 1; i <= 100; ++i) {
    const double t = 0.5 * kPi * i / 101.0;
    const auto [lo, hi] = lambda_bounds(t);
    CHECK(std::abs(hi - lo - 0.5) < 1e-15);
  }
  const auto [lo0, hi0] = lambda_bounds(1e-9);
  CHECK(std::abs(lo0 + 0.375) < 1e-12);
  CHECK(std::abs(hi0 - 0.125) < 1e-12);
  const auto [lo3, hi3] = lambda_bounds(kPi / 3.0);
  CHECK(lo3 == doctest::Approx(-0.40625).epsilon(1e-15));
  CHECK(hi3 == doctest::Approx(0.09375).epsilon(1e-15));
  CHECK_THROWS_AS(lambda_bounds(0.0), Error);
  CHECK(in_region({0.5, 0.0}));
  CHECK_FALSE(in_region({0.5, 0.2}));
  CHECK_FALSE(in_region({1.6, 0.0}));
}

TEST_CASE("limit lambda") {
  CHECK(limit_lambda(0.5 * kPi) == 0.0);
  CHECK(std::abs(limit_lambda(1e-12) - 0.125) < 1e-12);
  CHECK(std::abs(limit_lambda(kPi - 1e-12) + 0.375) < 1e-11);
  for (int k = 1; k <= 9; ++k) {
    const double g = 0.1 * k * kPi;
    CHECK(limit_lambda(g) == doctest::Approx((1.0 - 0.04 * k * k) / 8.0).epsilon(1e-15));
  }
}

TEST_CASE("forward values of the ten-tooth example") {
  const GearParams g = forward({0.6024, -0.0029});
  CHECK(std::abs(g.beta / std::pow(1.3, 10) - 1.0) < 1e-2);
  CHECK(std::abs(g.gamma - 0.5 * kPi) < 1e-3);
  CHECK_THROWS_AS(forward({0.6024, 0.2}), Error);
}

TEST_CASE("forward is continuous") {
  const GearParams a = forward({0.25 * kPi, 0.0});
  const GearParams b = forward({0.25 * kPi, 1e-6});
  CHECK(std::abs(a.beta - b.beta) < 1e-4 * a.beta);
  CHECK(std::abs(a.gamma - b.gamma) < 1e-4);
  CHECK(a.beta != b.beta);
}

TEST_CASE("upper and lower tooth edges give the same angle") {
  for (MapParams p : {MapParams{0.25 * kPi, 0.0}, MapParams{0.5, -0.1}, MapParams{1.1, -0.2}}) {
    const DiskMap f = symmetric_disk_map(p);
    const GearNormalization n = gear_normalize(analyze_pregear(endpoint_jets(f)));
    const double upper = std::arg(n.T(f.value(cplx(0.0, 1.0))));
    const double lower = std::arg(n.T(f.value(cplx(0.0, -1.0))));
    CHECK(std::abs(upper - n.params.gamma) < 1e-8);
    CHECK(std::abs(lower + n.params.gamma) < 1e-8);
  }
}

TEST_CASE("inverting the ten-tooth gear") {
  const InvertResult r = invert({std::pow(1.3, 10), 0.5 * kPi});
  CHECK(std::abs(r.params.t - 0.6024) < 1e-3);
  CHECK(std::abs(r.params.lambda + 0.0029) < 1e-3);
  CHECK(std::abs(r.achieved.beta / std::pow(1.3, 10) - 1.0) < 1e-9);
}

TEST_CASE("invert undoes forward on an interior grid") {
  int outside = 0;
  InvertOptions opts;
  opts.on_evaluate = [&](const MapParams& p) {
    if (!in_region(p)) ++outside;
  };
  for (int i = 0; i < 5; ++i) {
    for (int k = 0; k < 5; ++k) {
      const MapParams p = interior_point(i, k);
      const InvertResult r = invert(forward(p), std::nullopt, opts);
      CHECK(std::abs(r.params.t - p.t) < 1e-6);
      CHECK(std::abs(r.params.lambda - p.lambda) < 1e-6);
    }
  }
  CHECK(outside == 0);
}

TEST_CASE("guard keeps iterates inside from a boundary guess") {
  int outside = 0;
  int evaluations = 0;
  InvertOptions opts;
  opts.on_evaluate = [&](const MapParams& p) {
    ++evaluations;
    const auto [lo, hi] = lambda_bounds(p.t);
    if (!(p.lambda >= lo + opts.guard * 0.999 && p.lambda <= hi - opts.guard * 0.999)) ++outside;
  };
  const MapParams target_p = interior_point(3, 1);
  const InvertResult r = invert(forward(target_p), MapParams{0.1, 0.12}, opts);
  CHECK(std::abs(r.params.t - target_p.t) < 1e-6);
  CHECK(outside == 0);
  CHECK(evaluations == r.evaluations);
}

TEST_CASE("inversion failures are structured") {
  CHECK_THROWS_AS(invert({0.5, 1.0}), Error);
  InvertOptions opts;
  opts.max_iterations = 1;
  try {
    invert({std::pow(1.3, 10), 0.5 * kPi}, std::nullopt, opts);
    FAIL("expected MaxIterations");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MaxIterations);
  }
}

TEST_CASE("gamma level curves approach the limit formula") {
  const std::vector<double> ts{0.02, 0.04, 0.06, 0.08};
  const auto curves = level_curves(LevelKind::Gamma, {0.3 * kPi, 0.5 * kPi, 0.7 * kPi}, ts);
  REQUIRE(curves.size() == 3);
  for (const LevelCurve& c : curves) {
    REQUIRE(c.points.size() >= 2);
    CHECK(c.gaps.empty());
    const MapParams a = c.points[0];
    const MapParams b = c.points[1];
    const double intercept = a.lambda - a.t * (b.lambda - a.lambda) / (b.t - a.t);
    CHECK(std::abs(intercept - limit_lambda(c.value)) < 0.02);
    for (const MapParams& p : c.points) {
      CHECK(in_region(p));
      CHECK(std::abs(forward(p).gamma - c.value) < 1e-8);
    }
  }
}

TEST_CASE("beta level curves accumulate at the region corners") {
  const auto curves = level_curves(LevelKind::Beta, {1.0}, {0.01});
  REQUIRE(curves.size() == 1);
  REQUIRE_FALSE(curves[0].points.empty());
  for (const MapParams& p : curves[0].points) {
    CHECK(in_region(p));
    CHECK(std::min(std::abs(p.lambda + 0.375), std::abs(p.lambda - 0.125)) < 0.03);
    CHECK(std::abs(std::log(forward(p).beta) - 1.0) < 1e-8);
  }
}

TEST_CASE("beta grows as t decreases along a gamma level curve") {
  const std::vector<double> ts{0.2, 0.4, 0.6, 0.8, 1.0, 1.2};
  const auto curves = level_curves(LevelKind::Gamma, {0.5 * kPi}, ts);
  REQUIRE(curves[0].points.size() == ts.size());
  double prev = 0.0;
  for (auto it = curves[0].points.rbegin(); it != curves[0].points.rend(); ++it) {
    const double beta = forward(*it).beta;
    CHECK(beta > prev);
    prev = beta;
  }
}
