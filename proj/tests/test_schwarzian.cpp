#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gearmap/error.hpp"
#include "gearmap/schwarzian.hpp"

using namespace gearmap;

namespace {

constexpr double kPi = std::numbers::pi;

// Schwarzian derivative by central differences (7-point stencils).
cplx fd_schwarzian_once(const std::function<cplx(cplx)>& f, cplx z, double h) {
  cplx v[7];
  for (int k = -3; k <= 3; ++k) v[k + 3] = f(z + double(k) * h);
  const cplx d1 = (-v[0] + 9.0 * v[1] - 45.0 * v[2] + 45.0 * v[4] - 9.0 * v[5] + v[6]) / (60.0 * h);
  const cplx d2 = (2.0 * v[0] - 27.0 * v[1] + 270.0 * v[2] - 490.0 * v[3] + 270.0 * v[4] -
                   27.0 * v[5] + 2.0 * v[6]) /
                  (180.0 * h * h);
  const cplx d3 = (v[0] - 8.0 * v[1] + 13.0 * v[2] - 13.0 * v[4] + 8.0 * v[5] - v[6]) /
                  (8.0 * h * h * h);
  const cplx r = d2 / d1;
  return d3 / d1 - 1.5 * r * r;
}

// One Richardson step on the h^4 error of the third-derivative stencil.
cplx fd_schwarzian(const std::function<cplx(cplx)>& f, cplx z, double h) {
  return (16.0 * fd_schwarzian_once(f, z, h / 2) - fd_schwarzian_once(f, z, h)) / 15.0;
}

}  // namespace

TEST_CASE("psi values at the origin") {
  for (double t : {0.2, 0.7, 1.3}) {
    CHECK(std::abs(psi0(t, 0.0) - std::sin(t) * std::sin(t) / 2) < 1e-15);
    CHECK(std::abs(psi1(t, 0.0) + 8 * std::cos(t)) < 1e-15);
  }
  CHECK(std::abs(psi0(kPi / 3, 0.0) - 0.375) < 1e-15);
  CHECK(std::abs(psi1(kPi / 3, 0.0) + 4.0) < 1e-14);
}

TEST_CASE("prevertices are rejected") {
  const double t = 0.6;
  for (cplx z : {std::polar(1.0, t), std::polar(1.0, -t), -std::polar(1.0, t)}) {
    try {
      psi0(t, z * (1.0 + 1e-14));
      FAIL("expected PrevertexSingularity");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::PrevertexSingularity);
    }
    CHECK_THROWS_AS(psi1(t, z), Error);
  }
}

TEST_CASE("R at the origin and symmetries") {
  const MapParams p{0.7, 0.03};
  CHECK(std::abs(eval_R(p, 0.0) - (std::sin(0.7) * std::sin(0.7) + 16 * 0.03 * std::cos(0.7))) <
        1e-14);
  const cplx z(0.3, 0.4);
  CHECK(std::abs(eval_R(p, std::conj(z)) - std::conj(eval_R(p, z))) < 1e-14);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  int odd_differs = 0;
  for (int k = 0; k < 40; ++k) {
    const cplx w(u(rng), u(rng));
    if (std::abs(w) > 0.95 || std::abs(w) < 0.2) continue;
    const cplx r = eval_R(p, w);
    const cplx inv = eval_R(p, 1.0 / w) / (w * w * w * w);
    CHECK(std::abs(inv - r) <= 1e-10 * (1.0 + std::abs(r)));
    if (std::abs(eval_R(p, -w) - r) > 1e-6) ++odd_differs;
  }
  // The inner and outer vertices carry different angles, so R is not even.
  CHECK(odd_differs > 0);
}

TEST_CASE("R is real on the real axis") {
  const MapParams p{1.1, -0.2};
  for (double x = -3.0; x <= 3.0; x += 0.37) {
    const cplx r = eval_R(p, x);
    CHECK(std::abs(r.imag()) <= 1e-14 * (1.0 + std::abs(r)));
  }
}

TEST_CASE("double-pole coefficients match the vertex angles") {
  // Angle a*pi at a prevertex gives leading term (1 - a^2) / (2 (z - zk)^2).
  const MapParams p{0.5, 0.07};
  const double eps = 1e-6;
  auto lead = [&](cplx zk) {
    const cplx z = zk * (1.0 - eps);
    return (z - zk) * (z - zk) * eval_R(p, z);
  };
  CHECK(std::abs(lead(std::polar(1.0, p.t)) - 0.375) < 1e-4);
  CHECK(std::abs(lead(std::polar(1.0, -p.t)) - 0.375) < 1e-4);
  CHECK(std::abs(lead(-std::polar(1.0, p.t)) + 0.625) < 1e-4);
}

TEST_CASE("pullback") {
  const MapParams p{0.8, 0.01};
  const Schwarzian s = disk_schwarzian(p);
  const Schwarzian same = pullback(s, MobiusMap::identity());
  const cplx z(0.2, -0.3);
  CHECK(std::abs(same(z) - s(z)) < 1e-15);

  const MobiusMap t = MobiusMap::disk_automorphism(-0.35);
  const Schwarzian pb = pullback(s, t);
  // Poles of the pullback sit at T^{-1}(prevertices).
  const cplx pole = t.inverse()(std::polar(1.0, p.t));
  CHECK_THROWS_AS(pb(pole), Error);
  CHECK(std::abs(pb(pole * (1.0 - 1e-3))) > 1e4);

  // Independent check: S_{exp o T} = S_exp(T) T'^2 = -T'^2 / 2, by finite differences.
  const Schwarzian half = [](cplx) { return cplx(-0.5); };
  const Schwarzian pe = pullback(half, t);
  for (cplx w : {cplx(0.1, 0.2), cplx(-0.4, 0.1), cplx(0.5, -0.5)}) {
    const cplx fd = fd_schwarzian([&](cplx x) { return std::exp(t(x)); }, w, 1e-2);
    CHECK(std::abs(fd - pe(w)) < 1e-7);
  }
}

TEST_CASE("degenerate Schwarzian values") {
  // lambda = 0, t2 = pi/3, z = -1: Q(-1) = 3, value 5 (3/4) / (2 * 9).
  CHECK(std::abs(eval_R_degenerate(kPi / 3, 0.0, -1.0) - 5.0 / 24.0) < 1e-15);
  // Double pole at 1 with limit (z-1)^2 R -> 4 lambda.
  for (double lam : {0.0, 0.05, -0.2}) {
    const cplx z = 1.0 + cplx(1e-7, 1e-7);
    CHECK(std::abs((z - 1.0) * (z - 1.0) * eval_R_degenerate(0.9, lam, z) - 4 * lam) < 1e-6);
  }
  CHECK_THROWS_AS(eval_R_degenerate(0.9, 0.1, 1.0), Error);
  CHECK_THROWS_AS(eval_R_degenerate(0.9, 0.1, std::polar(1.0, 0.9)), Error);
}

TEST_CASE("circular triangle agrees with the degenerate Schwarzian at a right angle") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (int k = 0; k < 10; ++k) {
    const cplx z(u(rng), u(rng));
    const double t2 = kPi / 3;
    CHECK(std::abs(circular_triangle_schwarzian(t2, kPi / 2, z) - eval_R_degenerate(t2, 0.0, z)) <
          1e-12);
  }
}

TEST_CASE("the explicit degenerate map has the degenerate Schwarzian with lambda zero") {
  // f(z) = (4/27)(2(1 - z + z^2)^{3/2} - 2 + 3z + 3z^2 - 2z^3) / (z(1 - z)).
  auto f = [](cplx z) {
    const cplx q = 1.0 - z + z * z;
    return (4.0 / 27.0) * (2.0 * q * std::sqrt(q) - 2.0 + 3.0 * z + 3.0 * z * z - 2.0 * z * z * z) /
           (z * (1.0 - z));
  };
  for (cplx z : {cplx(-0.5, 0.2), cplx(0.3, 0.4), cplx(-0.2, -0.6)}) {
    const cplx fd = fd_schwarzian(f, z, 1e-2);
    CHECK(std::abs(fd - eval_R_degenerate(kPi / 3, 0.0, z)) < 1e-6);
  }
}
