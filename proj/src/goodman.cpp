#include "gearmap/goodman.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "gearmap/error.hpp"
#include "gearmap/quadrature.hpp"
#include "gearmap/schwarzian.hpp"
#include "gearmap/solver.hpp"

namespace gearmap {

namespace {

constexpr double kPi = std::numbers::pi;

void check_angles(double t1, double t2) {
  if (!(t1 >= 0.0 && t1 < t2 && t2 < kPi)) throw Error(ErrorCode::InvalidArgument, "need 0 <= t1 < t2 < pi");
}

// 1 - P with P = sqrt(1 - c2 x) / (sqrt(1 - c1 x) sqrt(1 - x^2)), given log(1 - x^2).
double one_minus_ratio(double c1, double c2, double x, double log_1mx2) {
  const double l = 0.5 * (std::log1p(-c2 * x) - std::log1p(-c1 * x) - log_1mx2);
  return -std::expm1(l);
}

}  // namespace

double goodman_integral(double t1, double t2, double abs_tol) {
  check_angles(t1, t2);
  if (t1 == 0.0) return -std::numeric_limits<double>::infinity();
  const double c1 = std::cos(t1);
  const double c2 = std::cos(t2);
  QuadratureOptions q;
  q.abs_tol = abs_tol;
  q.rel_tol = 0.0;
  // [0, 1/2]: the 1/x terms cancel inside expm1.
  const double head = integrate_gk_real(
      [&](double x) {
        if (x == 0.0) return 0.5 * (c2 - c1);
        return one_minus_ratio(c1, c2, x, std::log1p(-x * x)) / x;
      },
      0.0, 0.5, q);
  // [1/2, 1] with x = 1 - s^2.
  const double tail = integrate_gk_real(
      [&](double s) {
        const double x = 1.0 - s * s;
        if (s == 0.0) return -2.0 * std::sqrt((1.0 - c2) / (2.0 * (1.0 - c1)));
        const double l = 0.5 * (std::log1p(-c2 * x) - std::log1p(-c1 * x) - std::log(2.0 - s * s));
        // 2 s (1 - P) / x with P = e^l / s.
        return (2.0 * s - 2.0 * std::exp(l)) / x;
      },
      0.0, std::sqrt(0.5), q);
  return head + tail;
}

double goodman_ratio_integral(double t1, double t2, double abs_tol) {
  return 2.0 * std::exp(goodman_integral(t1, t2, abs_tol));
}

GoodmanJet goodman_ratio_jet(double t1, double t2, OdeOptions opts, double tol) {
  check_angles(t1, t2);
  GoodmanJet out;
  if (t1 == 0.0) return out;
  using Vec = std::array<double, 2>;
  constexpr double kGuard = 1e-4;
  constexpr double kStep = 1e-6;
  const auto prevertices = [&](const Vec& x) {
    const GearMap g = renormalized_gear_map({x[0], x[1]}, opts);
    return Vec{g.h.t1() - t1, g.h.t2() - t2};
  };
  const auto inside = [&](const Vec& x) {
    if (!(x[0] > kGuard && x[0] < 0.5 * kPi - kGuard)) return false;
    const auto [lo, hi] = lambda_bounds(x[0]);
    return x[1] > lo + kGuard && x[1] < hi - kGuard;
  };
  // Symmetric start: with the center at f(0) the prevertices are t and pi - t.
  Vec x{std::clamp(0.5 * (t1 + kPi - t2), 0.05, 0.5 * kPi - 0.05), 0.0};
  const auto [lo, hi] = lambda_bounds(x[0]);
  x[1] = 0.5 * (lo + hi);
  Vec r = prevertices(x);
  double res = std::hypot(r[0], r[1]);
  int it = 0;
  for (; res > tol; ++it) {
    if (it == 100) throw Error(ErrorCode::MaxIterations, "prevertex Newton iteration did not converge");
    const Vec rt = prevertices({x[0] + kStep, x[1]});
    const Vec rl = prevertices({x[0], x[1] + kStep});
    const double j00 = (rt[0] - r[0]) / kStep, j10 = (rt[1] - r[1]) / kStep;
    const double j01 = (rl[0] - r[0]) / kStep, j11 = (rl[1] - r[1]) / kStep;
    const double det = j00 * j11 - j01 * j10;
    if (det == 0.0) throw Error(ErrorCode::InversionFailed, "singular prevertex Jacobian");
    const Vec dx{-(j11 * r[0] - j01 * r[1]) / det, -(-j10 * r[0] + j00 * r[1]) / det};
    bool moved = false;
    for (double s = 1.0; s > 1e-9; s *= 0.5) {
      const Vec y{x[0] + s * dx[0], x[1] + s * dx[1]};
      if (!inside(y)) continue;
      try {
        const Vec ry = prevertices(y);
        const double ny = std::hypot(ry[0], ry[1]);
        if (ny < res) {
          x = y;
          r = ry;
          res = ny;
          moved = true;
          break;
        }
      } catch (const Error&) {
      }
    }
    if (!moved) throw Error(ErrorCode::InversionFailed, "line search failed on the prevertex residual");
  }
  const GearMap g = renormalized_gear_map({x[0], x[1]}, opts);
  out.ratio = (g.h.jet0().d1 / g.h.value(1.0)).real();
  out.params = {x[0], x[1]};
  out.gear = g.params;
  out.iterations = it;
  return out;
}

cplx goodman_map(cplx z) {
  const cplx q = 1.0 - z + z * z;
  return 4.0 / 27.0 * (2.0 * q * std::sqrt(q) - 2.0 + 3.0 * z + 3.0 * z * z - 2.0 * z * z * z) / (z * (1.0 - z));
}

cplx goodman_map_printed(cplx z) {
  const cplx q = 1.0 - z + z * z;
  return 4.0 / 27.0 * (2.0 * q - 2.0 + 3.0 * z + 3.0 * z * z - 2.0 * z * z * z) / (z * (1.0 - z));
}

cplx schwarzian_fd(const std::function<cplx(cplx)>& f, cplx z, double radius, int points) {
  // Taylor coefficients a_k = f^(k)(z) / k! by the trapezoidal rule on the circle.
  std::array<cplx, 4> a{};
  for (int j = 0; j < points; ++j) {
    const cplx e = std::polar(1.0, 2.0 * kPi * j / points);
    const cplx v = f(z + radius * e);
    cplx p = 1.0;
    for (int k = 0; k < 4; ++k) {
      a[k] += v * std::conj(p);
      p *= e;
    }
  }
  double rk = 1.0;
  for (int k = 0; k < 4; ++k) {
    a[k] /= static_cast<double>(points) * rk;
    rk *= radius;
  }
  const cplx f1 = a[1], f2 = 2.0 * a[2], f3 = 6.0 * a[3];
  const cplx u = f2 / f1;
  return f3 / f1 - 1.5 * u * u;
}

double fit_degenerate_lambda(const std::function<cplx(cplx)>& f, double t2, const std::vector<cplx>& samples) {
  double num = 0.0;
  double den = 0.0;
  for (const cplx& z : samples) {
    const cplx a = eval_R_degenerate(t2, 0.0, z);
    const cplx b = eval_R_degenerate(t2, 1.0, z) - a;
    num += (std::conj(b) * (schwarzian_fd(f, z) - a)).real();
    den += std::norm(b);
  }
  if (den == 0.0) throw Error(ErrorCode::InvalidArgument, "no samples");
  return num / den;
}

}  // namespace gearmap
