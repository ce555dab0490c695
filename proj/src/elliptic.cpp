#include "gearmap/elliptic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "gearmap/error.hpp"
#include "gearmap/quadrature.hpp"

namespace gearmap {

namespace {

constexpr double kPi = std::numbers::pi;

// Product of principal roots; holomorphic on the open disk since both factors have positive
// real part there.
cplx inv_sqrt_quartic(double t, cplx z) {
  const cplx w = z * z;
  const cplx rot = std::polar(1.0, 2.0 * t);
  return 1.0 / (std::sqrt(1.0 - w * rot) * std::sqrt(1.0 - w * std::conj(rot)));
}

void check_in_disk(cplx z) {
  if (std::abs(z) > 1.0 + 1e-12) {
    throw Error(ErrorCode::BranchAmbiguity, "path leaves the closed unit disk");
  }
}

}  // namespace

cplx elliptic_E_segment(double t, cplx a, cplx b) {
  check_in_disk(a);
  check_in_disk(b);
  const cplx d = b - a;
  if (std::abs(d) == 0.0) return 0.0;
  QuadratureOptions opts{1e-15, 1e-14, 60};
  const bool end_near_circle = std::abs(b) > 0.9;
  if (!end_near_circle) {
    return d * integrate_gk([&](double s) { return inv_sqrt_quartic(t, a + s * d); }, 0.0, 1.0, opts);
  }
  // s = 1 - u^2 absorbs an inverse square-root singularity at the far endpoint. Each factor
  // 1 - p^2 r is expanded about b so that it stays accurate as p -> b.
  const cplx rot = std::polar(1.0, 2.0 * t);
  const cplx base_p = 1.0 - b * b * rot;
  const cplx base_m = 1.0 - b * b * std::conj(rot);
  // An endpoint on a prevertex leaves only rounding noise in its factor; drop it so the u
  // cancels exactly.
  const bool snap_p = std::abs(base_p) < 1e-14;
  const bool snap_m = std::abs(base_m) < 1e-14;
  return d * integrate_gk(
                 [&](double u) {
                   const double u2 = u * u;
                   const cplx p = b - u2 * d;
                   const cplx w = d * (b + p);
                   cplx denom = 1.0;
                   bool snapped = false;
                   for (int k = 0; k < 2; ++k) {
                     const cplx r = k == 0 ? rot : std::conj(rot);
                     if (k == 0 ? snap_p : snap_m) {
                       denom *= std::sqrt(w * r);
                       snapped = true;
                     } else {
                       denom *= std::sqrt((k == 0 ? base_p : base_m) + u2 * w * r);
                     }
                   }
                   if (snapped) return 2.0 / denom;
                   return u == 0.0 ? cplx(0.0) : 2.0 * u / denom;
                 },
                 0.0, 1.0, opts);
}

cplx elliptic_E(double t, cplx z) {
  if (!(t > 0.0 && t < kPi / 2)) throw Error(ErrorCode::InvalidArgument, "t outside (0, pi/2)");
  return elliptic_E_segment(t, 0.0, z);
}

double module_M(double t) {
  return elliptic_E(t, cplx(0.0, 1.0)).imag() / elliptic_E(t, 1.0).real();
}

namespace {

void fill_laurent(PeriodLattice& lat) {
  const double q = std::exp(-kPi * lat.tau.imag());
  lat.fourier.clear();
  for (int n = 1; n < 100000; ++n) {
    const double q2n = std::pow(q, 2 * n);
    lat.fourier.push_back(8.0 * n * q2n / (1.0 - q2n));
    if (8.0 * n * std::pow(q, n) < 1e-18) break;
  }
  lat.laurent.assign(3, 0.0);
  lat.laurent[2] = lat.g2 / 20.0;
  lat.laurent.push_back(lat.g3 / 28.0);
  const double rho = 0.25 * std::min(lat.omega1, std::abs(lat.omega2));
  for (int k = 4; k < 200; ++k) {
    double s = 0.0;
    for (int m = 2; m <= k - 2; ++m) s += lat.laurent[m] * lat.laurent[k - m];
    const double ck = 3.0 / ((2.0 * k + 1.0) * (k - 3.0)) * s;
    lat.laurent.push_back(ck);
    // wp only sums the series for |z| <= rho.
    if (std::abs(ck) * std::pow(rho, 2 * k) < 1e-18) break;
  }
}

}  // namespace

PeriodLattice lattice_from_tau(cplx tau) {
  if (!(tau.imag() > 0.0) || std::abs(tau.real()) > 1e-14 * tau.imag()) {
    throw Error(ErrorCode::InvalidArgument, "tau must be purely imaginary with positive part");
  }
  const double q = std::exp(-kPi * tau.imag());
  // Eisenstein series on the lattice with omega1 = 1.
  double s3 = 0.0, s5 = 0.0;
  for (int n = 1; n < 10000; ++n) {
    const double q2n = std::pow(q, 2 * n);
    const double t3 = n * n * n * q2n / (1.0 - q2n);
    const double t5 = t3 * n * n;
    s3 += t3;
    s5 += t5;
    if (t5 < 1e-17 * (1.0 + s5) && t3 < 1e-17) break;
  }
  const double k2 = kPi * kPi / 4.0;
  double g2 = k2 * k2 * (4.0 / 3.0) * (1.0 + 240.0 * s3);
  double g3 = k2 * k2 * k2 * (8.0 / 27.0) * (1.0 - 504.0 * s5);

  // Roots of 4w^3 - g2 w - g3 by the trigonometric method, polished by Newton.
  const double p = -g2 / 4.0;
  const double qq = -g3 / 4.0;
  const double m = 2.0 * std::sqrt(-p / 3.0);
  const double arg = std::clamp(3.0 * qq / (p * m), -1.0, 1.0);
  const double theta = std::acos(arg) / 3.0;
  std::array<double, 3> roots{};
  for (int k = 0; k < 3; ++k) {
    double w = m * std::cos(theta - 2.0 * kPi * k / 3.0);
    for (int it = 0; it < 3; ++it) {
      const double f = 4.0 * w * w * w - g2 * w - g3;
      const double df = 12.0 * w * w - g2;
      if (df != 0.0) w -= f / df;
    }
    roots[k] = w;
  }
  std::sort(roots.begin(), roots.end());
  double e2 = roots[0], e3 = roots[1], e1 = roots[2];

  const double scale = std::sqrt((e1 - e2) / 4.0);
  PeriodLattice lat;
  lat.omega1 = scale;
  lat.omega2 = tau * scale;
  lat.omega3 = lat.omega1 + lat.omega2;
  lat.tau = tau;
  const double s2 = scale * scale;
  lat.e1 = e1 / s2;
  lat.e2 = e2 / s2;
  lat.e3 = e3 / s2;
  lat.g2 = g2 / (s2 * s2);
  lat.g3 = g3 / (s2 * s2 * s2);
  fill_laurent(lat);
  return lat;
}

PeriodLattice scaled_lattice(const PeriodLattice& lat, double factor) {
  PeriodLattice out = lat;
  const double f2 = factor * factor;
  out.omega1 *= factor;
  out.omega2 *= factor;
  out.omega3 *= factor;
  out.e1 /= f2;
  out.e2 /= f2;
  out.e3 /= f2;
  out.g2 /= f2 * f2;
  out.g3 /= f2 * f2 * f2;
  fill_laurent(out);
  return out;
}

cplx wp(cplx z, const PeriodLattice& lat) {
  const double w1 = lat.omega1;
  const double w2 = lat.omega2.imag();
  z -= 2.0 * w1 * std::round(z.real() / (2.0 * w1));
  z -= cplx(0.0, 2.0 * w2 * std::round(z.imag() / (2.0 * w2)));
  if (std::abs(z) < 1e-150 * std::min(w1, w2)) throw Error(ErrorCode::LatticePointPole, "wp at a lattice point");
  // q-series in v = pi z / (2 omega1).
  const double k = kPi / (2.0 * w1);
  const cplx v = k * z;
  const cplx sv = std::sin(v);
  const cplx w = std::exp(cplx(0.0, 2.0) * v);
  const cplx wi = 1.0 / w;
  cplx pw = 1.0, pwi = 1.0;
  cplx sum = 1.0 / (sv * sv) - 1.0 / 3.0;
  for (double a : lat.fourier) {
    pw *= w;
    pwi *= wi;
    sum += a * (1.0 - 0.5 * (pw + pwi));
  }
  return k * k * sum;
}

}  // namespace gearmap
