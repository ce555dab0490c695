#include "gearmap/schwarzian.hpp"

#include <cmath>
#include <numbers>

#include "gearmap/error.hpp"

namespace gearmap {

namespace {

// z^4 - 2 cos(2t) z^2 + 1 as a product over the prevertices, accurate near each of them.
cplx prevertex_quartic(double t, cplx z) {
  const cplx e = std::polar(1.0, t);
  const cplx den = (z - e) * (z - std::conj(e)) * (z + e) * (z + std::conj(e));
  if (std::abs(den) < 1e-12 * (1.0 + std::norm(z) * std::norm(z))) {
    throw Error(ErrorCode::PrevertexSingularity, "evaluation at a prevertex");
  }
  return den;
}

cplx degenerate_quadratic(double t2, cplx z) {
  const cplx e = std::polar(1.0, t2);
  const cplx q = (z - e) * (z - std::conj(e));
  if (std::abs(q) < 1e-12 * (1.0 + std::norm(z)) || std::abs(z - 1.0) < 1e-12) {
    throw Error(ErrorCode::PrevertexSingularity, "evaluation at a prevertex");
  }
  return q;
}

}  // namespace

cplx psi0(double t, cplx z) {
  const cplx den = prevertex_quartic(t, z);
  const double s = std::sin(t);
  const double c = std::cos(t);
  const cplx z2 = z * z;
  const cplx num = z2 * z2 - 16.0 * c * z2 * z + (4.0 + 2.0 * std::cos(2.0 * t)) * z2 - 16.0 * c * z + 1.0;
  return s * s * num / (2.0 * den * den);
}

cplx psi1(double t, cplx z) { return -8.0 * std::cos(t) / prevertex_quartic(t, z); }

cplx eval_R(const MapParams& p, cplx z) { return 2.0 * (psi0(p.t, z) - p.lambda * psi1(p.t, z)); }

Schwarzian disk_schwarzian(const MapParams& p) {
  return [p](cplx z) { return eval_R(p, z); };
}

Schwarzian pullback(Schwarzian s, const MobiusMap& t) {
  return [s = std::move(s), t](cplx z) {
    const cplx d = t.derivative(z);
    return s(t(z)) * d * d;
  };
}

cplx eval_R_degenerate(double t2, double lambda, cplx z) {
  const cplx q = degenerate_quadratic(t2, z);
  const double s = std::sin(t2);
  return 8.0 * lambda * (1.0 - std::cos(t2)) / ((z - 1.0) * (z - 1.0) * q) +
         5.0 * s * s / (2.0 * q * q);
}

cplx circular_triangle_schwarzian(double t2, double gamma, cplx z) {
  const cplx q = degenerate_quadratic(t2, z);
  const double a = 2.0 * gamma / std::numbers::pi;
  const double s = std::sin(t2);
  return (1.0 - a * a) * (1.0 - std::cos(t2)) / ((z - 1.0) * (z - 1.0) * q) +
         5.0 * s * s / (2.0 * q * q);
}

}  // namespace gearmap
