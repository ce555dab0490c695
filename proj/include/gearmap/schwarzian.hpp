#pragma once

#include <functional>

#include "gearmap/ode.hpp"

namespace gearmap {

/// Symmetric disk configuration: prevertices +-e^{+-it}, accessory parameter lambda.
struct MapParams {
  double t = 0.0;
  double lambda = 0.0;
};

/// Prevertex angles e^{it1}, e^{it2} (and conjugates) with an accessory parameter.
struct AsymPrevertices {
  double t1 = 0.0;
  double t2 = 0.0;
  double lambda = 0.0;
};

using Schwarzian = std::function<cplx(cplx)>;

cplx psi0(double t, cplx z);
cplx psi1(double t, cplx z);

/// R = 2 (psi0 - lambda psi1).
cplx eval_R(const MapParams& p, cplx z);

Schwarzian disk_schwarzian(const MapParams& p);

/// z -> S(T(z)) T'(z)^2.
Schwarzian pullback(Schwarzian s, const MobiusMap& t);

/// Limit t1 -> 0 of the asymmetric Schwarzian: poles at 1 and e^{+-it2}.
cplx eval_R_degenerate(double t2, double lambda, cplx z);

/// Schwarzian of the map onto the circular triangle with angles pi/2, pi/2 at e^{+-it2}
/// and 2 gamma at z = 1.
cplx circular_triangle_schwarzian(double t2, double gamma, cplx z);

}  // namespace gearmap
