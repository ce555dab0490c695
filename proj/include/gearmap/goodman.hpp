#pragma once

#include <functional>

#include "gearmap/geartools.hpp"
#include "gearmap/ode.hpp"

namespace gearmap {

/// Integral of 1/x - sqrt(1 - cos(t2) x) / (x sqrt(1 - cos(t1) x) sqrt(1 - x^2)) over [0, 1].
/// Returns -infinity for t1 = 0.
double goodman_integral(double t1, double t2, double abs_tol = 1e-10);

/// h'(0) / h(1) for the gear map h with h(0) = 0 at the gear center and prevertices
/// e^{+-i t1}, e^{+-i t2}, from the quadrature: 2 exp(goodman_integral).
double goodman_ratio_integral(double t1, double t2, double abs_tol = 1e-10);

struct GoodmanJet {
  double ratio = 0.0;
  MapParams params;
  GearParams gear;
  int iterations = 0;
};

/// Same ratio from the gear map itself: Newton on (t, lambda) until the centered map has the
/// requested prevertices, then h'(0) / h(1). t1 = 0 gives ratio 0.
GoodmanJet goodman_ratio_jet(double t1, double t2, OdeOptions opts = {}, double tol = 1e-12);

/// Closed-form map onto the degenerate gear with t1 = 0, t2 = pi/3, gamma = pi/2:
/// (4/27)(2 (1 - z + z^2)^{3/2} - 2 + 3z + 3z^2 - 2z^3) / (z (1 - z)).
cplx goodman_map(cplx z);
/// The same expression with (1 - z + z^2) in place of its 3/2 power.
cplx goodman_map_printed(cplx z);

/// Schwarzian derivative of an analytic f at z from `points` samples on the circle |w - z| = radius.
cplx schwarzian_fd(const std::function<cplx(cplx)>& f, cplx z, double radius = 1e-2, int points = 64);

/// Least-squares lambda with S_f(z) = eval_R_degenerate(t2, lambda, z) over the sample points.
double fit_degenerate_lambda(const std::function<cplx(cplx)>& f, double t2, const std::vector<cplx>& samples);

}  // namespace gearmap
