#pragma once

#include <complex>
#include <functional>

namespace gearmap {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_depth = 50;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature of a complex integrand on [a, b].
/// Throws QuadratureFailure when the error estimate cannot be brought under tolerance.
std::complex<double> integrate_gk(const std::function<std::complex<double>(double)>& f, double a,
                                  double b, const QuadratureOptions& opts = {});

double integrate_gk_real(const std::function<double(double)>& f, double a, double b,
                         const QuadratureOptions& opts = {});

}  // namespace gearmap
