#pragma once

#include <vector>

#include "gearmap/ode.hpp"

namespace gearmap {

/// Integral of (z^4 - 2 cos(2t) z^2 + 1)^{-1/2} from 0 to z, z in the closed unit disk.
cplx elliptic_E(double t, cplx z);

/// Same integrand along the segment a -> b inside the disk.
cplx elliptic_E_segment(double t, cplx a, cplx b);

/// Side ratio Im E(i) / E(1) of the image rectangle.
double module_M(double t);

/// Lattice 2 omega1 Z + 2 omega2 Z with real omega1 and imaginary omega2, scaled so e1 - e2 = 4.
struct PeriodLattice {
  double omega1 = 0.0;
  cplx omega2;
  cplx omega3;
  cplx tau;
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;
  /// Laurent coefficients: wp(z) = 1/z^2 + sum_k laurent[k] z^{2k-2}, k >= 2 (laurent[0..1] unused).
  std::vector<double> laurent;
  /// 8 n q^{2n} / (1 - q^{2n}), n >= 1, q = exp(i pi tau).
  std::vector<double> fourier;
};

PeriodLattice lattice_from_tau(cplx tau);

/// Weierstrass wp on the lattice.
cplx wp(cplx z, const PeriodLattice& lat);

/// Same function, for a lattice with half periods (omega1, omega2) of any real scale.
PeriodLattice scaled_lattice(const PeriodLattice& lat, double factor);

}  // namespace gearmap
