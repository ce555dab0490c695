#pragma once

#include <vector>

#include "gearmap/elliptic.hpp"
#include "gearmap/geartools.hpp"
#include "gearmap/ode.hpp"

namespace gearmap {

/// Rectangle-side accessory data: tau = omega2 / omega1 (purely imaginary) and real mu.
struct RectParams {
  cplx tau{0.0, 1.0};
  double mu = 0.0;
};

double mu_from_lambda(double t, double lambda);

/// -4 (wp(zeta + omega3/2) + wp(zeta + (omega1 - omega2)/2)) + 4 mu.
cplx phi(const RectParams& params, const PeriodLattice& lat, cplx zeta);

/// Solutions of 2y'' + phi y = 0 with y1 = (1, 0), y2 = (0, 1) at 0, assembled at omega3/2 from
/// one real integration along [0, omega1/2] and one up the right edge.
struct CornerJets {
  double b1 = 0.0, b1p = 0.0, b2 = 0.0, b2p = 0.0;
  double c1 = 0.0, c1p = 0.0, c2 = 0.0, c2p = 0.0;
  Jet1 y1;
  Jet1 y2;
  /// Largest imaginary part discarded from the eight scalars.
  double max_imag = 0.0;
};

/// Real roots of Im(z2 conj w2) a^2 + Im(z1 conj w2 + z2 conj w1) a + Im(z1 conj w1) = 0, the
/// values a for which w1 + a w2 is a real multiple of z1 + a z2. Throws NoRealRoots.
std::vector<double> collinearity_roots(cplx z1, cplx z2, cplx w1, cplx w2);

struct AlphaRoot {
  double alpha = 0.0;
  bool bounded = false;
};

struct AlphaRoots {
  std::vector<AlphaRoot> roots;
  /// Double root of the quadratic: the same alpha is listed twice.
  bool degenerate = false;
};

/// Gear data of g = y2 / (y1 + alpha y2) measured on the rectangle.
struct RectGear {
  GearParams params;
  /// Gear center on the real axis.
  double w0 = 0.0;
  double g_left = 0.0;
  double g_right = 0.0;
  cplx g_corner;
};

class RectMap {
 public:
  RectMap(const RectParams& params, OdeOptions opts = {});

  const RectParams& params() const { return params_; }
  const PeriodLattice& lattice() const { return lat_; }
  const CornerJets& corner() const { return corner_; }
  const OdeOptions& options() const { return opts_; }
  /// Half sides of R0: |Re zeta| < half_width, |Im zeta| < half_height.
  double half_width() const { return 0.5 * lat_.omega1; }
  double half_height() const { return 0.5 * lat_.omega2.imag(); }

  cplx coefficient(cplx zeta) const;
  /// Basis at zeta, integrated along 0 -> Re zeta -> zeta.
  OdeBasis basis(cplx zeta) const;
  cplx value(double alpha, cplx zeta) const;

  AlphaRoots alpha_roots() const;
  RectGear measure(double alpha) const;

 private:
  RectParams params_;
  PeriodLattice lat_;
  OdeOptions opts_;
  CornerJets corner_;
};

CornerJets corner_jets(const RectParams& params, const PeriodLattice& lat, const OdeOptions& opts = {});

struct MeshSpec {
  int vertical = 17;
  int horizontal = 9;
  /// Samples per mesh cell along each line.
  int refine = 8;
  /// Distance kept from the left vertices, relative to the half height.
  double vertex_gap = 1.5e-2;
};

/// Image polylines of the mesh lines of R0, labelled "vertical-<k>" and "horizontal-<k>".
std::vector<BoundaryEdge> map_rectangle(const RectMap& map, double alpha, const MeshSpec& mesh = {});

/// Image of the upper left vertex of R0, extrapolated from the left edge at 1, 2, 3 vertex gaps.
cplx left_vertex_image(const RectMap& map, double alpha, double vertex_gap = 1.5e-2);

/// Image of the boundary of R0: "right" (outer arc), "top" (upper tooth edge), "left" (inner
/// arc), "bottom", closed at the left vertex images. Uniform in the rectangle, or graded so the
/// cube of the distance to the left vertices is uniform.
std::vector<BoundaryEdge> rect_boundary(const RectMap& map, double alpha, int samples = 512,
                                        double vertex_gap = 1.5e-2, bool graded = false);

struct ExteriorModulus {
  double modulus = 0.0;
  double t = 0.0;
  double lambda = 0.0;
  /// Hausdorff distance between the reflected boundary image and the annular rectangle.
  double hausdorff = 0.0;
};

/// Conformal module of the complement of the annular rectangle with radii 1, beta^2 and
/// opening angle 2 (pi - gamma).
ExteriorModulus exterior_modulus_annular_rectangle(double beta, double gamma, int samples = 4096);

/// Hausdorff distance between sampled curves and the annular rectangle boundary.
double annular_rectangle_distance(const std::vector<std::vector<cplx>>& curves, double beta,
                                  double gamma, int reference_samples = 4096);

}  // namespace gearmap
