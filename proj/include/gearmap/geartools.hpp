#pragma once

#include <span>
#include <string>
#include <vector>

#include "gearmap/ode.hpp"
#include "gearmap/schwarzian.hpp"

namespace gearmap {

struct GearParams {
  double beta = 0.0;
  double gamma = 0.0;
};

/// Map of the unit disk given by its Schwarzian and its 2-jet at 0. Prevertices sit at
/// e^{+-i t1} (outer vertices) and e^{+-i t2} (inner vertices), 0 < t1 < t2 < pi.
class DiskMap {
 public:
  DiskMap(Schwarzian s, Jet2 jet0, double t1, double t2, OdeOptions opts = {});

  cplx value(cplx z) const { return jet(z).value; }
  Jet2 jet(cplx z) const;
  /// Jets along the segment 0 -> z at the given ascending fractions.
  std::vector<Jet2> jets_along(cplx z, std::span<const double> fractions) const;
  /// x in (-1, 1) with value(x) = w, for real w between value(-1) and value(1).
  double real_inverse(double w) const;

  const Schwarzian& schwarzian() const { return s_; }
  const Jet2& jet0() const { return jet0_; }
  const OdeOptions& options() const { return opts_; }
  double t1() const { return t1_; }
  double t2() const { return t2_; }

 private:
  Schwarzian s_;
  Jet2 jet0_;
  OdeBasis basis0_;
  double t1_;
  double t2_;
  OdeOptions opts_;
};

/// Map with symmetric Schwarzian R_{t,lambda} and J(0) = (0, 1, 0).
DiskMap symmetric_disk_map(const MapParams& p, OdeOptions opts = {});

/// Jets at -1, 1 and at the midpoint of the upper tooth-edge arc (i for symmetric maps).
struct EndpointJets {
  Jet2 at_minus1;
  Jet2 at_1;
  Jet2 at_tooth;
  cplx tooth_point{0.0, 1.0};
};

EndpointJets endpoint_jets(const DiskMap& f);

struct BoundaryEdge {
  std::string label;
  std::vector<cplx> points;
};

/// Image of the unit circle, one polyline per edge, in counter-clockwise order:
/// "outer-arc", "tooth-upper", "inner-arc", "tooth-lower".
struct BoundaryTrace {
  std::vector<BoundaryEdge> edges;
  EndpointJets jets;

  const BoundaryEdge& edge(const std::string& label) const;
};

BoundaryTrace trace_boundary(const DiskMap& f, int samples_per_edge = 64);

/// Signed curvature of the image of the unit circle at z0, positive when the domain lies
/// inside the osculating circle.
double curvature_at(const Jet2& jet, cplx z0);

/// Center of the osculating circle of the boundary image at z0 (infinite if straight).
cplx curvature_center(const Jet2& jet, cplx z0);

struct PregearGeometry {
  double p_minus1 = 0.0;
  double p_1 = 0.0;
  /// Signed curvature of the tooth edge at p.
  double kappa = 0.0;
  double rho = 0.0;
  cplx p;
  cplx v;
  cplx c;
  double d = 0.0;
  double b_minus = 0.0;
  double b_plus = 0.0;
  /// Tooth edges already straight: no tooth circle, b_minus = b_plus = tooth line on the axis.
  bool straight = false;
  /// Unit tangent of the upper tooth edge at p.
  cplx tangent;
};

PregearGeometry analyze_pregear(const EndpointJets& jets);
PregearGeometry analyze_pregear(const BoundaryTrace& trace);

struct GearNormalization {
  MobiusMap T = MobiusMap::identity();
  GearParams params;
  /// The point of (p_minus1, p_1) sent to the gear center 0.
  double b_interior = 0.0;
};

GearNormalization gear_normalize(const PregearGeometry& geo);

/// Distance between the curvature centers of the inner and outer arcs at -1 and 1.
double arc_centers_gap(const EndpointJets& jets);

struct Repositioned {
  double t1 = 0.0;
  double t2 = 0.0;
  /// F = f o T_{-p}, T_{-p}(z) = (z + p)/(1 + p z).
  double p = 0.0;
  DiskMap map;
};

/// Precompose f with a disk automorphism so that F(0) = w0 (w0 real, inside f((-1, 1))).
Repositioned reposition_center(const DiskMap& f, double w0);

struct GearMap {
  /// Gear map h with h(0) = 0 at the gear center and h'(0) > 0.
  DiskMap h;
  GearParams params;
  PregearGeometry geometry;
  MobiusMap T = MobiusMap::identity();
  double q = 0.0;
};

GearMap renormalized_gear_map(const MapParams& p, OdeOptions opts = {});

/// z -> z exp(log(h(z^n)/z^n)/n) with the logarithm continued along rays from 0.
class MultiToothMap {
 public:
  MultiToothMap(DiskMap h, int n);

  cplx value(cplx z) const;
  int teeth() const { return n_; }
  /// Boundary polylines of the n-tooth image, labelled "<edge>-<k>".
  std::vector<BoundaryEdge> boundary(int samples_per_edge = 64) const;

 private:
  cplx log_ratio(cplx w) const;

  DiskMap h_;
  int n_;
};

MultiToothMap multitooth(const DiskMap& centered, int n, double center_tol = 1e-10);

}  // namespace gearmap
