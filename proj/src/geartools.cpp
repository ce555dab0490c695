#include "gearmap/geartools.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gearmap/error.hpp"

namespace gearmap {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

// Closest approach to a prevertex; nearer, rounding in y1, y2 exceeds the Wronskian budget.
constexpr double kPrevertexGap = 5e-4;

// Chebyshev points in [a + gap, b - gap], clustered towards both ends.
std::vector<double> clustered(double a, double b, int n) {
  const double gap = std::min(kPrevertexGap, 0.25 * (b - a));
  a += gap;
  b -= gap;
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) {
    out[k] = a + (b - a) * 0.5 * (1.0 - std::cos(kPi * k / (n - 1.0)));
  }
  return out;
}

struct EdgeSpec {
  const char* label;
  double from;
  double to;
};

std::vector<EdgeSpec> edge_specs(double t1, double t2) {
  return {{"outer-arc", -t1, t1},
          {"tooth-upper", t1, t2},
          {"inner-arc", t2, 2 * kPi - t2},
          {"tooth-lower", 2 * kPi - t2, 2 * kPi - t1}};
}

}  // namespace

DiskMap::DiskMap(Schwarzian s, Jet2 jet0, double t1, double t2, OdeOptions opts)
    : s_(std::move(s)), jet0_(jet0), t1_(t1), t2_(t2), opts_(opts) {
  if (std::abs(jet0.d1) == 0.0) throw Error(ErrorCode::ZeroDerivative, "map has f'(0) = 0");
  if (!(0.0 < t1 && t1 < t2 && t2 < kPi)) {
    throw Error(ErrorCode::InvalidArgument, "prevertex angles must satisfy 0 < t1 < t2 < pi");
  }
  basis0_ = basis_from_jet(jet0);
}

Jet2 DiskMap::jet(cplx z) const {
  if (z == 0.0) return jet0_;
  return jet_of_quotient(integrate_basis(s_, {0.0, z}, basis0_.y1, basis0_.y2, opts_));
}

std::vector<Jet2> DiskMap::jets_along(cplx z, std::span<const double> fractions) const {
  std::vector<Jet2> out;
  out.reserve(fractions.size());
  if (z == 0.0) {
    out.assign(fractions.size(), jet0_);
    return out;
  }
  for (const OdeBasis& b : trace_basis(s_, {0.0, z}, basis0_.y1, basis0_.y2, fractions, opts_)) {
    out.push_back(jet_of_quotient(b));
  }
  return out;
}

double DiskMap::real_inverse(double w) const {
  constexpr int kSamples = 32;
  std::vector<double> fr(kSamples + 1);
  for (int k = 0; k <= kSamples; ++k) fr[k] = double(k) / kSamples;
  const auto right = jets_along(1.0, fr);
  const auto left = jets_along(-1.0, fr);

  // Real-axis samples in increasing x.
  std::vector<double> xs, fs;
  for (int k = kSamples; k >= 1; --k) {
    xs.push_back(-fr[k]);
    fs.push_back(left[k].value.real());
  }
  for (int k = 0; k <= kSamples; ++k) {
    xs.push_back(fr[k]);
    fs.push_back(right[k].value.real());
  }
  std::size_t k = 0;
  while (k + 1 < xs.size() && !((fs[k] - w) * (fs[k + 1] - w) <= 0.0)) ++k;
  if (k + 1 == xs.size()) throw Error(ErrorCode::InversionFailed, "value outside f([-1, 1])");

  double lo = xs[k], hi = xs[k + 1];
  double flo = fs[k] - w;
  double x = 0.5 * (lo + hi);
  const double scale = 1.0 + std::abs(w);
  for (int it = 0; it < 100; ++it) {
    const Jet2 j = jet(x);
    const double r = j.value.real() - w;
    if (std::abs(r) <= 1e-15 * scale) return x;
    if ((r < 0.0) == (flo < 0.0)) {
      lo = x;
      flo = r;
    } else {
      hi = x;
    }
    double next = x - r / j.d1.real();
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-16) return next;
    x = next;
    if (hi - lo <= 1e-16) return x;
  }
  throw Error(ErrorCode::InversionFailed, "real inversion did not converge");
}

DiskMap symmetric_disk_map(const MapParams& p, OdeOptions opts) {
  if (!(p.t > 0.0 && p.t < kPi / 2)) throw Error(ErrorCode::InvalidArgument, "t outside (0, pi/2)");
  return DiskMap(disk_schwarzian(p), {0.0, 1.0, 0.0}, p.t, kPi - p.t, opts);
}

EndpointJets endpoint_jets(const DiskMap& f) {
  const cplx mid = std::polar(1.0, 0.5 * (f.t1() + f.t2()));
  return {f.jet(-1.0), f.jet(1.0), f.jet(mid), mid};
}

const BoundaryEdge& BoundaryTrace::edge(const std::string& label) const {
  for (const auto& e : edges) {
    if (e.label == label) return e;
  }
  throw Error(ErrorCode::InvalidArgument, "no edge labelled " + label);
}

BoundaryTrace trace_boundary(const DiskMap& f, int samples_per_edge) {
  if (samples_per_edge < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 samples per edge");
  BoundaryTrace out;
  out.jets = endpoint_jets(f);
  for (const EdgeSpec& spec : edge_specs(f.t1(), f.t2())) {
    BoundaryEdge edge{spec.label, {}};
    for (double th : clustered(spec.from, spec.to, samples_per_edge)) {
      edge.points.push_back(f.value(std::polar(1.0, th)));
    }
    out.edges.push_back(std::move(edge));
  }
  return out;
}

double curvature_at(const Jet2& jet, cplx z0) {
  if (std::abs(std::abs(z0) - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "curvature point must lie on the unit circle");
  }
  if (std::abs(jet.d1) == 0.0) throw Error(ErrorCode::ZeroDerivative, "f' vanishes on the boundary");
  return (1.0 + (z0 * jet.d2 / jet.d1).real()) / std::abs(jet.d1);
}

cplx curvature_center(const Jet2& jet, cplx z0) {
  const double k = curvature_at(jet, z0);
  if (k == 0.0) return {std::numeric_limits<double>::infinity(), 0.0};
  const cplx v = -z0 * jet.d1 / std::abs(jet.d1);
  return jet.value + v / k;
}

PregearGeometry analyze_pregear(const EndpointJets& jets) {
  PregearGeometry g;
  g.p_minus1 = jets.at_minus1.value.real();
  g.p_1 = jets.at_1.value.real();
  if (!(g.p_minus1 < g.p_1)) throw Error(ErrorCode::NotAPregear, "f(-1) >= f(1)");
  const Jet2& j = jets.at_tooth;
  const cplx z0 = jets.tooth_point;
  g.p = j.value;
  g.kappa = curvature_at(j, z0);
  g.v = -z0 * j.d1 / std::abs(j.d1);
  g.tangent = kI * z0 * j.d1 / std::abs(j.d1);
  if (std::abs(g.kappa) * (g.p_1 - g.p_minus1) < 1e-9) {
    g.straight = true;
    g.rho = std::numeric_limits<double>::infinity();
    g.c = {std::numeric_limits<double>::infinity(), 0.0};
    if (g.tangent.imag() == 0.0) throw Error(ErrorCode::NotAPregear, "tooth edge parallel to the axis");
    const double w0 = (g.p - g.tangent * (g.p.imag() / g.tangent.imag())).real();
    g.b_minus = g.b_plus = w0;
    return g;
  }
  g.rho = 1.0 / std::abs(g.kappa);
  g.c = g.p + g.v / g.kappa;
  const double d2 = g.rho * g.rho - g.c.imag() * g.c.imag();
  if (d2 < 0.0) throw Error(ErrorCode::NotAPregear, "tooth circles do not meet");
  g.d = std::sqrt(d2);
  // The crossings are the roots of x^2 - 2 Re(c) x + |c|^2 - rho^2; for a nearly straight edge
  // one of them is huge, so take the other from the product of the roots.
  const double far = g.c.real() + std::copysign(g.d, g.c.real());
  const double product = std::norm(g.p) + 2.0 * (std::conj(g.p) * g.v).real() / g.kappa;
  const double near = far != 0.0 ? product / far : 0.0;
  g.b_minus = std::min(far, near);
  g.b_plus = std::max(far, near);
  return g;
}

PregearGeometry analyze_pregear(const BoundaryTrace& trace) { return analyze_pregear(trace.jets); }

GearNormalization gear_normalize(const PregearGeometry& geo) {
  GearNormalization n;
  auto inside = [&](double b) { return geo.p_minus1 < b && b < geo.p_1; };
  if (geo.straight) {
    if (!inside(geo.b_minus)) throw Error(ErrorCode::NotAPregear, "tooth line misses the axis segment");
    n.T = MobiusMap::translation(-geo.b_minus);
    n.b_interior = geo.b_minus;
  } else if (inside(geo.b_minus) && !inside(geo.b_plus)) {
    n.T = MobiusMap(-1.0, geo.b_minus, 1.0, -geo.b_plus);
    n.b_interior = geo.b_minus;
  } else if (inside(geo.b_plus) && !inside(geo.b_minus)) {
    n.T = MobiusMap(1.0, -geo.b_plus, 1.0, -geo.b_minus);
    n.b_interior = geo.b_plus;
  } else {
    throw Error(ErrorCode::NotAPregear, "expected exactly one tooth-circle crossing inside");
  }
  n.params.beta = std::abs(n.T(geo.p_1)) / std::abs(n.T(geo.p_minus1));
  n.params.gamma = std::arg(n.T(geo.p));
  return n;
}

double arc_centers_gap(const EndpointJets& jets) {
  return std::abs(curvature_center(jets.at_1, 1.0) - curvature_center(jets.at_minus1, -1.0));
}

Repositioned reposition_center(const DiskMap& f, double w0) {
  const double p = f.real_inverse(w0);
  const MobiusMap shift(1.0, p, p, 1.0);
  const Jet2 jf = f.jet(p);
  const Jet2 j0 = compose_jet2(jf, mobius_jet(shift, 0.0));
  const MobiusMap back = shift.inverse();
  const double t1 = std::arg(back(std::polar(1.0, f.t1())));
  const double t2 = std::arg(back(std::polar(1.0, f.t2())));
  return {t1, t2, p, DiskMap(pullback(f.schwarzian(), shift), j0, t1, t2, f.options())};
}

GearMap renormalized_gear_map(const MapParams& p, OdeOptions opts) {
  const DiskMap f = symmetric_disk_map(p, opts);
  const PregearGeometry geo = analyze_pregear(endpoint_jets(f));
  const GearNormalization norm = gear_normalize(geo);
  Repositioned r = reposition_center(f, norm.b_interior);
  const Jet2 j0 = compose_jet2(mobius_jet(norm.T, norm.b_interior), r.map.jet0());
  DiskMap h(r.map.schwarzian(), j0, r.t1, r.t2, opts);
  return {std::move(h), norm.params, geo, norm.T, -r.p};
}

MultiToothMap::MultiToothMap(DiskMap h, int n) : h_(std::move(h)), n_(n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "tooth count must be positive");
}

cplx MultiToothMap::log_ratio(cplx w) const {
  cplx prev = std::log(h_.jet0().d1);
  if (w == 0.0) return prev;
  constexpr int kSteps = 32;
  std::vector<double> fr(kSteps);
  for (int k = 0; k < kSteps; ++k) fr[k] = double(k + 1) / kSteps;
  const auto jets = h_.jets_along(w, fr);
  for (int k = 0; k < kSteps; ++k) {
    cplx l = std::log(jets[k].value / (fr[k] * w));
    l.imag(l.imag() + 2 * kPi * std::round((prev.imag() - l.imag()) / (2 * kPi)));
    prev = l;
  }
  return prev;
}

cplx MultiToothMap::value(cplx z) const {
  if (z == 0.0) return 0.0;
  return z * std::exp(log_ratio(std::pow(z, n_)) / double(n_));
}

std::vector<BoundaryEdge> MultiToothMap::boundary(int samples_per_edge) const {
  std::vector<BoundaryEdge> out;
  const auto specs = edge_specs(h_.t1(), h_.t2());
  std::vector<std::vector<std::pair<double, cplx>>> base;
  for (const EdgeSpec& spec : specs) {
    std::vector<std::pair<double, cplx>> pts;
    // Tooth k is centred on the ray at angle 2 pi k / n.
    const double shift = std::string(spec.label) == "tooth-lower" ? -2 * kPi : 0.0;
    for (double th : clustered(spec.from + shift, spec.to + shift, samples_per_edge)) {
      pts.emplace_back(th, std::exp(log_ratio(std::polar(1.0, th)) / double(n_)));
    }
    base.push_back(std::move(pts));
  }
  for (int k = 0; k < n_; ++k) {
    for (std::size_t e = 0; e < specs.size(); ++e) {
      BoundaryEdge edge{std::string(specs[e].label) + "-" + std::to_string(k), {}};
      for (const auto& [th, factor] : base[e]) {
        edge.points.push_back(std::polar(1.0, (th + 2 * kPi * k) / n_) * factor);
      }
      out.push_back(std::move(edge));
    }
  }
  return out;
}

MultiToothMap multitooth(const DiskMap& centered, int n, double center_tol) {
  const Jet2& j = centered.jet0();
  if (std::abs(j.value) > center_tol * (1.0 + std::abs(j.d1))) {
    throw Error(ErrorCode::NotCentered, "map does not send 0 to the gear center");
  }
  return MultiToothMap(centered, n);
}

}  // namespace gearmap
