#include "gearmap/rectmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gearmap/error.hpp"
#include "gearmap/solver.hpp"

namespace gearmap {

namespace {

const cplx kI(0.0, 1.0);

std::vector<double> uniform(int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
  return out;
}

cplx quotient(const OdeBasis& b, double alpha) {
  const cplx y = b.y1.value + alpha * b.y2.value;
  if (std::abs(y) < 1e-14 * (std::abs(b.y1.value) + std::abs(b.y2.value))) {
    throw Error(ErrorCode::DivisionByZeroSolution, "y1 + alpha y2 vanishes");
  }
  return b.y2.value / y;
}

OdeBasis conj(const OdeBasis& b) {
  return {{std::conj(b.y1.value), std::conj(b.y1.deriv)}, {std::conj(b.y2.value), std::conj(b.y2.deriv)}};
}

/// Bases at x + i s for each s in `heights` (ascending, >= 0), integrating up from the real axis.
std::vector<OdeBasis> column(const RectMap& m, const OdeBasis& at_x, double x, const std::vector<double>& heights) {
  std::vector<OdeBasis> out;
  if (heights.empty()) return out;
  const double top = heights.back();
  if (top == 0.0) return std::vector<OdeBasis>(heights.size(), at_x);
  std::vector<double> fr;
  for (double s : heights) fr.push_back(s / top);
  fr.back() = 1.0;
  const Coefficient c = [&m](cplx z) { return m.coefficient(z); };
  return trace_basis(c, {cplx(x, 0.0), cplx(x, top)}, at_x.y1, at_x.y2, fr, m.options());
}

/// Bases on the real axis at ascending points xs in [-w, w].
std::vector<OdeBasis> real_axis(const RectMap& m, const std::vector<double>& xs) {
  const Coefficient c = [&m](cplx z) { return m.coefficient(z); };
  std::vector<OdeBasis> out(xs.size());
  std::vector<double> pos, neg;
  std::vector<std::size_t> pi, ni;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (xs[k] >= 0.0) {
      pos.push_back(xs[k]);
      pi.push_back(k);
    }
  }
  for (std::size_t k = xs.size(); k-- > 0;) {
    if (xs[k] < 0.0) {
      neg.push_back(xs[k]);
      ni.push_back(k);
    }
  }
  const Jet1 e1{1.0, 0.0}, e2{0.0, 1.0};
  auto run = [&](const std::vector<double>& pts, const std::vector<std::size_t>& idx) {
    if (pts.empty()) return;
    const double end = pts.back();
    if (end == 0.0) {
      for (std::size_t k : idx) out[k] = {e1, e2};
      return;
    }
    std::vector<double> fr;
    for (double p : pts) fr.push_back(p / end);
    fr.back() = 1.0;
    const auto b = trace_basis(c, {0.0, end}, e1, e2, fr, m.options());
    for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] = b[k];
  };
  run(pos, pi);
  run(neg, ni);
  return out;
}

}  // namespace

double mu_from_lambda(double t, double lambda) {
  if (!(t > 0.0 && t < 0.5 * M_PI)) throw Error(ErrorCode::InvalidArgument, "t must lie in (0, pi/2)");
  return 16.0 * lambda * std::cos(t) + (3.0 + std::cos(2.0 * t)) / 6.0;
}

cplx phi(const RectParams& params, const PeriodLattice& lat, cplx zeta) {
  const cplx a = zeta + 0.5 * lat.omega3;
  const cplx b = zeta + 0.5 * (lat.omega1 - lat.omega2);
  try {
    return -4.0 * (wp(a, lat) + wp(b, lat)) + 4.0 * params.mu;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::LatticePointPole) throw Error(ErrorCode::PoleAtVertex, "phi at a left vertex");
    throw;
  }
}

CornerJets corner_jets(const RectParams& params, const PeriodLattice& lat, const OdeOptions& opts) {
  const Coefficient along = [&](cplx x) { return phi(params, lat, x); };
  const OdeBasis b = integrate_basis(along, {0.0, 0.5 * lat.omega1}, {1.0, 0.0}, {0.0, 1.0}, opts);
  const double right = 0.5 * lat.omega1;
  const Coefficient up = [&](cplx s) { return -phi(params, lat, cplx(right, s.real())); };
  const OdeBasis c = integrate_basis(up, {0.0, 0.5 * lat.omega2.imag()}, {1.0, 0.0}, {0.0, 1.0}, opts);
  CornerJets j;
  const cplx raw[8] = {b.y1.value, b.y1.deriv, b.y2.value, b.y2.deriv,
                       c.y1.value, c.y1.deriv, c.y2.value, c.y2.deriv};
  for (const cplx& v : raw) j.max_imag = std::max(j.max_imag, std::abs(v.imag()));
  j.b1 = raw[0].real();
  j.b1p = raw[1].real();
  j.b2 = raw[2].real();
  j.b2p = raw[3].real();
  j.c1 = raw[4].real();
  j.c1p = raw[5].real();
  j.c2 = raw[6].real();
  j.c2p = raw[7].real();
  j.y1 = {cplx(j.b1 * j.c1, j.b1p * j.c2), cplx(j.b1p * j.c2p, -j.b1 * j.c1p)};
  j.y2 = {cplx(j.b2 * j.c1, j.b2p * j.c2), cplx(j.b2p * j.c2p, -j.b2 * j.c1p)};
  return j;
}

std::vector<double> collinearity_roots(cplx z1, cplx z2, cplx w1, cplx w2) {
  const double a = (z2 * std::conj(w2)).imag();
  const double b = (z1 * std::conj(w2) + z2 * std::conj(w1)).imag();
  const double c = (z1 * std::conj(w1)).imag();
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (scale == 0.0) throw Error(ErrorCode::NoRealRoots, "collinearity holds for every alpha");
  if (std::abs(a) <= 1e-14 * scale) {
    if (std::abs(b) <= 1e-14 * scale) throw Error(ErrorCode::NoRealRoots, "no alpha gives collinearity");
    return {-c / b};
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < -1e-12 * b * b - 1e-300) throw Error(ErrorCode::NoRealRoots, "complex alpha roots");
  if (disc <= 1e-12 * b * b) return {-b / (2.0 * a), -b / (2.0 * a)};
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::vector<double> r{q / a, c / q};
  std::sort(r.begin(), r.end());
  return r;
}

RectMap::RectMap(const RectParams& params, OdeOptions opts)
    : params_(params), lat_(lattice_from_tau(params.tau)), opts_(opts) {
  corner_ = corner_jets(params_, lat_, opts_);
}

cplx RectMap::coefficient(cplx zeta) const { return phi(params_, lat_, zeta); }

OdeBasis RectMap::basis(cplx zeta) const {
  const OdeBasis at_x = real_axis(*this, {zeta.real()})[0];
  if (zeta.imag() == 0.0) return at_x;
  const bool lower = zeta.imag() < 0.0;
  const OdeBasis b = column(*this, at_x, zeta.real(), {std::abs(zeta.imag())}).back();
  return lower ? conj(b) : b;
}

cplx RectMap::value(double alpha, cplx zeta) const { return quotient(basis(zeta), alpha); }

AlphaRoots RectMap::alpha_roots() const {
  const std::vector<double> r = collinearity_roots(corner_.y1.value, corner_.y2.value, corner_.y1.deriv,
                                                   corner_.y2.deriv);
  AlphaRoots out;
  out.degenerate = r.size() == 2 && r[0] == r[1];
  const int n = 65;
  std::vector<double> xs;
  for (double u : uniform(n)) xs.push_back(-half_width() + 2.0 * half_width() * u);
  const std::vector<OdeBasis> axis = real_axis(*this, xs);
  std::vector<double> heights;
  for (double u : uniform(9)) heights.push_back(half_height() * (0.05 + 0.9 * u));
  std::vector<std::vector<OdeBasis>> cols;
  for (int k = 4; k < n; k += 8) cols.push_back(column(*this, axis[static_cast<std::size_t>(k)], xs[static_cast<std::size_t>(k)], heights));
  for (double alpha : r) {
    bool bounded = true;
    double prev = 0.0;
    for (const OdeBasis& b : axis) {
      const double y = (b.y1.value + alpha * b.y2.value).real();
      if (y == 0.0 || (prev != 0.0 && (y < 0.0) != (prev < 0.0))) bounded = false;
      prev = y;
    }
    const double scale = half_width();
    for (const auto& col : cols) {
      for (const OdeBasis& b : col) {
        const cplx y = b.y1.value + alpha * b.y2.value;
        if (!(std::abs(b.y2.value) <= 1e6 * scale * std::abs(y))) bounded = false;
      }
    }
    out.roots.push_back({alpha, bounded});
  }
  return out;
}

RectGear RectMap::measure(double alpha) const {
  const std::vector<OdeBasis> ends = real_axis(*this, {-half_width(), half_width()});
  RectGear g;
  g.g_left = quotient(ends[0], alpha).real();
  g.g_right = quotient(ends[1], alpha).real();
  const cplx y = corner_.y1.value + alpha * corner_.y2.value;
  const cplx w = corner_.y1.value * corner_.y2.deriv - corner_.y2.value * corner_.y1.deriv;
  g.g_corner = corner_.y2.value / y;
  const cplx dg = w / (y * y);
  if (std::abs(dg.imag()) < 1e-14 * std::abs(dg)) {
    throw Error(ErrorCode::NotAPregear, "upper edge image parallel to the real axis");
  }
  g.w0 = (g.g_corner - dg * (g.g_corner.imag() / dg.imag())).real();
  g.params.beta = (g.g_right - g.w0) / (g.w0 - g.g_left);
  g.params.gamma = std::arg(g.g_corner - g.w0);
  return g;
}

std::vector<BoundaryEdge> map_rectangle(const RectMap& m, double alpha, const MeshSpec& mesh) {
  if (mesh.vertical < 2 || mesh.horizontal < 2 || mesh.refine < 1) {
    throw Error(ErrorCode::InvalidArgument, "mesh needs at least 2 lines per direction");
  }
  const double w = m.half_width();
  const double h = m.half_height();
  const int nx = (mesh.vertical - 1) * mesh.refine + 1;
  const int ny = (mesh.horizontal - 1) * mesh.refine + 1;
  std::vector<double> xs, ys;
  for (double u : uniform(nx)) xs.push_back(-w + 2.0 * w * u);
  for (double u : uniform(ny)) ys.push_back(-h + 2.0 * h * u);
  std::vector<double> heights;
  for (double y : ys) heights.push_back(std::abs(y));
  std::sort(heights.begin(), heights.end());
  heights.erase(std::unique(heights.begin(), heights.end()), heights.end());
  const double near = mesh.vertex_gap * h;

  const std::vector<OdeBasis> axis = real_axis(m, xs);
  // values[i][j]: image of xs[i] + i ys[j].
  std::vector<std::vector<cplx>> values(xs.size(), std::vector<cplx>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    // Columns stay at least `near` away from the left vertices.
    const double dx = xs[i] + w;
    std::vector<double> hs = heights;
    if (dx < near) {
      const double cap = h - std::sqrt(near * near - dx * dx);
      for (double& s : hs) s = std::min(s, cap);
    }
    const std::vector<OdeBasis> col = column(m, axis[i], xs[i], hs);
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double s = std::abs(ys[j]);
      const std::size_t k = static_cast<std::size_t>(std::lower_bound(heights.begin(), heights.end(), s) - heights.begin());
      const cplx v = quotient(col[k], alpha);
      values[i][j] = ys[j] < 0.0 ? std::conj(v) : v;
    }
  }
  std::vector<BoundaryEdge> out;
  for (int k = 0; k < mesh.vertical; ++k) {
    BoundaryEdge e{"vertical-" + std::to_string(k), values[static_cast<std::size_t>(k * mesh.refine)]};
    out.push_back(std::move(e));
  }
  for (int k = 0; k < mesh.horizontal; ++k) {
    BoundaryEdge e{"horizontal-" + std::to_string(k), {}};
    for (const auto& col : values) e.points.push_back(col[static_cast<std::size_t>(k * mesh.refine)]);
    out.push_back(std::move(e));
  }
  return out;
}

cplx left_vertex_image(const RectMap& m, double alpha, double vertex_gap) {
  // g = g(v) + a d^3 + b d^4 at d = k gap h, k = 1, 2, 3.
  constexpr double weights[3] = {108.0 / 85.0, -27.0 / 85.0, 4.0 / 85.0};
  const double w = m.half_width();
  const double h = m.half_height();
  cplx v = 0.0;
  for (int k = 1; k <= 3; ++k) v += weights[k - 1] * m.value(alpha, cplx(-w, h * (1.0 - k * vertex_gap)));
  return v;
}

std::vector<BoundaryEdge> rect_boundary(const RectMap& m, double alpha, int samples, double vertex_gap,
                                        bool graded) {
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 samples per edge");
  const double w = m.half_width();
  const double h = m.half_height();
  const int half = samples / 2 + 1;
  const double near = vertex_gap * h;
  // Distance to the left vertex from far to near; graded spacing is uniform in distance^3.
  auto distances = [&](int n, double far) {
    std::vector<double> d;
    for (double u : uniform(n)) {
      d.push_back(graded ? std::cbrt(far * far * far * (1.0 - u) + near * near * near * u)
                         : far + (near - far) * u);
    }
    return d;
  };
  const std::vector<OdeBasis> ends = real_axis(m, {-w, w});
  std::vector<double> heights;
  for (double u : uniform(half)) heights.push_back(h * u);

  auto symmetric = [&](const std::vector<OdeBasis>& up) {
    std::vector<cplx> pts;
    for (std::size_t k = up.size(); k-- > 1;) pts.push_back(std::conj(quotient(up[k], alpha)));
    for (const OdeBasis& b : up) pts.push_back(quotient(b, alpha));
    return pts;
  };

  std::vector<BoundaryEdge> out;
  out.push_back({"right", symmetric(column(m, ends[1], w, heights))});

  const cplx corner(w, h);
  const cplx end(-w + near, h);
  const Coefficient c = [&m](cplx z) { return m.coefficient(z); };
  std::vector<double> fr;
  for (double d : distances(samples, 2.0 * w)) fr.push_back((2.0 * w - d) / (2.0 * w - near));
  fr.front() = 0.0;
  fr.back() = 1.0;
  const auto top = trace_basis(c, {corner, end}, m.corner().y1, m.corner().y2, fr, m.options());
  BoundaryEdge top_edge{"top", {}};
  for (const OdeBasis& b : top) top_edge.points.push_back(quotient(b, alpha));
  const cplx vertex = left_vertex_image(m, alpha, vertex_gap);
  top_edge.points.push_back(vertex);

  std::vector<double> left_heights;
  for (double d : distances(half, h)) left_heights.push_back(h - d);
  left_heights.front() = 0.0;
  std::vector<cplx> left = symmetric(column(m, ends[0], -w, left_heights));
  std::reverse(left.begin(), left.end());
  left.insert(left.begin(), vertex);
  left.push_back(std::conj(vertex));

  BoundaryEdge bottom{"bottom", {}};
  for (auto it = top_edge.points.rbegin(); it != top_edge.points.rend(); ++it) bottom.points.push_back(std::conj(*it));
  out.push_back(std::move(top_edge));
  out.push_back({"left", std::move(left)});
  out.push_back(std::move(bottom));
  return out;
}

namespace {

double segment_distance(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  double u = len2 > 0.0 ? ((p - a) * std::conj(d)).real() / len2 : 0.0;
  u = std::clamp(u, 0.0, 1.0);
  return std::abs(p - (a + u * d));
}

/// Distance to the arc {r e^{i theta}: gamma <= theta <= 2 pi - gamma}.
double arc_distance(cplx p, double r, double gamma) {
  if (std::abs(std::arg(p)) >= gamma) return std::abs(std::abs(p) - r);
  return std::min(std::abs(p - std::polar(r, gamma)), std::abs(p - std::polar(r, -gamma)));
}

double boundary_distance(cplx p, double beta, double gamma) {
  const double outer = beta * beta;
  return std::min({arc_distance(p, 1.0, gamma), arc_distance(p, outer, gamma),
                   segment_distance(p, std::polar(1.0, gamma), std::polar(outer, gamma)),
                   segment_distance(p, std::polar(1.0, -gamma), std::polar(outer, -gamma))});
}

}  // namespace

double annular_rectangle_distance(const std::vector<std::vector<cplx>>& curves, double beta, double gamma,
                                  int reference_samples) {
  double forward_d = 0.0;
  for (const auto& c : curves) {
    for (const cplx& p : c) forward_d = std::max(forward_d, boundary_distance(p, beta, gamma));
  }
  const double outer = beta * beta;
  const double arc = 2.0 * (M_PI - gamma);
  const double lengths[4] = {arc, outer * arc, outer - 1.0, outer - 1.0};
  const double total = lengths[0] + lengths[1] + lengths[2] + lengths[3];
  std::vector<cplx> ref;
  for (int piece = 0; piece < 4; ++piece) {
    const int n = std::max(2, static_cast<int>(reference_samples * lengths[piece] / total));
    for (double u : uniform(n)) {
      switch (piece) {
        case 0: ref.push_back(std::polar(1.0, gamma + u * arc)); break;
        case 1: ref.push_back(std::polar(outer, gamma + u * arc)); break;
        case 2: ref.push_back(std::polar(1.0 + u * (outer - 1.0), gamma)); break;
        default: ref.push_back(std::polar(1.0 + u * (outer - 1.0), -gamma)); break;
      }
    }
  }
  double backward_d = 0.0;
  for (const cplx& q : ref) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : curves) {
      for (std::size_t k = 0; k + 1 < c.size(); ++k) best = std::min(best, segment_distance(q, c[k], c[k + 1]));
      if (c.size() == 1) best = std::min(best, std::abs(q - c[0]));
    }
    backward_d = std::max(backward_d, best);
  }
  return std::max(forward_d, backward_d);
}

ExteriorModulus exterior_modulus_annular_rectangle(double beta, double gamma, int samples) {
  if (!(beta > 1.0) || !(gamma > 0.0 && gamma < M_PI)) {
    throw Error(ErrorCode::InvalidArgument, "need beta > 1 and 0 < gamma < pi");
  }
  const InvertResult inv = invert({beta, gamma});
  ExteriorModulus out;
  out.t = inv.params.t;
  out.lambda = inv.params.lambda;
  out.modulus = 0.5 * module_M(out.t);

  const RectMap rm({cplx(0.0, module_M(out.t)), mu_from_lambda(out.t, out.lambda)}, OdeOptions{1e-12});
  const AlphaRoots roots = rm.alpha_roots();
  const AlphaRoot* chosen = nullptr;
  for (const AlphaRoot& r : roots.roots) {
    if (r.bounded) chosen = &r;
  }
  if (chosen == nullptr) throw Error(ErrorCode::NotAPregear, "no alpha gives a bounded gear");
  const RectGear gear = rm.measure(chosen->alpha);
  const double scale = gear.w0 - gear.g_left;
  const std::vector<BoundaryEdge> edges = rect_boundary(rm, chosen->alpha, samples, 1.5e-2, true);
  std::vector<std::vector<cplx>> curves;
  for (const BoundaryEdge& e : edges) {
    if (e.label == "right") continue;
    std::vector<cplx> pts, mirrored;
    for (const cplx& p : e.points) {
      const cplx n = (p - gear.w0) / scale;
      pts.push_back(n);
      mirrored.push_back(beta * beta / std::conj(n));
    }
    curves.push_back(std::move(pts));
    curves.push_back(std::move(mirrored));
  }
  out.hausdorff = annular_rectangle_distance(curves, beta, gamma);
  return out;
}

}  // namespace gearmap
