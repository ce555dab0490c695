#include "gearmap/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "gearmap/error.hpp"

namespace gearmap {

MobiusMap::MobiusMap(cplx a, cplx b, cplx c, cplx d) {
  const cplx det = a * d - b * c;
  if (std::abs(det) == 0.0 || !std::isfinite(std::abs(det))) {
    throw Error(ErrorCode::InvalidArgument, "singular Mobius coefficients");
  }
  const cplx s = std::sqrt(det);
  a_ = a / s;
  b_ = b / s;
  c_ = c / s;
  d_ = d / s;
}

MobiusMap MobiusMap::disk_automorphism(double q) { return {1.0, -q, -q, 1.0}; }

namespace {

bool at_pole(cplx c, cplx d, cplx z) {
  return std::abs(c * z + d) <= 1e-15 * (std::abs(c * z) + std::abs(d));
}

}  // namespace

cplx MobiusMap::operator()(cplx z) const {
  const cplx den = c_ * z + d_;
  if (at_pole(c_, d_, z)) throw Error(ErrorCode::PoleAtPoint, "Mobius map evaluated at its pole");
  return (a_ * z + b_) / den;
}

cplx MobiusMap::derivative(cplx z) const {
  const cplx den = c_ * z + d_;
  if (at_pole(c_, d_, z)) throw Error(ErrorCode::PoleAtPoint, "Mobius map evaluated at its pole");
  return 1.0 / (den * den);
}

cplx MobiusMap::pole() const {
  if (c_ == 0.0) return {std::numeric_limits<double>::infinity(), 0.0};
  return -d_ / c_;
}

MobiusMap MobiusMap::after(const MobiusMap& in) const {
  return {a_ * in.a_ + b_ * in.c_, a_ * in.b_ + b_ * in.d_, c_ * in.a_ + d_ * in.c_,
          c_ * in.b_ + d_ * in.d_};
}

MobiusMap MobiusMap::inverse() const { return {d_, -b_, -c_, a_}; }

namespace {

using State = std::array<cplx, 4>;

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

class Stepper {
 public:
  Stepper(const Coefficient& coeff, const PathSpec& path, const OdeOptions& opts)
      : coeff_(coeff), start_(path.start), dir_(path.direction()), opts_(opts),
        h_unit_(1e-4 * path.length()) {
    start_coeff_ = std::abs(eval(start_));
  }

  // Derivative with respect to arc length s along the path.
  State rhs(double s, const State& y) const {
    const cplx k = -0.5 * eval(start_ + s * dir_);
    return {dir_ * y[1], dir_ * k * y[0], dir_ * y[3], dir_ * k * y[2]};
  }

  // Advance y from s to s_end.
  void advance(State& y, double& s, double s_end, double& h) {
    State k1 = rhs(s, y);
    h_before_clip_ = std::max(h_before_clip_, h);
    const double h_floor = 1e-12 * std::max(1.0, s_end);
    while (s < s_end) {
      const double remaining = s_end - s;
      if (remaining <= 1e-14 * (1.0 + s_end)) {
        // Rounding residue; the state is already at s_end to working precision.
        s = s_end;
        break;
      }
      bool last = false;
      if (h >= remaining) {
        h = remaining;
        last = true;
      }
      if (++steps_ > opts_.max_steps) {
        throw Error(ErrorCode::ToleranceNotMet, "step budget exhausted");
      }
      step_coeff_ = 0.0;
      State k2 = rhs(s + c2 * h, combine(y, h, {{a21, k1}}));
      State k3 = rhs(s + c3 * h, combine(y, h, {{a31, k1}, {a32, k2}}));
      State k4 = rhs(s + c4 * h, combine(y, h, {{a41, k1}, {a42, k2}, {a43, k3}}));
      State k5 = rhs(s + c5 * h, combine(y, h, {{a51, k1}, {a52, k2}, {a53, k3}, {a54, k4}}));
      State k6 = rhs(s + h, combine(y, h, {{a61, k1}, {a62, k2}, {a63, k3}, {a64, k4}, {a65, k5}}));
      State y_new = combine(y, h, {{b1, k1}, {b3, k3}, {b4, k4}, {b5, k5}, {b6, k6}});
      State k7 = rhs(s + h, y_new);

      // Error per unit length; steps shorter than h_unit are held to the per-step bound
      // tol * h_unit, and the stage increments set a rounding floor.
      double ratio = 0.0;
      for (std::size_t i = 0; i < 4; ++i) {
        const cplx est = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                              e7 * k7[i]);
        const double scale = 1.0 + std::max(std::abs(y[i]), std::abs(y_new[i]));
        const double kmax = std::max({std::abs(k1[i]), std::abs(k3[i]), std::abs(k4[i]),
                                      std::abs(k5[i]), std::abs(k6[i]), std::abs(k7[i])});
        const double allowed =
            std::max(h, h_unit_) * opts_.tol * scale + 100.0 * kEps * h * kmax;
        ratio = std::max(ratio, std::abs(est) / allowed);
      }
      if (!std::isfinite(ratio)) throw Error(ErrorCode::PoleOnPath, "non-finite solution on path");

      if (ratio <= 1.0) {
        s = last ? s_end : s + h;
        y = y_new;
        k1 = k7;
        const double grow = ratio == 0.0 ? 4.0 : std::min(4.0, 0.9 * std::pow(ratio, -0.25));
        if (!last) h *= std::max(1.0, grow);
        else h = std::max(h, h_before_clip_);
      } else {
        h *= std::max(0.1, 0.9 * std::pow(ratio, -0.25));
        if (h < h_floor) {
          if (step_coeff_ > 1e6 * (1.0 + start_coeff_)) {
            throw Error(ErrorCode::PoleOnPath, "coefficient singular on the path");
          }
          throw Error(ErrorCode::ToleranceNotMet, "step size underflow");
        }
      }
      if (!last) h_before_clip_ = h;
    }
  }

 private:
  cplx eval(cplx z) const {
    cplx v;
    try {
      v = coeff_(z);
    } catch (const Error& e) {
      throw Error(ErrorCode::PoleOnPath, e.what());
    }
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > 1e150) {
      throw Error(ErrorCode::PoleOnPath, "coefficient overflow on path");
    }
    step_coeff_ = std::max(step_coeff_, std::abs(v));
    return v;
  }

  struct Term {
    double a;
    const State& k;
  };

  static State combine(const State& y, double h, std::initializer_list<Term> terms) {
    State out = y;
    for (const auto& t : terms) {
      for (std::size_t i = 0; i < 4; ++i) out[i] += h * t.a * t.k[i];
    }
    return out;
  }

  const Coefficient& coeff_;
  cplx start_;
  cplx dir_;
  OdeOptions opts_;
  double h_unit_;
  std::size_t steps_ = 0;
  double start_coeff_ = 0.0;
  mutable double step_coeff_ = 0.0;
  double h_before_clip_ = 0.0;
};

void check_inputs(const PathSpec& path, const OdeOptions& opts) {
  if (!(opts.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (!(path.length() > 0.0)) throw Error(ErrorCode::InvalidArgument, "degenerate path");
}

OdeBasis to_basis(const State& y) { return {{y[0], y[1]}, {y[2], y[3]}}; }

void check_drift(cplx w0, const State& y, const OdeOptions& opts) {
  const cplx w = y[0] * y[3] - y[2] * y[1];
  // Loose step tolerances get a proportionally looser budget.
  const double budget = std::max(opts.wronskian_budget, 10.0 * opts.tol);
  if (std::abs(w - w0) > budget * std::abs(w0)) {
    throw Error(ErrorCode::ToleranceNotMet, "Wronskian drift exceeds budget");
  }
}

}  // namespace

OdeBasis integrate_basis(const Coefficient& coeff, const PathSpec& path, Jet1 init1, Jet1 init2,
                         const OdeOptions& opts) {
  check_inputs(path, opts);
  State y{init1.value, init1.deriv, init2.value, init2.deriv};
  const cplx w0 = y[0] * y[3] - y[2] * y[1];
  Stepper stepper(coeff, path, opts);
  const double len = path.length();
  double s = 0.0;
  double h = std::min(len, 1.0) / 32.0;
  stepper.advance(y, s, len, h);
  check_drift(w0, y, opts);
  return to_basis(y);
}

std::vector<OdeBasis> trace_basis(const Coefficient& coeff, const PathSpec& path, Jet1 init1,
                                  Jet1 init2, std::span<const double> fractions,
                                  const OdeOptions& opts) {
  check_inputs(path, opts);
  State y{init1.value, init1.deriv, init2.value, init2.deriv};
  const cplx w0 = y[0] * y[3] - y[2] * y[1];
  Stepper stepper(coeff, path, opts);
  const double len = path.length();
  double s = 0.0;
  double h = std::min(len, 1.0) / 32.0;
  std::vector<OdeBasis> out;
  out.reserve(fractions.size());
  double prev = 0.0;
  for (double f : fractions) {
    if (f < prev || f > 1.0) throw Error(ErrorCode::InvalidArgument, "fractions must ascend in [0,1]");
    prev = f;
    if (f * len > s) stepper.advance(y, s, f * len, h);
    out.push_back(to_basis(y));
  }
  check_drift(w0, y, opts);
  return out;
}

Jet2 jet_of_quotient(const OdeBasis& basis) {
  const cplx y1 = basis.y1.value;
  const double scale = 1.0 + std::abs(basis.y2.value) + std::abs(basis.y1.deriv);
  if (std::abs(y1) < 1e-14 * scale) {
    throw Error(ErrorCode::DivisionByZeroSolution, "y1 vanishes at endpoint");
  }
  return {basis.y2.value / y1, 1.0 / (y1 * y1), -2.0 * basis.y1.deriv / (y1 * y1 * y1)};
}

OdeBasis basis_from_jet(const Jet2& target) {
  if (std::abs(target.d1) == 0.0) throw Error(ErrorCode::InvalidArgument, "jet has zero derivative");
  const cplx y1 = 1.0 / std::sqrt(target.d1);
  const cplx y1p = -0.5 * target.d2 * y1 * y1 * y1;
  const cplx y2 = target.value * y1;
  const cplx y2p = (1.0 + y2 * y1p) / y1;
  return {{y1, y1p}, {y2, y2p}};
}

Jet2 compose_jet2(const Jet2& outer, const Jet2& inner) {
  return {outer.value, inner.d1 * outer.d1, inner.d1 * inner.d1 * outer.d2 + inner.d2 * outer.d1};
}

Jet2 mobius_jet(const MobiusMap& map, cplx z0) {
  const cplx den = map.c() * z0 + map.d();
  if (at_pole(map.c(), map.d(), z0)) throw Error(ErrorCode::PoleAtPoint, "jet requested at the pole");
  const cplx d1 = 1.0 / (den * den);
  return {(map.a() * z0 + map.b()) / den, d1, -2.0 * map.c() * d1 / den};
}

}  // namespace gearmap
