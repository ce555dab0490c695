#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gearmap {

using cplx = std::complex<double>;

/// Value and first derivative of a solution at a point.
struct Jet1 {
  cplx value;
  cplx deriv;
};

/// 2-jet (f, f', f'') of a map at a point.
struct Jet2 {
  cplx value;
  cplx d1;
  cplx d2;
};

/// z -> (a z + b) / (c z + d), stored with ad - bc = 1.
class MobiusMap {
 public:
  MobiusMap(cplx a, cplx b, cplx c, cplx d);

  static MobiusMap identity() { return {1.0, 0.0, 0.0, 1.0}; }
  /// Disk automorphism z -> (z - q) / (1 - q z).
  static MobiusMap disk_automorphism(double q);
  static MobiusMap translation(cplx shift) { return {1.0, shift, 0.0, 1.0}; }

  cplx operator()(cplx z) const;
  cplx derivative(cplx z) const;
  /// Pole location, or infinity when c == 0.
  cplx pole() const;
  bool is_affine() const { return c_ == 0.0; }

  /// (*this)(inner(z)).
  MobiusMap after(const MobiusMap& inner) const;
  MobiusMap inverse() const;

  cplx a() const { return a_; }
  cplx b() const { return b_; }
  cplx c() const { return c_; }
  cplx d() const { return d_; }

 private:
  cplx a_, b_, c_, d_;
};

/// Straight segment from start to end.
struct PathSpec {
  cplx start;
  cplx end;

  double length() const { return std::abs(end - start); }
  cplx direction() const { return (end - start) / length(); }
  cplx at(double fraction) const { return start + fraction * (end - start); }
};

/// Endpoint jets of two solutions of 2y'' + coeff y = 0.
struct OdeBasis {
  Jet1 y1;
  Jet1 y2;

  cplx wronskian() const { return y1.value * y2.deriv - y2.value * y1.deriv; }
};

/// Coefficient of 2y'' + coeff(z) y = 0, evaluated at points of the path.
using Coefficient = std::function<cplx(cplx)>;

struct OdeOptions {
  /// Local error per unit length.
  double tol = 1e-10;
  /// Allowed relative Wronskian drift over one integration (at least 10 * tol).
  double wronskian_budget = 1e-9;
  std::size_t max_steps = 4'000'000;
};

OdeBasis integrate_basis(const Coefficient& coeff, const PathSpec& path, Jet1 init1, Jet1 init2,
                         const OdeOptions& opts = {});

/// Same integration, returning the basis at each path fraction in `fractions`
/// (ascending, within [0, 1]).
std::vector<OdeBasis> trace_basis(const Coefficient& coeff, const PathSpec& path, Jet1 init1,
                                  Jet1 init2, std::span<const double> fractions,
                                  const OdeOptions& opts = {});

/// 2-jet of y2/y1, assuming unit Wronskian.
Jet2 jet_of_quotient(const OdeBasis& basis);

/// A unit-Wronskian basis whose quotient has the given 2-jet (target.d1 != 0).
OdeBasis basis_from_jet(const Jet2& target);

/// Chain rule for 2-jets: outer is the jet of g at f(z0), inner the jet of f at z0.
Jet2 compose_jet2(const Jet2& outer, const Jet2& inner);

Jet2 mobius_jet(const MobiusMap& map, cplx z0);

}  // namespace gearmap
