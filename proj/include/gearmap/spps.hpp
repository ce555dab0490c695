#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "gearmap/geartools.hpp"
#include "gearmap/ode.hpp"

namespace gearmap {

struct SppsOptions {
  std::size_t order = 50;
  std::size_t max_order = 400;
  /// Uniform radial grid intervals.
  std::size_t grid = 4000;
  /// Relative size allowed for the last series term.
  double tail_tol = 1e-14;
  /// Largest |lambda - lambda_inf| the table must cover.
  double radius = 0.25;
  /// Allowed relative endpoint error estimated from the half grid.
  double quad_tol = 1e-9;
  OdeOptions ode{};
};

/// Iterated integrals along the ray r -> u r, 0 <= r <= 1, for y'' + psi0 y = lambda psi1 y.
struct SppsTable {
  cplx direction{1.0, 0.0};
  double lambda_inf = 0.0;
  double radius = 0.25;
  std::size_t order = 0;
  double quadrature_error = 0.0;
  /// Seed solution at lambda_inf (ray coordinates) on the grid r_j = j / grid.
  std::vector<cplx> y_inf;
  std::vector<cplx> dy_inf;
  /// X[n], Xt[n] for n = 0 .. 2 order + 1.
  std::vector<std::vector<cplx>> X;
  std::vector<std::vector<cplx>> Xt;

  std::size_t grid() const { return y_inf.size() - 1; }
  double r(std::size_t j) const { return static_cast<double>(j) / static_cast<double>(grid()); }
};

/// Table from grid samples of a seed solution and of the ray coefficient psi1 (ray
/// coordinates). The seed must satisfy y(0) = 1, y'(0) = 0 for eval_solutions to return the
/// canonical basis.
SppsTable build_spps_from_samples(cplx direction, double lambda_inf, std::vector<cplx> y_inf,
                                  std::vector<cplx> dy_inf, const std::vector<cplx>& psi1,
                                  const SppsOptions& opts = {});

/// Table for R_{t,lambda} on the ray to `direction`, seeded by integrating at lambda_inf.
SppsTable build_spps(double t, double lambda_inf, cplx direction, const SppsOptions& opts = {});

/// Ray-coordinate basis (Y1(0) = 1, Y1'(0) = 0, Y2(0) = 0, Y2'(0) = 1) at grid index j.
OdeBasis eval_ray(const SppsTable& table, double lambda, std::size_t j);

/// Basis in z at the ray endpoint z = direction, with y1 = (1, 0), y2 = (0, 1) at z = 0.
OdeBasis eval_solutions(const SppsTable& table, double lambda);

/// Midpoint of (lambda_t^-, lambda_t^+).
double seed_lambda(double t);

/// Gear quantities of the symmetric family at fixed t as functions of lambda.
class LambdaFunctional {
 public:
  explicit LambdaFunctional(double t, const SppsOptions& opts = {});

  double t() const { return t_; }
  double lower() const { return lo_; }
  double upper() const { return hi_; }

  EndpointJets jets(double lambda) const;
  double kappa(double lambda) const;
  GearParams params(double lambda) const;
  double beta(double lambda) const { return params(lambda).beta; }
  double gamma(double lambda) const { return params(lambda).gamma; }
  /// Signed distance between the centers of the arcs through f(1) and f(-1).
  double centers_gap(double lambda) const;

  const SppsTable& table(int ray) const { return tables_.at(static_cast<std::size_t>(ray)); }

 private:
  double t_;
  double lo_;
  double hi_;
  /// Rays to -1, 1, i.
  std::array<SppsTable, 3> tables_;
};

/// Largest lambda in (lambda_t^-, lambda_t^+) with kappa(lambda) = target.
double solve_kappa(const LambdaFunctional& fn, double target, double tol = 1e-12);
double solve_kappa(double t, double target, double tol = 1e-12);
double solve_kappa_zero(double t);

}  // namespace gearmap
