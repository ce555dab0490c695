#include "gearmap/spps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "gearmap/error.hpp"
#include "gearmap/schwarzian.hpp"
#include "gearmap/solver.hpp"

namespace gearmap {

namespace {

/// Cumulative integral of samples f on a uniform grid of step h, exact for cubics.
std::vector<cplx> cumulative(const std::vector<cplx>& f, double h) {
  const std::size_t m = f.size() - 1;
  std::vector<cplx> out(f.size());
  out[0] = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    cplx piece;
    if (m < 3) {
      piece = 0.5 * (f[j] + f[j + 1]);
    } else if (j == 0) {
      piece = (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) / 24.0;
    } else if (j + 1 == m) {
      piece = (f[m - 3] - 5.0 * f[m - 2] + 19.0 * f[m - 1] + 9.0 * f[m]) / 24.0;
    } else {
      piece = (-f[j - 1] + 13.0 * f[j] + 13.0 * f[j + 1] - f[j + 2]) / 24.0;
    }
    out[j + 1] = out[j] + h * piece;
  }
  return out;
}

std::vector<cplx> product(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<cplx> out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
  return out;
}

double sup(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& x : v) s = std::max(s, std::abs(x));
  return s;
}

/// Extend both integral sequences to index 2 order + 1. X uses (q0, q1, q0, ...), Xt (q1, q0, ...).
void extend(SppsTable& tab, const std::vector<cplx>& q0, const std::vector<cplx>& q1,
            std::size_t order) {
  const double h = 1.0 / static_cast<double>(tab.grid());
  while (tab.X.size() < 2 * order + 2) {
    const std::size_t n = tab.X.size();
    const bool odd = n % 2 == 1;
    tab.X.push_back(cumulative(product(tab.X[n - 1], odd ? q0 : q1), h));
    tab.Xt.push_back(cumulative(product(tab.Xt[n - 1], odd ? q1 : q0), h));
  }
  tab.order = order;
}

bool tail_ok(const SppsTable& tab, double tol) {
  double peak = 0.0;
  double last = 0.0;
  double scale = 1.0;
  for (std::size_t k = 0; k <= tab.order; ++k) {
    const double term = scale * std::max(sup(tab.Xt[2 * k]), sup(tab.X[2 * k + 1]));
    peak = std::max(peak, term);
    last = term;
    scale *= tab.radius;
  }
  return std::isfinite(peak) && last <= tol * peak;
}

SppsTable raw_table(cplx direction, double lambda_inf, std::vector<cplx> y, std::vector<cplx> dy,
                    const std::vector<cplx>& q0, const std::vector<cplx>& q1, double radius,
                    std::size_t order) {
  SppsTable tab;
  tab.direction = direction;
  tab.lambda_inf = lambda_inf;
  tab.radius = radius;
  tab.y_inf = std::move(y);
  tab.dy_inf = std::move(dy);
  tab.X.push_back(std::vector<cplx>(tab.y_inf.size(), 1.0));
  tab.Xt.push_back(std::vector<cplx>(tab.y_inf.size(), 1.0));
  extend(tab, q0, q1, order);
  return tab;
}

std::vector<cplx> every_other(const std::vector<cplx>& v) {
  std::vector<cplx> out;
  for (std::size_t j = 0; j < v.size(); j += 2) out.push_back(v[j]);
  return out;
}

/// Endpoint discrepancy against the half grid, scaled for a fourth-order rule.
double quadrature_error(const SppsTable& fine, const SppsTable& coarse) {
  double err = 0.0;
  for (double off : {-fine.radius, 0.0, fine.radius}) {
    const OdeBasis a = eval_ray(fine, fine.lambda_inf + off, fine.grid());
    const OdeBasis b = eval_ray(coarse, fine.lambda_inf + off, coarse.grid());
    const double scale = std::max({1.0, std::abs(a.y1.value), std::abs(a.y1.deriv),
                                   std::abs(a.y2.value), std::abs(a.y2.deriv)});
    const double d = std::max({std::abs(a.y1.value - b.y1.value), std::abs(a.y1.deriv - b.y1.deriv),
                               std::abs(a.y2.value - b.y2.value), std::abs(a.y2.deriv - b.y2.deriv)});
    err = std::max(err, d / (15.0 * scale));
  }
  return err;
}

}  // namespace

SppsTable build_spps_from_samples(cplx direction, double lambda_inf, std::vector<cplx> y_inf,
                                  std::vector<cplx> dy_inf, const std::vector<cplx>& psi1,
                                  const SppsOptions& opts) {
  if (y_inf.size() < 2 || dy_inf.size() != y_inf.size() || psi1.size() != y_inf.size()) {
    throw Error(ErrorCode::InvalidArgument, "seed samples must share one grid of at least 2 points");
  }
  if (opts.order == 0 || opts.max_order < opts.order) {
    throw Error(ErrorCode::InvalidArgument, "invalid series order");
  }
  const double ymax = sup(y_inf);
  for (const cplx& y : y_inf) {
    if (!(std::abs(y) > 1e-8 * ymax)) throw Error(ErrorCode::SeedVanishes, "seed solution vanishes on the ray");
  }
  std::vector<cplx> q0(y_inf.size());
  std::vector<cplx> q1(y_inf.size());
  for (std::size_t j = 0; j < y_inf.size(); ++j) {
    q0[j] = 1.0 / (y_inf[j] * y_inf[j]);
    q1[j] = psi1[j] * y_inf[j] * y_inf[j];
  }
  const bool halvable = y_inf.size() >= 7 && (y_inf.size() - 1) % 2 == 0;
  std::vector<cplx> yc, dyc;
  if (halvable) {
    yc = every_other(y_inf);
    dyc = every_other(dy_inf);
  }
  std::size_t order = opts.order;
  SppsTable tab = raw_table(direction, lambda_inf, std::move(y_inf), std::move(dy_inf), q0, q1,
                            opts.radius, order);
  while (!tail_ok(tab, opts.tail_tol)) {
    if (order >= opts.max_order) {
      throw Error(ErrorCode::TailTooLarge,
                  "series tail above tolerance at order " + std::to_string(order));
    }
    order = std::min(2 * order, opts.max_order);
    extend(tab, q0, q1, order);
  }
  if (halvable) {
    const SppsTable coarse = raw_table(direction, lambda_inf, std::move(yc), std::move(dyc),
                                       every_other(q0), every_other(q1), opts.radius, order);
    tab.quadrature_error = quadrature_error(tab, coarse);
    if (!(tab.quadrature_error <= opts.quad_tol)) {
      char msg[96];
      std::snprintf(msg, sizeof msg, "quadrature error estimate %.2e above tolerance", tab.quadrature_error);
      throw Error(ErrorCode::TailTooLarge, msg);
    }
  }
  return tab;
}

SppsTable build_spps(double t, double lambda_inf, cplx direction, const SppsOptions& opts) {
  if (!(t > 0.0 && t < 0.5 * M_PI)) throw Error(ErrorCode::InvalidArgument, "t must lie in (0, pi/2)");
  if (opts.grid < 3) throw Error(ErrorCode::InvalidArgument, "grid needs at least 3 intervals");
  const std::size_t m = opts.grid;
  std::vector<double> fractions(m + 1);
  for (std::size_t j = 0; j <= m; ++j) fractions[j] = static_cast<double>(j) / static_cast<double>(m);
  const Schwarzian s = disk_schwarzian({t, lambda_inf});
  const auto bases = trace_basis(s, {0.0, direction}, {1.0, 0.0}, {0.0, 1.0}, fractions, opts.ode);
  std::vector<cplx> y(m + 1), dy(m + 1), p1(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    y[j] = bases[j].y1.value;
    dy[j] = direction * bases[j].y1.deriv;
    p1[j] = direction * direction * psi1(t, fractions[j] * direction);
  }
  return build_spps_from_samples(direction, lambda_inf, std::move(y), std::move(dy), p1, opts);
}

OdeBasis eval_ray(const SppsTable& tab, double lambda, std::size_t j) {
  const double off = lambda - tab.lambda_inf;
  if (std::abs(off) > tab.radius * (1.0 + 1e-12)) {
    throw Error(ErrorCode::TailTooLarge, "lambda outside the validated series range");
  }
  if (j >= tab.y_inf.size()) throw Error(ErrorCode::InvalidArgument, "grid index out of range");
  const std::size_t n = tab.order;
  cplx s1 = tab.Xt[2 * n][j];
  cplx s2 = tab.X[2 * n + 1][j];
  cplx s1d = tab.Xt[2 * n - 1][j];
  cplx s2d = tab.X[2 * n][j];
  for (std::size_t k = n; k-- > 0;) {
    s1 = s1 * off + tab.Xt[2 * k][j];
    s2 = s2 * off + tab.X[2 * k + 1][j];
    s2d = s2d * off + tab.X[2 * k][j];
    if (k >= 1) s1d = s1d * off + tab.Xt[2 * k - 1][j];
  }
  s1d *= off;
  const cplx y = tab.y_inf[j];
  const cplx dy = tab.dy_inf[j];
  const cplx q0 = 1.0 / (y * y);
  return {{y * s1, dy * s1 + y * q0 * s1d}, {y * s2, dy * s2 + y * q0 * s2d}};
}

OdeBasis eval_solutions(const SppsTable& tab, double lambda) {
  const OdeBasis b = eval_ray(tab, lambda, tab.grid());
  const cplx u = tab.direction;
  return {{b.y1.value, b.y1.deriv / u}, {u * b.y2.value, b.y2.deriv}};
}

double seed_lambda(double t) {
  const auto [lo, hi] = lambda_bounds(t);
  return 0.5 * (lo + hi);
}

LambdaFunctional::LambdaFunctional(double t, const SppsOptions& opts) : t_(t) {
  std::tie(lo_, hi_) = lambda_bounds(t);
  const double seed = 0.5 * (lo_ + hi_);
  tables_ = {build_spps(t, seed, -1.0, opts), build_spps(t, seed, 1.0, opts),
             build_spps(t, seed, cplx(0.0, 1.0), opts)};
}

EndpointJets LambdaFunctional::jets(double lambda) const {
  return {jet_of_quotient(eval_solutions(tables_[0], lambda)),
          jet_of_quotient(eval_solutions(tables_[1], lambda)),
          jet_of_quotient(eval_solutions(tables_[2], lambda)), cplx(0.0, 1.0)};
}

double LambdaFunctional::kappa(double lambda) const {
  return curvature_at(jet_of_quotient(eval_solutions(tables_[2], lambda)), cplx(0.0, 1.0));
}

GearParams LambdaFunctional::params(double lambda) const {
  return gear_normalize(analyze_pregear(jets(lambda))).params;
}

double LambdaFunctional::centers_gap(double lambda) const {
  const Jet2 a = jet_of_quotient(eval_solutions(tables_[1], lambda));
  const Jet2 b = jet_of_quotient(eval_solutions(tables_[0], lambda));
  return (curvature_center(a, 1.0) - curvature_center(b, -1.0)).real();
}

double solve_kappa(const LambdaFunctional& fn, double target, double tol) {
  const int samples = 256;
  const double margin = 1e-9;
  const double lo = fn.lower() + margin;
  const double hi = fn.upper() - margin;
  auto g = [&](double l) { return fn.kappa(l) - target; };
  double b = hi;
  double gb = g(b);
  for (int i = 1; i <= samples; ++i) {
    const double a = hi - (hi - lo) * i / samples;
    const double ga = g(a);
    if (gb == 0.0) return b;
    if ((ga < 0.0) != (gb < 0.0)) {
      double x0 = a, x1 = b, g0 = ga;
      while (x1 - x0 > tol) {
        const double mid = 0.5 * (x0 + x1);
        const double gm = g(mid);
        if ((gm < 0.0) == (g0 < 0.0)) {
          x0 = mid;
          g0 = gm;
        } else {
          x1 = mid;
        }
      }
      return 0.5 * (x0 + x1);
    }
    b = a;
    gb = ga;
  }
  throw Error(ErrorCode::NoRoot, "curvature does not reach the target inside the region");
}

double solve_kappa(double t, double target, double tol) {
  return solve_kappa(LambdaFunctional(t), target, tol);
}

double solve_kappa_zero(double t) { return solve_kappa(t, 0.0); }

}  // namespace gearmap
