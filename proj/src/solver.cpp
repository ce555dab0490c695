#include "gearmap/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "gearmap/error.hpp"

namespace gearmap {

std::pair<double, double> lambda_bounds(double t) {
  if (!(t > 0.0 && t < 0.5 * M_PI)) throw Error(ErrorCode::InvalidArgument, "t must lie in (0, pi/2)");
  const double c = std::cos(t);
  const double shift = (c + 1.0 / c) / 16.0;
  return {-0.25 - shift, 0.25 - shift};
}

double limit_lambda(double gamma) {
  const double g = 2.0 * gamma / M_PI;
  return 0.125 * (1.0 - g * g);
}

bool in_region(const MapParams& p) {
  if (!(p.t > 0.0 && p.t < 0.5 * M_PI)) return false;
  const auto [lo, hi] = lambda_bounds(p.t);
  return p.lambda > lo && p.lambda < hi;
}

GearParams forward(const MapParams& p, const OdeOptions& opts) {
  if (!in_region(p)) throw Error(ErrorCode::LeftRegion, "(t, lambda) outside the region of gearlikeness");
  return gear_normalize(analyze_pregear(endpoint_jets(symmetric_disk_map(p, opts)))).params;
}

namespace {

using Vec = std::array<double, 2>;
using Mat = std::array<std::array<double, 2>, 2>;

double norm(const Vec& v) { return std::hypot(v[0], v[1]); }

class Inverter {
 public:
  Inverter(const GearParams& target, const InvertOptions& opts) : target_(target), opts_(opts) {}

  /// Clamp into the guarded box; returns true when the point moved.
  bool clamp(Vec& x) const {
    const double d = opts_.guard;
    const Vec before = x;
    x[0] = std::clamp(x[0], d, 0.5 * M_PI - d);
    const auto [lo, hi] = lambda_bounds(x[0]);
    x[1] = std::clamp(x[1], lo + d, hi - d);
    return x != before;
  }

  std::optional<Vec> residual(const Vec& x) {
    const MapParams p{x[0], x[1]};
    if (opts_.on_evaluate) opts_.on_evaluate(p);
    ++evaluations_;
    try {
      const GearParams g = forward(p, opts_.ode);
      const Vec r{g.beta / target_.beta - 1.0, g.gamma - target_.gamma};
      if (!std::isfinite(r[0]) || !std::isfinite(r[1])) return std::nullopt;
      last_ = g;
      return r;
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  std::optional<Mat> jacobian(const Vec& x, const Vec& fx) {
    Mat j{};
    for (int k = 0; k < 2; ++k) {
      Vec xs = x;
      double h = opts_.fd_step;
      xs[k] += h;
      if (clamp(xs)) {
        xs = x;
        h = -h;
        xs[k] += h;
      }
      const auto fs = residual(xs);
      if (!fs) return std::nullopt;
      for (int i = 0; i < 2; ++i) j[i][k] = ((*fs)[i] - fx[i]) / h;
    }
    return j;
  }

  int evaluations() const { return evaluations_; }
  const GearParams& last() const { return last_; }

 private:
  GearParams target_;
  const InvertOptions& opts_;
  int evaluations_ = 0;
  GearParams last_{};
};

std::optional<Vec> solve2(const Mat& j, const Vec& f) {
  const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
  if (!std::isfinite(det) || std::abs(det) < 1e-300) return std::nullopt;
  return Vec{(-f[0] * j[1][1] + f[1] * j[0][1]) / det, (-j[0][0] * f[1] + j[1][0] * f[0]) / det};
}

}  // namespace

InvertResult invert(const GearParams& target, std::optional<MapParams> guess, const InvertOptions& opts) {
  if (!(target.beta > 1.0) || !(target.gamma > 0.0 && target.gamma < M_PI)) {
    throw Error(ErrorCode::InvalidArgument, "target needs beta > 1 and 0 < gamma < pi");
  }
  Inverter inv(target, opts);
  const MapParams start = guess.value_or(MapParams{0.25 * M_PI, 0.0});
  Vec x{start.t, start.lambda};
  inv.clamp(x);
  auto fx = inv.residual(x);
  if (!fx) throw Error(ErrorCode::NotAPregear, "forward map fails at the initial guess");

  bool restarted = false;
  int clamps = 0;
  std::optional<Mat> jac = inv.jacobian(x, *fx);
  int iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    if (norm(*fx) < opts.residual_tol) {
      return {{x[0], x[1]}, inv.last(), iter, inv.evaluations(), restarted};
    }
    if (!jac) jac = inv.jacobian(x, *fx);
    std::optional<Vec> step = jac ? solve2(*jac, *fx) : std::nullopt;
    bool accepted = false;
    bool clamped = false;
    if (step) {
      double scale = 1.0;
      for (int tries = 0; tries < 30 && !accepted; ++tries, scale *= 0.5) {
        Vec xn{x[0] + scale * (*step)[0], x[1] + scale * (*step)[1]};
        clamped = inv.clamp(xn);
        const auto fn = inv.residual(xn);
        if (!fn) continue;
        if (norm(*fn) >= norm(*fx) * (1.0 - 1e-4 * scale) && norm(*fn) >= opts.residual_tol) continue;
        const Vec dx{xn[0] - x[0], xn[1] - x[1]};
        const Vec df{(*fn)[0] - (*fx)[0], (*fn)[1] - (*fx)[1]};
        const double dd = dx[0] * dx[0] + dx[1] * dx[1];
        if (dd > 0.0) {
          for (int i = 0; i < 2; ++i) {
            const double u = df[i] - ((*jac)[i][0] * dx[0] + (*jac)[i][1] * dx[1]);
            for (int k = 0; k < 2; ++k) (*jac)[i][k] += u * dx[k] / dd;
          }
        }
        x = xn;
        fx = fn;
        accepted = true;
      }
    }
    if (accepted && !clamped) continue;
    if (accepted && clamped && ++clamps <= opts.max_clamps) continue;
    if (!accepted) {
      auto fresh = inv.jacobian(x, *fx);
      if (fresh && (!jac || *fresh != *jac)) {
        jac = fresh;
        if (++clamps <= opts.max_clamps) continue;
      }
    }
    if (restarted) {
      throw Error(ErrorCode::LeftRegion, "iterates keep leaving the region of gearlikeness");
    }
    restarted = true;
    clamps = 0;
    const int n = opts.restart_grid;
    double best = std::numeric_limits<double>::infinity();
    Vec bx = x;
    std::optional<Vec> bf;
    for (int i = 1; i <= n; ++i) {
      const double t = 0.5 * M_PI * i / (n + 1);
      const auto [lo, hi] = lambda_bounds(t);
      for (int k = 1; k <= n; ++k) {
        Vec g{t, lo + (hi - lo) * k / (n + 1)};
        const auto fg = inv.residual(g);
        if (fg && norm(*fg) < best) {
          best = norm(*fg);
          bx = g;
          bf = fg;
        }
      }
    }
    if (!bf) throw Error(ErrorCode::LeftRegion, "no grid point yields a gear");
    x = bx;
    fx = bf;
    jac = inv.jacobian(x, *fx);
  }
  if (norm(*fx) < opts.residual_tol) return {{x[0], x[1]}, inv.last(), iter, inv.evaluations(), restarted};
  throw Error(ErrorCode::MaxIterations, "Broyden iteration did not converge");
}

std::vector<LevelCurve> level_curves(LevelKind kind, const std::vector<double>& values,
                                     const std::vector<double>& t_grid, const LevelOptions& opts) {
  std::vector<LevelCurve> out;
  for (double v : values) {
    LevelCurve c;
    c.kind = kind;
    c.value = v;
    std::ostringstream label;
    label.precision(6);
    label << (kind == LevelKind::Beta ? "log-beta=" : "gamma=") << v;
    c.label = label.str();
    out.push_back(std::move(c));
  }
  for (double t : t_grid) {
    const auto [lo0, hi0] = lambda_bounds(t);
    const double lo = lo0 + opts.guard;
    const double hi = hi0 - opts.guard;
    const int n = std::max(opts.lambda_samples, 2);
    std::vector<double> ls(n + 1);
    std::vector<std::optional<GearParams>> gs(n + 1);
    auto eval = [&](double l) -> std::optional<GearParams> {
      try {
        return forward({t, l}, opts.ode);
      } catch (const Error&) {
        return std::nullopt;
      }
    };
    for (int i = 0; i <= n; ++i) {
      ls[i] = lo + (hi - lo) * i / n;
      gs[i] = eval(ls[i]);
    }
    for (LevelCurve& c : out) {
      auto g = [&](const GearParams& p) {
        return kind == LevelKind::Beta ? std::log(p.beta) - c.value : p.gamma - c.value;
      };
      bool found = false;
      for (int i = 0; i < n; ++i) {
        if (!gs[i] || !gs[i + 1]) continue;
        double a = ls[i], b = ls[i + 1];
        double ga = g(*gs[i]), gb = g(*gs[i + 1]);
        if (ga == 0.0) {
          c.points.push_back({t, a});
          found = true;
          continue;
        }
        if ((ga < 0.0) == (gb < 0.0)) continue;
        bool ok = true;
        // Illinois false position.
        int side = 0;
        for (int it = 0; it < 200 && b - a > opts.root_tol; ++it) {
          const double m = (a * gb - b * ga) / (gb - ga);
          const auto pm = eval(m);
          if (!pm) {
            ok = false;
            break;
          }
          const double gm = g(*pm);
          if (gm == 0.0) {
            a = b = m;
            break;
          }
          if ((gm < 0.0) == (ga < 0.0)) {
            a = m;
            ga = gm;
            if (side == -1) gb *= 0.5;
            side = -1;
          } else {
            b = m;
            gb = gm;
            if (side == 1) ga *= 0.5;
            side = 1;
          }
        }
        if (ok) {
          c.points.push_back({t, 0.5 * (a + b)});
          found = true;
        }
      }
      if (!found) c.gaps.push_back(t);
    }
  }
  return out;
}

}  // namespace gearmap
