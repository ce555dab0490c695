#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gearmap/geartools.hpp"
#include "gearmap/schwarzian.hpp"

namespace gearmap {

/// (lambda_t^-, lambda_t^+) bounding the region of gearlikeness at t.
std::pair<double, double> lambda_bounds(double t);

/// Lambda at which the gamma level curve meets t = 0.
double limit_lambda(double gamma);

bool in_region(const MapParams& p);

GearParams forward(const MapParams& p, const OdeOptions& opts = {});

struct InvertOptions {
  double guard = 1e-4;
  double fd_step = 1e-5;
  double residual_tol = 1e-9;
  int max_iterations = 100;
  int restart_grid = 6;
  int max_clamps = 3;
  OdeOptions ode{};
  /// Called with every (t, lambda) at which the forward map is evaluated.
  std::function<void(const MapParams&)> on_evaluate;
};

struct InvertResult {
  MapParams params;
  GearParams achieved;
  int iterations = 0;
  int evaluations = 0;
  bool restarted = false;
};

InvertResult invert(const GearParams& target, std::optional<MapParams> guess = std::nullopt,
                    const InvertOptions& opts = {});

enum class LevelKind { Beta, Gamma };

struct LevelCurve {
  LevelKind kind = LevelKind::Beta;
  double value = 0.0;
  std::string label;
  /// Points (t, lambda); each t of the grid contributes every root found.
  std::vector<MapParams> points;
  /// Grid t values where no root was found.
  std::vector<double> gaps;
};

struct LevelOptions {
  /// Lambda samples per t used to bracket roots.
  int lambda_samples = 48;
  double root_tol = 1e-10;
  double guard = 1e-4;
  OdeOptions ode{};
};

std::vector<LevelCurve> level_curves(LevelKind kind, const std::vector<double>& values,
                                     const std::vector<double>& t_grid, const LevelOptions& opts = {});

}  // namespace gearmap
