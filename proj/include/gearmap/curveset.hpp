#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gearmap/geartools.hpp"
#include "gearmap/ode.hpp"
#include "gearmap/spps.hpp"

namespace gearmap {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kToolVersion = "1.0.0";

enum class CurveRole { BoundaryEdge, LevelCurve, MeshLine };

std::string_view role_name(CurveRole role);
CurveRole role_from_name(std::string_view name);

struct Curve {
  std::string label;
  CurveRole role = CurveRole::BoundaryEdge;
  std::vector<std::array<double, 2>> points;
};

enum class OutputFormat { Json, Csv, Svg };

OutputFormat format_from_name(std::string_view name);

/// Labelled polylines with metadata, kept sorted by role then label.
class CurveSet {
 public:
  nlohmann::json meta = nlohmann::json::object();

  /// Throws InvalidArgument for non-finite coordinates.
  void add(std::string label, CurveRole role, const std::vector<cplx>& points);
  void add(const std::vector<BoundaryEdge>& edges, CurveRole role, const std::string& prefix = "");

  const std::vector<Curve>& curves() const { return curves_; }
  const Curve& curve(const std::string& label) const;

  nlohmann::json to_json() const;
  static CurveSet from_json(const nlohmann::json& j);
  std::string dump() const;
  /// Two columns x,y with a header line.
  static std::string csv(const Curve& c);
  std::string svg(double width = 800.0) const;

  /// JSON or SVG to `path`; CSV writes one `<stem>-<label>.csv` file per curve next to `path`.
  /// Returns the files written.
  std::vector<std::string> write(const std::string& path, OutputFormat format) const;

 private:
  std::vector<Curve> curves_;
};

/// Tolerances, grid sizes and output selection shared by all subcommands.
struct RunConfig {
  double ode_tol = 1e-10;
  double spps_tail_tol = 1e-14;
  double root_tol = 1e-10;
  int grid_w = 17;
  int grid_h = 9;
  int samples = 128;
  std::size_t spps_order = 50;
  std::string format = "json";

  /// Throws InvalidArgument when a tolerance or size is not positive.
  void validate() const;
  OdeOptions ode() const;
  SppsOptions spps() const;
  nlohmann::json to_json() const;
};

/// "WxH" with positive integers.
std::pair<int, int> parse_grid(std::string_view text);

/// Real number with an optional multiplier suffix "pi" or "π" ("0.5pi", "π" = pi).
double parse_real(std::string_view text);

}  // namespace gearmap
