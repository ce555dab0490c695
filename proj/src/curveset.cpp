#include "gearmap/curveset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>

#include "gearmap/error.hpp"

namespace gearmap {

namespace {

constexpr std::array<std::string_view, 3> kRoleNames{"boundary-edge", "level-curve", "mesh-line"};
constexpr std::array<std::string_view, 3> kFormatNames{"json", "csv", "svg"};

std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string safe_name(const std::string& label) {
  std::string out = label;
  for (char& c : out) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

std::string_view role_name(CurveRole role) { return kRoleNames[static_cast<std::size_t>(role)]; }

CurveRole role_from_name(std::string_view name) {
  for (std::size_t k = 0; k < kRoleNames.size(); ++k) {
    if (kRoleNames[k] == name) return static_cast<CurveRole>(k);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown curve role '" + std::string(name) + "'");
}

OutputFormat format_from_name(std::string_view name) {
  for (std::size_t k = 0; k < kFormatNames.size(); ++k) {
    if (kFormatNames[k] == name) return static_cast<OutputFormat>(k);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown format '" + std::string(name) + "'");
}

void CurveSet::add(std::string label, CurveRole role, const std::vector<cplx>& points) {
  Curve c{std::move(label), role, {}};
  c.points.reserve(points.size());
  for (const cplx& p : points) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
      throw Error(ErrorCode::InvalidArgument, "non-finite point in curve '" + c.label + "'");
    }
    c.points.push_back({p.real(), p.imag()});
  }
  const auto less = [](const Curve& a, const Curve& b) {
    return std::tie(a.role, a.label) < std::tie(b.role, b.label);
  };
  curves_.insert(std::upper_bound(curves_.begin(), curves_.end(), c, less), std::move(c));
}

void CurveSet::add(const std::vector<BoundaryEdge>& edges, CurveRole role, const std::string& prefix) {
  for (const BoundaryEdge& e : edges) add(prefix + e.label, role, e.points);
}

const Curve& CurveSet::curve(const std::string& label) const {
  for (const Curve& c : curves_) {
    if (c.label == label) return c;
  }
  throw Error(ErrorCode::InvalidArgument, "no curve '" + label + "'");
}

nlohmann::json CurveSet::to_json() const {
  nlohmann::json j;
  j["meta"] = meta;
  j["meta"]["schema_version"] = kSchemaVersion;
  j["meta"]["tool_version"] = kToolVersion;
  j["curves"] = nlohmann::json::array();
  for (const Curve& c : curves_) {
    j["curves"].push_back({{"label", c.label}, {"role", role_name(c.role)}, {"points", c.points}});
  }
  return j;
}

CurveSet CurveSet::from_json(const nlohmann::json& j) {
  if (j.at("meta").at("schema_version").get<int>() != kSchemaVersion) {
    throw Error(ErrorCode::InvalidArgument, "unsupported schema version");
  }
  CurveSet s;
  s.meta = j.at("meta");
  for (const auto& c : j.at("curves")) {
    std::vector<cplx> pts;
    for (const auto& p : c.at("points")) pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    s.add(c.at("label").get<std::string>(), role_from_name(c.at("role").get<std::string>()), pts);
  }
  return s;
}

std::string CurveSet::dump() const { return to_json().dump(1) + "\n"; }

std::string CurveSet::csv(const Curve& c) {
  std::string out = "x,y\n";
  for (const auto& p : c.points) out += fmt(p[0]) + "," + fmt(p[1]) + "\n";
  return out;
}

std::string CurveSet::svg(double width) const {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  for (const Curve& c : curves_) {
    for (const auto& p : c.points) {
      x0 = std::min(x0, p[0]);
      x1 = std::max(x1, p[0]);
      y0 = std::min(y0, p[1]);
      y1 = std::max(y1, p[1]);
    }
  }
  if (!(x1 >= x0)) x0 = y0 = -1.0, x1 = y1 = 1.0;
  const double span = std::max({x1 - x0, y1 - y0, 1e-300});
  const double pad = 0.02 * span;
  const double stroke = 0.002 * span;
  const double vw = x1 - x0 + 2.0 * pad;
  const double vh = y1 - y0 + 2.0 * pad;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
    << fmt(width * vh / vw) << "\" viewBox=\"" << fmt(x0 - pad) << " " << fmt(-y1 - pad) << " " << fmt(vw) << " "
    << fmt(vh) << "\">\n";
  for (const Curve& c : curves_) {
    const char* colour = c.role == CurveRole::BoundaryEdge ? "black" : c.role == CurveRole::LevelCurve ? "#1f5fa8" : "#999999";
    s << "<polyline id=\"" << safe_name(c.label) << "\" class=\"" << role_name(c.role)
      << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"" << fmt(stroke) << "\" points=\"";
    for (std::size_t k = 0; k < c.points.size(); ++k) {
      if (k) s << ' ';
      s << fmt(c.points[k][0]) << ',' << fmt(-c.points[k][1]);
    }
    s << "\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::vector<std::string> CurveSet::write(const std::string& path, OutputFormat format) const {
  const std::filesystem::path p(path);
  std::vector<std::string> written;
  switch (format) {
    case OutputFormat::Json:
      write_file(p, dump());
      written.push_back(p.string());
      break;
    case OutputFormat::Svg:
      write_file(p, svg());
      written.push_back(p.string());
      break;
    case OutputFormat::Csv:
      for (const Curve& c : curves_) {
        const std::filesystem::path f = p.parent_path() / (p.stem().string() + "-" + safe_name(c.label) + ".csv");
        write_file(f, csv(c));
        written.push_back(f.string());
      }
      break;
  }
  return written;
}

void RunConfig::validate() const {
  if (!(ode_tol > 0.0 && spps_tail_tol > 0.0 && root_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
  }
  if (grid_w < 2 || grid_h < 2 || samples < 2 || spps_order < 1) {
    throw Error(ErrorCode::InvalidArgument, "grid sizes, samples and SPPS order must be positive");
  }
  format_from_name(format);
}

OdeOptions RunConfig::ode() const {
  OdeOptions o;
  o.tol = ode_tol;
  o.wronskian_budget = std::max(1e-9, 10.0 * ode_tol);
  return o;
}

SppsOptions RunConfig::spps() const {
  SppsOptions o;
  o.order = spps_order;
  o.max_order = std::max(o.max_order, spps_order);
  o.tail_tol = spps_tail_tol;
  o.ode = ode();
  return o;
}

nlohmann::json RunConfig::to_json() const {
  return {{"ode_tol", ode_tol},       {"spps_tail_tol", spps_tail_tol}, {"root_tol", root_tol},
          {"grid", {grid_w, grid_h}}, {"samples", samples},             {"spps_order", spps_order},
          {"format", format}};
}

std::pair<int, int> parse_grid(std::string_view text) {
  const auto x = text.find('x');
  int w = 0, h = 0;
  if (x != std::string_view::npos) {
    const auto a = std::from_chars(text.data(), text.data() + x, w);
    const auto b = std::from_chars(text.data() + x + 1, text.data() + text.size(), h);
    if (a.ec == std::errc() && a.ptr == text.data() + x && b.ec == std::errc() &&
        b.ptr == text.data() + text.size() && w >= 2 && h >= 2) {
      return {w, h};
    }
  }
  throw Error(ErrorCode::InvalidArgument, "grid must look like WxH with W, H >= 2");
}

double parse_real(std::string_view text) {
  double factor = 1.0;
  for (std::string_view suffix : {std::string_view("pi"), std::string_view("π")}) {
    if (text.size() >= suffix.size() && text.substr(text.size() - suffix.size()) == suffix) {
      text.remove_suffix(suffix.size());
      factor = std::numbers::pi;
      break;
    }
  }
  if (!text.empty() && text.back() == '*') text.remove_suffix(1);
  if (factor != 1.0 && (text.empty() || text == "+" || text == "-")) {
    return text == "-" ? -factor : factor;
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidArgument, "not a number: '" + std::string(text) + "'");
  }
  return v * factor;
}

}  // namespace gearmap
