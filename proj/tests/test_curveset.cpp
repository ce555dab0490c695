#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "gearmap/curveset.hpp"
#include "gearmap/error.hpp"

using namespace gearmap;

namespace {

std::vector<cplx> random_curve(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 3.0);
  std::vector<cplx> out;
  for (int k = 0; k < n; ++k) out.emplace_back(g(rng), g(rng));
  return out;
}

}  // namespace

TEST_CASE("curves stay sorted by role then label") {
  CurveSet s;
  s.add("b", CurveRole::MeshLine, {0.0, 1.0});
  s.add("z", CurveRole::BoundaryEdge, {0.0, 1.0});
  s.add("a", CurveRole::MeshLine, {0.0, 1.0});
  s.add("c", CurveRole::LevelCurve, {0.0, 1.0});
  std::vector<std::string> labels;
  for (const Curve& c : s.curves()) labels.push_back(c.label);
  CHECK(labels == std::vector<std::string>{"z", "c", "a", "b"});
  CHECK(s.curve("c").role == CurveRole::LevelCurve);
  CHECK_THROWS_AS(s.curve("missing"), Error);
}

TEST_CASE("non-finite points are rejected") {
  CurveSet s;
  CHECK_THROWS_AS(s.add("x", CurveRole::MeshLine, {cplx(std::numeric_limits<double>::quiet_NaN(), 0.0)}), Error);
  CHECK_THROWS_AS(s.add("x", CurveRole::MeshLine, {cplx(0.0, std::numeric_limits<double>::infinity())}), Error);
  CHECK(s.curves().empty());
}

TEST_CASE("JSON round trip is exact") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    CurveSet s;
    s.meta["command"] = "test";
    s.meta["trial"] = trial;
    const int count = 1 + trial % 5;
    for (int k = 0; k < count; ++k) {
      s.add("c" + std::to_string(k), static_cast<CurveRole>(k % 3), random_curve(rng, 1 + 3 * k));
    }
    const nlohmann::json j = nlohmann::json::parse(s.dump());
    CHECK(j["meta"]["schema_version"] == kSchemaVersion);
    CHECK(j["meta"]["tool_version"] == std::string(kToolVersion));
    const CurveSet back = CurveSet::from_json(j);
    REQUIRE(back.curves().size() == s.curves().size());
    for (std::size_t k = 0; k < s.curves().size(); ++k) {
      CHECK(back.curves()[k].label == s.curves()[k].label);
      CHECK(back.curves()[k].role == s.curves()[k].role);
      CHECK(back.curves()[k].points == s.curves()[k].points);
    }
    CHECK(back.dump() == s.dump());
  }
  nlohmann::json bad = CurveSet().to_json();
  bad["meta"]["schema_version"] = kSchemaVersion + 1;
  CHECK_THROWS_AS(CurveSet::from_json(bad), Error);
}

TEST_CASE("CSV and SVG output") {
  CurveSet s;
  s.add("edge/1", CurveRole::BoundaryEdge, {cplx(0.5, -1.0), cplx(2.0, 3.25)});
  s.add("ray", CurveRole::MeshLine, {cplx(0.0, 0.0), cplx(1.0, 1.0)});
  CHECK(CurveSet::csv(s.curve("edge/1")) == "x,y\n0.5,-1\n2,3.25\n");
  const std::string svg = s.svg();
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("class=\"boundary-edge\"") != std::string::npos);
  CHECK(svg.find("id=\"edge_1\"") != std::string::npos);
  // y is flipped for screen coordinates.
  CHECK(svg.find("2,-3.25") != std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "gearmap_curveset_test";
  std::filesystem::create_directories(dir);
  const auto written = s.write((dir / "out.csv").string(), OutputFormat::Csv);
  REQUIRE(written.size() == 2);
  std::ifstream in(written[0]);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == CurveSet::csv(s.curves()[0]));
  std::filesystem::remove_all(dir);
}

TEST_CASE("number and grid parsing") {
  CHECK(parse_real("0.25") == 0.25);
  CHECK(parse_real("-1e-3") == -1e-3);
  CHECK(parse_real("0.5pi") == doctest::Approx(std::numbers::pi / 2));
  CHECK(parse_real("0.5*pi") == doctest::Approx(std::numbers::pi / 2));
  CHECK(parse_real("π") == std::numbers::pi);
  CHECK(parse_real("-pi") == -std::numbers::pi);
  for (const char* bad : {"", "abc", "1.0x", "pi2", "nan", "inf"}) CHECK_THROWS_AS(parse_real(bad), Error);
  CHECK(parse_grid("17x9") == std::pair{17, 9});
  for (const char* bad : {"17", "1x9", "x9", "3x", "3x4x5", "-3x4"}) CHECK_THROWS_AS(parse_grid(bad), Error);
}

TEST_CASE("run configuration") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.ode().tol == c.ode_tol);
  CHECK(c.spps().order == c.spps_order);
  c.format = "png";
  CHECK_THROWS_AS(c.validate(), Error);
  c = RunConfig{};
  c.ode_tol = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = RunConfig{};
  c.samples = 1;
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK(RunConfig{}.to_json()["grid"] == nlohmann::json::array({17, 9}));
}
