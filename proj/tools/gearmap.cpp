#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gearmap/curveset.hpp"
#include "gearmap/elliptic.hpp"
#include "gearmap/error.hpp"
#include "gearmap/geartools.hpp"
#include "gearmap/goodman.hpp"
#include "gearmap/rectmap.hpp"
#include "gearmap/solver.hpp"
#include "gearmap/spps.hpp"

using namespace gearmap;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::string repr(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

// Rewrites "0.5pi" / "π" to a plain number before CLI11 converts it.
const CLI::Validator kReal(
    [](std::string& s) -> std::string {
      try {
        s = repr(parse_real(s));
        return {};
      } catch (const Error& e) {
        return e.what();
      }
    },
    "REAL[pi]", "real");

// "1.5" or "1.5i": the imaginary part of tau.
const CLI::Validator kImag(
    [](std::string& s) -> std::string {
      std::string_view v = s;
      if (!v.empty() && v.back() == 'i') v.remove_suffix(1);
      try {
        s = repr(parse_real(v));
        return {};
      } catch (const Error& e) {
        return e.what();
      }
    },
    "IMAG", "imag");

struct Options {
  RunConfig cfg;
  std::string grid;
  std::string out;
};

json base_meta(const std::string& command, const RunConfig& cfg) {
  return {{"command", command}, {"config", cfg.to_json()}};
}

void emit_curves(const CurveSet& set, const Options& o) {
  const OutputFormat f = format_from_name(o.cfg.format);
  if (o.out.empty()) {
    if (f == OutputFormat::Json) {
      std::cout << set.dump();
    } else if (f == OutputFormat::Svg) {
      std::cout << set.svg();
    } else {
      throw CLI::ValidationError("--out", "csv output needs --out");
    }
    return;
  }
  for (const std::string& file : set.write(o.out, f)) std::cerr << "wrote " << file << "\n";
}

void emit_result(json meta, json result, const Options& o) {
  meta["schema_version"] = kSchemaVersion;
  meta["tool_version"] = kToolVersion;
  const std::string text = json{{"meta", meta}, {"result", result}}.dump(1) + "\n";
  std::cout << text;
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::binary);
    f << text;
    if (!f) throw std::runtime_error("cannot write " + o.out);
  }
}

std::vector<cplx> apply(const MobiusMap& t, const std::vector<cplx>& pts) {
  std::vector<cplx> out;
  out.reserve(pts.size());
  for (const cplx& p : pts) out.push_back(t(p));
  return out;
}

json gear_json(const GearParams& g) { return {{"beta", g.beta}, {"gamma", g.gamma}}; }

// Disk map normalized to the gear, with images of W rays and H - 1 circles.
void run_map_disk(double t, double lambda, const Options& o) {
  const DiskMap f = symmetric_disk_map({t, lambda}, o.cfg.ode());
  const BoundaryTrace tr = trace_boundary(f, o.cfg.samples);
  const GearNormalization n = gear_normalize(analyze_pregear(tr));
  CurveSet set;
  set.meta = base_meta("map-disk", o.cfg);
  set.meta["params"] = {{"t", t}, {"lambda", lambda}};
  set.meta["gear"] = gear_json(n.params);
  for (const BoundaryEdge& e : tr.edges) set.add(e.label, CurveRole::BoundaryEdge, apply(n.T, e.points));

  const int w = o.cfg.grid_w;
  const int h = o.cfg.grid_h;
  constexpr int kRefine = 8;
  std::vector<double> fr;
  for (int m = 0; m <= kRefine * (h - 1); ++m) fr.push_back(static_cast<double>(m) / (kRefine * (h - 1)));
  const double reach = static_cast<double>(h - 1) / h;
  std::vector<std::vector<cplx>> circles(static_cast<std::size_t>(h - 1));
  for (int k = 0; k < kRefine * w; ++k) {
    const cplx end = std::polar(reach, 2.0 * kPi * k / (kRefine * w));
    const std::vector<Jet2> jets = f.jets_along(end, fr);
    std::vector<cplx> ray;
    for (const Jet2& j : jets) ray.push_back(n.T(j.value));
    for (int c = 1; c < h; ++c) circles[static_cast<std::size_t>(c - 1)].push_back(ray[static_cast<std::size_t>(kRefine * c)]);
    if (k % kRefine == 0) set.add("ray-" + std::to_string(k / kRefine), CurveRole::MeshLine, ray);
  }
  for (int c = 1; c < h; ++c) {
    auto& pts = circles[static_cast<std::size_t>(c - 1)];
    pts.push_back(pts.front());
    set.add("circle-" + std::to_string(c), CurveRole::MeshLine, pts);
  }
  emit_curves(set, o);
}

void run_map_rect(double tau, double mu, bool unbounded, const Options& o) {
  const RectMap m({cplx(0.0, tau), mu}, o.cfg.ode());
  const AlphaRoots roots = m.alpha_roots();
  std::optional<double> alpha;
  for (const AlphaRoot& r : roots.roots) {
    if (r.bounded != unbounded) alpha = r.alpha;
  }
  if (!alpha) throw Error(ErrorCode::NotAPregear, "no alpha on the requested branch");
  CurveSet set;
  set.meta = base_meta("map-rect", o.cfg);
  set.meta["params"] = {{"tau", tau}, {"mu", mu}};
  set.meta["alpha"] = *alpha;
  set.meta["branch"] = unbounded ? "unbounded" : "bounded";
  set.meta["degenerate"] = roots.degenerate;
  if (!unbounded) {
    const RectGear g = m.measure(*alpha);
    set.meta["gear"] = gear_json(g.params);
    set.meta["center"] = g.w0;
  }
  MeshSpec mesh;
  mesh.vertical = o.cfg.grid_w;
  mesh.horizontal = o.cfg.grid_h;
  set.add(map_rectangle(m, *alpha, mesh), CurveRole::MeshLine);
  set.add(rect_boundary(m, *alpha, o.cfg.samples), CurveRole::BoundaryEdge);
  emit_curves(set, o);
}

void run_invert(double beta, double gamma, std::optional<MapParams> guess, const Options& o) {
  InvertOptions io;
  io.ode = o.cfg.ode();
  const InvertResult r = invert({beta, gamma}, guess, io);
  json meta = base_meta("invert", o.cfg);
  meta["target"] = gear_json({beta, gamma});
  emit_result(meta,
              {{"t", r.params.t},
               {"lambda", r.params.lambda},
               {"achieved", gear_json(r.achieved)},
               {"iterations", r.iterations},
               {"evaluations", r.evaluations},
               {"restarted", r.restarted}},
              o);
}

void run_region(const std::vector<double>& beta_levels, const std::vector<double>& gamma_levels, int t_count,
                const Options& o) {
  std::vector<double> ts;
  for (int k = 0; k < t_count; ++k) ts.push_back(0.02 + (0.5 * kPi - 0.04) * k / std::max(1, t_count - 1));
  LevelOptions lo;
  lo.root_tol = o.cfg.root_tol;
  lo.ode = o.cfg.ode();
  CurveSet set;
  set.meta = base_meta("region", o.cfg);
  set.meta["beta_levels_log"] = beta_levels;
  set.meta["gamma_levels"] = gamma_levels;
  set.meta["t_grid"] = ts;
  std::vector<cplx> lower, upper;
  for (int k = 0; k <= 256; ++k) {
    const double t = 0.5 * kPi * (k + 0.5) / 257.5;
    const auto [lam_lo, lam_hi] = lambda_bounds(t);
    lower.emplace_back(t, lam_lo);
    upper.emplace_back(t, lam_hi);
  }
  set.add("region-lower", CurveRole::BoundaryEdge, lower);
  set.add("region-upper", CurveRole::BoundaryEdge, upper);
  std::vector<LevelCurve> curves;
  if (!beta_levels.empty()) curves = level_curves(LevelKind::Beta, beta_levels, ts, lo);
  if (!gamma_levels.empty()) {
    for (LevelCurve& c : level_curves(LevelKind::Gamma, gamma_levels, ts, lo)) curves.push_back(std::move(c));
  }
  for (const LevelCurve& c : curves) {
    // The k-th root at each t forms branch k.
    std::map<double, std::vector<double>> by_t;
    for (const MapParams& p : c.points) by_t[p.t].push_back(p.lambda);
    std::vector<std::vector<cplx>> branches;
    for (auto& [t, ls] : by_t) {
      std::sort(ls.begin(), ls.end());
      if (branches.size() < ls.size()) branches.resize(ls.size());
      for (std::size_t k = 0; k < ls.size(); ++k) branches[k].emplace_back(t, ls[k]);
    }
    for (std::size_t k = 0; k < branches.size(); ++k) {
      const std::string label = branches.size() == 1 ? c.label : c.label + "/" + std::to_string(k);
      set.add(label, CurveRole::LevelCurve, branches[k]);
    }
  }
  emit_curves(set, o);
}

void run_multitooth(const MapParams& p, int teeth, const Options& o) {
  const GearMap g = renormalized_gear_map(p, o.cfg.ode());
  const MultiToothMap mt = multitooth(g.h, teeth);
  CurveSet set;
  set.meta = base_meta("multitooth", o.cfg);
  set.meta["params"] = {{"t", p.t}, {"lambda", p.lambda}};
  set.meta["gear"] = gear_json(g.params);
  set.meta["teeth"] = teeth;
  set.meta["outer_radius_ratio"] = std::pow(g.params.beta, 1.0 / teeth);
  set.add(mt.boundary(o.cfg.samples), CurveRole::BoundaryEdge);
  emit_curves(set, o);
}

void run_modulus(double beta, double gamma, const Options& o) {
  const ExteriorModulus m = exterior_modulus_annular_rectangle(beta, gamma, std::max(o.cfg.samples, 4096));
  json meta = base_meta("modulus", o.cfg);
  meta["target"] = gear_json({beta, gamma});
  emit_result(meta, {{"modulus", m.modulus}, {"t", m.t}, {"lambda", m.lambda}, {"hausdorff", m.hausdorff}}, o);
}

void run_goodman(double t1, double t2, const Options& o) {
  const GoodmanJet j = goodman_ratio_jet(t1, t2, o.cfg.ode(), o.cfg.root_tol);
  const double integral = goodman_ratio_integral(t1, t2);
  json meta = base_meta("goodman", o.cfg);
  meta["params"] = {{"t1", t1}, {"t2", t2}};
  emit_result(meta,
              {{"ratio_jet", j.ratio},
               {"ratio_integral", integral},
               {"difference", j.ratio - integral},
               {"t", j.params.t},
               {"lambda", j.params.lambda},
               {"gear", gear_json(j.gear)}},
              o);
}

void run_spps_check(double t, int count, const Options& o) {
  const LambdaFunctional fn(t, o.cfg.spps());
  OdeOptions ode = o.cfg.ode();
  json rows = json::array();
  double worst_jet = 0.0, worst_beta = 0.0, worst_gamma = 0.0;
  for (int i = 0; i < count; ++i) {
    const double l = fn.lower() + (fn.upper() - fn.lower()) * (i + 0.5) / count;
    const EndpointJets d = endpoint_jets(symmetric_disk_map({t, l}, ode));
    const EndpointJets s = fn.jets(l);
    double gap = 0.0;
    for (auto [a, b] : {std::pair{d.at_minus1, s.at_minus1}, std::pair{d.at_1, s.at_1}, std::pair{d.at_tooth, s.at_tooth}}) {
      const double scale = std::max({1.0, std::abs(a.value), std::abs(a.d1), std::abs(a.d2)});
      gap = std::max({gap, std::abs(a.value - b.value) / scale, std::abs(a.d1 - b.d1) / scale,
                      std::abs(a.d2 - b.d2) / scale});
    }
    const GearParams direct = gear_normalize(analyze_pregear(d)).params;
    const GearParams series = fn.params(l);
    const double db = std::abs(series.beta / direct.beta - 1.0);
    const double dg = std::abs(series.gamma - direct.gamma);
    worst_jet = std::max(worst_jet, gap);
    worst_beta = std::max(worst_beta, db);
    worst_gamma = std::max(worst_gamma, dg);
    rows.push_back({{"lambda", l}, {"jet_gap", gap}, {"beta_rel", db}, {"gamma_abs", dg}});
  }
  json meta = base_meta("spps-check", o.cfg);
  meta["params"] = {{"t", t}, {"count", count}};
  emit_result(meta,
              {{"rows", rows},
               {"max_jet_gap", worst_jet},
               {"max_beta_rel", worst_beta},
               {"max_gamma_abs", worst_gamma},
               {"spps_order", {fn.table(0).order, fn.table(1).order, fn.table(2).order}}},
              o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformal maps of the disk and of rectangles onto one-tooth gear domains"};
  app.set_config("--config", "", "TOML/INI file with the same keys as the flags");
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--tol", o.cfg.ode_tol, "ODE local error tolerance")->check(CLI::PositiveNumber);
  app.add_option("--root-tol", o.cfg.root_tol, "root-finding tolerance")->check(CLI::PositiveNumber);
  app.add_option("--spps-tail-tol", o.cfg.spps_tail_tol, "SPPS series tail tolerance")->check(CLI::PositiveNumber);
  app.add_option("--spps-order", o.cfg.spps_order, "initial SPPS series order")->check(CLI::PositiveNumber);
  app.add_option("--grid", o.grid, "mesh lines WxH");
  app.add_option("--samples", o.cfg.samples, "boundary samples per edge")->check(CLI::Range(2, 1 << 20));
  app.add_option("--format", o.cfg.format, "json, csv or svg")->check(CLI::IsMember({"json", "csv", "svg"}));
  app.add_option("--out", o.out, "output path");

  double t = 0.0, lambda = 0.0, beta = 0.0, gamma = 0.0, tau = 0.0, mu = 0.0, t1 = 0.0, t2 = 0.0;
  int teeth = 0, t_count = 24, count = 10;
  bool unbounded = false;
  std::vector<double> beta_levels, gamma_levels;

  auto* map_disk = app.add_subcommand("map-disk", "disk map onto the gear, normalized");
  map_disk->add_option("--t", t, "prevertex angle")->required()->transform(kReal);
  map_disk->add_option("--lambda", lambda, "accessory parameter")->required()->transform(kReal);

  auto* map_rect = app.add_subcommand("map-rect", "rectangle map onto the gear");
  auto* tau_opt = map_rect->add_option("--tau", tau, "Im tau")->transform(kImag);
  auto* mu_opt = map_rect->add_option("--mu", mu, "accessory parameter")->transform(kReal);
  auto* rt_opt = map_rect->add_option("--t", t, "disk prevertex angle (sets tau and mu)")->transform(kReal);
  auto* rl_opt = map_rect->add_option("--lambda", lambda, "disk accessory parameter")->transform(kReal);
  tau_opt->needs(mu_opt);
  mu_opt->needs(tau_opt);
  rt_opt->needs(rl_opt);
  rl_opt->needs(rt_opt);
  tau_opt->excludes(rt_opt);
  map_rect->add_flag("--unbounded", unbounded, "use the alpha giving the unbounded image");

  auto* inv = app.add_subcommand("invert", "(beta, gamma) -> (t, lambda)");
  inv->add_option("--beta", beta, "radius ratio")->required()->transform(kReal);
  inv->add_option("--gamma", gamma, "tooth half angle")->required()->transform(kReal);
  auto* it_opt = inv->add_option("--t", t, "starting t")->transform(kReal);
  auto* il_opt = inv->add_option("--lambda", lambda, "starting lambda")->transform(kReal);
  it_opt->needs(il_opt);
  il_opt->needs(it_opt);

  auto* region = app.add_subcommand("region", "level curves of log beta and gamma in the (t, lambda) region");
  region->add_option("--beta-levels", beta_levels, "log beta values")->delimiter(',')->transform(kReal);
  region->add_option("--gamma-levels", gamma_levels, "gamma values")->delimiter(',')->transform(kReal);
  region->add_option("--t-count", t_count, "t samples")->check(CLI::Range(2, 10000));

  auto* multi = app.add_subcommand("multitooth", "n-tooth gear from the one-tooth map");
  auto* mb_opt = multi->add_option("--beta", beta, "one-tooth radius ratio")->transform(kReal);
  auto* mg_opt = multi->add_option("--gamma", gamma, "one-tooth half angle")->transform(kReal);
  auto* mt_opt = multi->add_option("--t", t, "prevertex angle")->transform(kReal);
  auto* ml_opt = multi->add_option("--lambda", lambda, "accessory parameter")->transform(kReal);
  multi->add_option("--n-teeth", teeth, "tooth count")->required()->check(CLI::Range(1, 1000));
  mb_opt->needs(mg_opt);
  mg_opt->needs(mb_opt);
  mt_opt->needs(ml_opt);
  ml_opt->needs(mt_opt);
  mb_opt->excludes(mt_opt);

  auto* modulus = app.add_subcommand("modulus", "exterior module of the annular rectangle");
  modulus->add_option("--beta", beta, "square root of the radius ratio")->required()->transform(kReal);
  modulus->add_option("--gamma", gamma, "half the complementary angle")->required()->transform(kReal);

  auto* goodman = app.add_subcommand("goodman", "h'(0)/h(1) from the gear map and from the singular integral");
  goodman->add_option("--t1", t1, "outer prevertex angle")->required()->transform(kReal);
  goodman->add_option("--t2", t2, "inner prevertex angle")->required()->transform(kReal);

  auto* spps = app.add_subcommand("spps-check", "SPPS series against direct integration");
  spps->add_option("--t", t, "prevertex angle")->required()->transform(kReal);
  spps->add_option("--count", count, "lambda samples")->check(CLI::Range(1, 10000));

  try {
    app.parse(argc, argv);
    if (!o.grid.empty()) std::tie(o.cfg.grid_w, o.cfg.grid_h) = parse_grid(o.grid);
    o.cfg.validate();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*map_disk) {
      run_map_disk(t, lambda, o);
    } else if (*map_rect) {
      if (*rt_opt) {
        tau = module_M(t);
        mu = mu_from_lambda(t, lambda);
      } else if (!*tau_opt) {
        throw CLI::RequiredError("--tau and --mu, or --t and --lambda");
      }
      run_map_rect(tau, mu, unbounded, o);
    } else if (*inv) {
      run_invert(beta, gamma, *it_opt ? std::optional<MapParams>(MapParams{t, lambda}) : std::nullopt, o);
    } else if (*region) {
      run_region(beta_levels, gamma_levels, t_count, o);
    } else if (*multi) {
      MapParams p{t, lambda};
      if (*mb_opt) {
        InvertOptions io;
        io.ode = o.cfg.ode();
        p = invert({beta, gamma}, std::nullopt, io).params;
      } else if (!*mt_opt) {
        throw CLI::RequiredError("--beta and --gamma, or --t and --lambda");
      }
      run_multitooth(p, teeth, o);
    } else if (*modulus) {
      run_modulus(beta, gamma, o);
    } else if (*goodman) {
      run_goodman(t1, t2, o);
    } else if (*spps) {
      run_spps_check(t, count, o);
    }
  } catch (const CLI::Error& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
