#include "pflow/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pflow/errors.hpp"

namespace pflow {

namespace {

using nlohmann::json;

double num(const json& j, const std::string& section, const std::string& key,
           double fallback, bool required = false) {
  if (!j.contains(key)) {
    if (required)
      throw Error(ErrorCode::ConfigError,
                  section + "." + key + " is required");
    return fallback;
  }
  if (!j[key].is_number())
    throw Error(ErrorCode::ConfigError, section + "." + key + " must be a number");
  return j[key].get<double>();
}

Vec2 vec2(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    throw Error(ErrorCode::ConfigError, where + " must be a [x, y] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

Rect rect(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4)
    throw Error(ErrorCode::ConfigError,
                where + " must be [x0, y0, x1, y1]");
  Rect r{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
         j[3].get<double>()};
  if (r.x1 <= r.x0 || r.y1 <= r.y0)
    throw Error(ErrorCode::ConfigError, where + " is degenerate");
  return r;
}

ClosedCurve parse_baseline(const json& j) {
  const std::string kind = j.value("kind", "circle");
  if (kind == "circle")
    return ClosedCurve::circle(vec2(j.at("center"), "geometry.baseline.center"),
                               j.at("radius").get<double>());
  if (kind == "ellipse")
    return ClosedCurve::ellipse(vec2(j.at("center"), "geometry.baseline.center"),
                                j.at("rx").get<double>(),
                                j.at("ry").get<double>());
  if (kind == "points") {
    std::vector<Vec2> pts;
    for (const auto& p : j.at("points"))
      pts.push_back(vec2(p, "geometry.baseline.points[]"));
    return ClosedCurve::spline(std::move(pts));
  }
  throw Error(ErrorCode::ConfigError,
              "geometry.baseline.kind must be circle, ellipse or points");
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError,
                origin + ": " + std::string(e.what()));
  }

  RunConfig rc;

  // geometry
  if (!root.contains("geometry"))
    throw Error(ErrorCode::ConfigError, origin + ": missing geometry section");
  const json& jg = root["geometry"];
  auto cfg = std::make_shared<ShapeSpaceConfig>();
  cfg->baseline = parse_baseline(jg.at("baseline"));
  cfg->shroud = rect(jg.at("shroud"), "geometry.shroud");
  cfg->exterior_box = rect(jg.at("exterior_box"), "geometry.exterior_box");
  const json& jc = jg.at("clamp_disc");
  cfg->clamp.center = vec2(jc.at("center"), "geometry.clamp_disc.center");
  cfg->clamp.radius = jc.at("radius").get<double>();
  cfg->hoelder_k = static_cast<int>(num(jg, "geometry", "hoelder_k", 2));
  cfg->hoelder_alpha = num(jg, "geometry", "hoelder_alpha", 0.5);
  cfg->norm_bound = num(jg, "geometry", "norm_bound", 1.0, true);
  cfg->n_modes = static_cast<int>(num(jg, "geometry", "n_modes", 4));
  cfg->mask_margin = num(jg, "geometry", "mask_margin", 0.12);
  cfg->collar_fraction = num(jg, "geometry", "collar_fraction", 0.35);
  cfg->norm_grid_n = static_cast<int>(num(jg, "geometry", "norm_grid_n", 40));
  if (jg.contains("fixed_region_tag"))
    cfg->fixed_region_tag =
        boundary_tag_from_string(jg["fixed_region_tag"].get<std::string>());

  // Leading edge: explicit parameter or the upstream junction by default.
  if (jg.contains("leading_edge_t") && jg["leading_edge_t"].is_number()) {
    cfg->leading_edge_t = jg["leading_edge_t"].get<double>();
  } else {
    const auto arc = cfg->wetted_arc();
    if (arc.full_boundary) {
      cfg->leading_edge_t = kPi;  // leftmost point of the usual circle
    } else {
      const Vec2 a = cfg->baseline.point(arc.t_begin);
      const Vec2 b = cfg->baseline.point(arc.t_end);
      cfg->leading_edge_t = (a.x < b.x) ? arc.t_begin : arc.t_end;
      cfg->leading_edge_t -=
          std::floor(cfg->leading_edge_t / kTwoPi) * kTwoPi;
    }
  }
  cfg->validate();
  rc.shape_space = cfg;

  // mesh
  const json jm = root.value("mesh", json::object());
  rc.coupled.h_fluid = num(jm, "mesh", "h_fluid", 0.08);
  rc.coupled.h_solid = num(jm, "mesh", "h_solid", 0.06);
  rc.coupled.corner_rounding = num(jm, "mesh", "corner_rounding", -1.0);
  rc.boundary_resolution =
      static_cast<int>(num(jm, "mesh", "boundary_resolution", 0));

  // flow
  const json jf = root.value("flow", json::object());
  rc.coupled.inflow_U = num(jf, "flow", "inflow_U", 1.0);
  rc.coupled.outflow_scale = num(jf, "flow", "outflow_scale", 1.0);
  rc.coupled.density = num(jf, "flow", "density", 1.0);
  rc.coupled.stagnation_pressure = num(jf, "flow", "stagnation_pressure", 1.0);
  rc.coupled.rel_tol = num(jf, "flow", "rel_tol", 1e-10);
  if (jf.contains("pin_x") || jf.contains("pin_y")) {
    rc.coupled.pin_point = {num(jf, "flow", "pin_x", 0.0, true),
                            num(jf, "flow", "pin_y", 0.0, true)};
    rc.coupled.pin_default = false;
  }

  // elasticity (elast accepted as an alias)
  const json je = root.contains("elasticity") ? root["elasticity"]
                                              : root.value("elast", json::object());
  rc.coupled.lambda = num(je, "elasticity", "lambda", 1.0);
  rc.coupled.mu = num(je, "elasticity", "mu", 1.0);
  if (je.contains("body_force"))
    rc.coupled.body_force = vec2(je["body_force"], "elasticity.body_force");

  // reliability
  const json jr = root.value("reliability", json::object());
  rc.reliability.weibull_m = num(jr, "reliability", "weibull_m", 2.0);
  rc.reliability.cycles = num(jr, "reliability", "cycles", 1.0e3);
  rc.reliability.cmb.sigma_f = num(jr, "reliability", "sigma_f", 1000.0);
  rc.reliability.cmb.basquin_b = num(jr, "reliability", "basquin_b", -0.09);
  rc.reliability.cmb.eps_f = num(jr, "reliability", "eps_f", 0.5);
  rc.reliability.cmb.coffin_c = num(jr, "reliability", "coffin_c", -0.56);
  rc.reliability.cmb.youngs_e = num(jr, "reliability", "youngs_e", 2.0e5);
  rc.reliability.cmb.delta_ns = num(jr, "reliability", "delta_ns", 0.1);
  if (rc.reliability.weibull_m <= 0.0)
    throw Error(ErrorCode::ConfigError, "reliability.weibull_m must be positive");

  // fluidloss
  const json jl = root.value("fluidloss", json::object());
  rc.fluidloss.dynamic_viscosity =
      num(jl, "fluidloss", "dynamic_viscosity", 1.0e-3);
  rc.fluidloss.kinematic_viscosity =
      num(jl, "fluidloss", "kinematic_viscosity", 1.0e-3);
  if (rc.fluidloss.dynamic_viscosity <= 0.0 ||
      rc.fluidloss.kinematic_viscosity <= 0.0)
    throw Error(ErrorCode::ConfigError, "fluidloss viscosities must be positive");

  // pool
  const json jp = root.value("pool", json::object());
  const std::string mode = jp.value("mode", "single");
  if (mode == "single")
    rc.pool.mode = PoolConfig::Mode::Single;
  else if (mode == "grid")
    rc.pool.mode = PoolConfig::Mode::Grid;
  else if (mode == "random")
    rc.pool.mode = PoolConfig::Mode::Random;
  else
    throw Error(ErrorCode::ConfigError, "pool.mode must be single, grid or random");
  if (jp.contains("coefficients")) {
    for (const auto& v : jp["coefficients"])
      rc.pool.coefficients.push_back(v.get<double>());
  } else {
    rc.pool.coefficients.assign(cfg->n_modes, 0.0);
  }
  rc.pool.grid_per_axis = static_cast<int>(num(jp, "pool", "grid_per_axis", 5));
  rc.pool.coeff_bound = num(jp, "pool", "coeff_bound", 0.05);
  rc.pool.count = static_cast<int>(num(jp, "pool", "count", 25));
  rc.pool.seed = static_cast<unsigned long long>(num(jp, "pool", "seed", 42));

  // scalarization
  const json js = root.value("scalarization", json::object());
  const std::string method = js.value("method", "weighted_sum");
  if (method == "weighted_sum")
    rc.scalarization.method = ScalMethod::WeightedSum;
  else if (method == "epsilon_constraint")
    rc.scalarization.method = ScalMethod::EpsilonConstraint;
  else
    throw Error(ErrorCode::ConfigError,
                "scalarization.method must be weighted_sum or epsilon_constraint");
  rc.scalarization.pool_mode = js.value("pool_mode", true);
  if (js.contains("thetas"))
    for (const auto& tj : js["thetas"]) {
      std::vector<double> t;
      for (const auto& v : tj) t.push_back(v.get<double>());
      rc.scalarization.thetas.push_back(std::move(t));
    }
  if (js.contains("weight_path")) {
    const int count =
        static_cast<int>(num(js["weight_path"], "scalarization.weight_path",
                             "count", 11));
    for (int i = 0; i < count; ++i) {
      const double w = count == 1 ? 0.5 : static_cast<double>(i) / (count - 1);
      rc.scalarization.thetas.push_back({w, 1.0 - w});
    }
  }
  if (js.contains("theta_star"))
    for (const auto& v : js["theta_star"])
      rc.scalarization.theta_star.push_back(v.get<double>());
  rc.scalarization.objective =
      static_cast<int>(num(js, "scalarization", "objective", 0));
  if (js.contains("epsilon_chain"))
    for (const auto& ej : js["epsilon_chain"]) {
      std::vector<double> e;
      for (const auto& v : ej) e.push_back(v.get<double>());
      rc.scalarization.epsilon_chain.push_back(std::move(e));
    }
  rc.scalarization.search.lower.assign(cfg->n_modes, -rc.pool.coeff_bound);
  rc.scalarization.search.upper.assign(cfg->n_modes, rc.pool.coeff_bound);

  rc.canonical = root.dump();
  return rc;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::ConfigError, "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace pflow
