#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "pflow/errors.hpp"
#include "pflow/flow.hpp"
#include "pflow/pipeline.hpp"

namespace fs = std::filesystem;
using namespace pflow;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  int workers = 0;  // 0: env or 1
  unsigned long long seed = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "configuration file")
      ->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--workers", args.workers, "parallel shape evaluations");
  cmd->add_option("--seed", args.seed, "override pool sampling seed");
}

int resolve_workers(const CommonArgs& args) {
  return args.workers > 0 ? args.workers : env_workers_default();
}

RunConfig load(const CommonArgs& args) {
  RunConfig rc = load_config(args.config_path);
  fs::create_directories(args.out_dir);
  return rc;
}

std::string joined(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

int cmd_evaluate(const CommonArgs& args) {
  RunConfig rc = load(args);
  const auto coeffs = generate_pool_coefficients(rc, args.seed);
  const auto records = evaluate_pool(rc, coeffs, resolve_workers(args));
  Manifest m = make_manifest(rc);
  const std::string csv = joined(args.out_dir, "objectives.csv");
  write_objectives_csv(csv, m, records);
  m.outputs = {csv};
  m.write(joined(args.out_dir, "manifest.json"));
  std::cout << "evaluated " << records.size() << " shape(s) -> " << csv << "\n";
  return 0;
}

DesignPool build_pool(const std::vector<EvaluationRecord>& records) {
  DesignPool pool;
  for (const auto& r : records) pool.push(r.design);
  return pool;
}

int cmd_pareto(const CommonArgs& args) {
  RunConfig rc = load(args);
  const auto coeffs = generate_pool_coefficients(rc, args.seed);
  const auto records = evaluate_pool(rc, coeffs, resolve_workers(args));
  const DesignPool pool = build_pool(records);
  const DesignPool front = nondominated_set(pool);
  if (!front_maximality_check(pool))
    throw Error(ErrorCode::ConfigError,
                "front maximality check failed on the evaluated pool");
  Manifest m = make_manifest(rc);
  const std::string pool_csv = joined(args.out_dir, "pool.csv");
  const std::string front_csv = joined(args.out_dir, "front.csv");
  write_objectives_csv(pool_csv, m, records);
  write_front_csv(front_csv, m, pool, front);
  m.outputs = {pool_csv, front_csv};
  m.write(joined(args.out_dir, "manifest.json"));
  std::cout << "pool " << pool.size() << ", front " << front.size() << " -> "
            << front_csv << "\n";
  return 0;
}

int cmd_scalarize(const CommonArgs& args) {
  RunConfig rc = load(args);
  const auto& sc = rc.scalarization;
  const auto coeffs = generate_pool_coefficients(rc, args.seed);
  const auto records = evaluate_pool(rc, coeffs, resolve_workers(args));
  const DesignPool pool = build_pool(records);

  // Shapes for the Hausdorff diagnostics are realized on demand.
  auto cloud = [&](const std::vector<double>& c) {
    return realize_shape(rc.shape_space, c).boundary_cloud(128);
  };

  Manifest m = make_manifest(rc);
  const std::string csv = joined(args.out_dir, "sweep.csv");
  std::ofstream out(csv);
  out << csv_header_comment(m);

  if (sc.method == ScalMethod::WeightedSum) {
    std::vector<ScalarizationSpec> specs;
    for (const auto& t : sc.thetas)
      specs.push_back(ScalarizationSpec::weighted_sum(t));
    if (specs.empty())
      throw Error(ErrorCode::ConfigError, "scalarization.thetas is empty");
    const auto star = ScalarizationSpec::weighted_sum(
        sc.theta_star.empty() ? specs.back().theta : sc.theta_star);
    const auto sweep = stability_sweep(specs, star, pool, cloud);
    out << "theta0,theta1,tau,argmin_size,d_H_to_star,coeff_dist_to_star\n";
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      const auto argmin = solve_scalarized(specs[i], pool);
      out << format_double(sweep[i].theta[0]) << ','
          << format_double(sweep[i].theta.size() > 1 ? sweep[i].theta[1] : 0.0)
          << ',' << format_double(argmin.optimal_value) << ','
          << sweep[i].argmin_size << ',' << format_double(sweep[i].deviation)
          << ',' << format_double(sweep[i].coeff_deviation) << '\n';
    }
  } else {
    if (sc.epsilon_chain.empty())
      throw Error(ErrorCode::ConfigError, "scalarization.epsilon_chain is empty");
    const auto report =
        epsilon_monotonicity(sc.objective, sc.epsilon_chain, pool);
    out << "step,eps0,eps1,tau,feasible_count,tau_monotone,nested\n";
    for (std::size_t i = 0; i < report.steps.size(); ++i) {
      const auto& st = report.steps[i];
      out << i << ',' << format_double(st.epsilons.empty() ? 0.0 : st.epsilons[0])
          << ','
          << format_double(st.epsilons.size() > 1 ? st.epsilons[1] : 0.0) << ','
          << (st.tau ? format_double(*st.tau) : "infeasible") << ','
          << st.feasible_count << ',' << (report.tau_monotone ? 1 : 0) << ','
          << (report.nested ? 1 : 0) << '\n';
    }
  }
  m.outputs = {csv};
  m.write(joined(args.out_dir, "manifest.json"));
  std::cout << "sweep written -> " << csv << "\n";
  return 0;
}

int cmd_mesh_dump(const CommonArgs& args) {
  RunConfig rc = load(args);
  const auto coeffs = generate_pool_coefficients(rc, args.seed);
  const Shape shape = realize_shape(rc.shape_space, coeffs.front());
  const int res = rc.boundary_resolution > 0
                      ? rc.boundary_resolution
                      : boundary_resolution_for(
                            estimate_perimeter(shape),
                            std::min(rc.coupled.h_fluid, rc.coupled.h_solid));
  const BoundaryGeometry bg = boundary_geometry(shape, res);
  FluidMeshOptions fm;
  fm.h = rc.coupled.h_fluid;
  fm.corner_rounding = rc.coupled.corner_rounding;
  const Mesh fluid = mesh_fluid(shape, bg, fm);
  const Mesh solid = mesh_solid(shape, bg, rc.coupled.h_solid);
  save_mesh(joined(args.out_dir, "fluid.mesh"), fluid);
  save_mesh(joined(args.out_dir, "solid.mesh"), solid);
  bg.export_csv(joined(args.out_dir, "boundary.csv"));
  Manifest m = make_manifest(rc);
  m.outputs = {joined(args.out_dir, "fluid.mesh"),
               joined(args.out_dir, "solid.mesh"),
               joined(args.out_dir, "boundary.csv")};
  m.write(joined(args.out_dir, "manifest.json"));
  std::cout << "fluid: " << fluid.n_nodes() << " nodes, "
            << fluid.n_triangles() << " triangles; solid: " << solid.n_nodes()
            << " nodes, " << solid.n_triangles() << " triangles\n";
  return 0;
}

int cmd_flow_dump(const CommonArgs& args) {
  RunConfig rc = load(args);
  const auto coeffs = generate_pool_coefficients(rc, args.seed);
  const Shape shape = realize_shape(rc.shape_space, coeffs.front());
  const CoupledSolution cs = coupled_solve(shape, rc.coupled);
  cs.flow.export_csv(joined(args.out_dir, "flow.csv"));
  Manifest m = make_manifest(rc);
  m.outputs = {joined(args.out_dir, "flow.csv")};
  m.write(joined(args.out_dir, "manifest.json"));
  std::cout << "flow solution -> " << joined(args.out_dir, "flow.csv") << "\n";
  return 0;
}

int cmd_elast_dump(const CommonArgs& args) {
  RunConfig rc = load(args);
  const auto coeffs = generate_pool_coefficients(rc, args.seed);
  const Shape shape = realize_shape(rc.shape_space, coeffs.front());
  const CoupledSolution cs = coupled_solve(shape, rc.coupled);
  cs.solid.export_csv(joined(args.out_dir, "elast.csv"));
  Manifest m = make_manifest(rc);
  m.outputs = {joined(args.out_dir, "elast.csv")};
  m.write(joined(args.out_dir, "manifest.json"));
  std::cout << "elasticity solution -> " << joined(args.out_dir, "elast.csv")
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled potential-flow / elasticity shape evaluation and "
               "Pareto-front exploration"};
  app.require_subcommand(1);

  CommonArgs args;
  auto* evaluate = app.add_subcommand("evaluate", "evaluate shapes from the config");
  auto* pareto = app.add_subcommand("pareto", "evaluate a pool and extract the front");
  auto* scalarize = app.add_subcommand("scalarize", "scalarization sweeps and stability");
  auto* mesh_dump = app.add_subcommand("mesh-dump", "write meshes and boundary CSV");
  auto* flow_dump = app.add_subcommand("flow-dump", "write the flow solution CSV");
  auto* elast_dump = app.add_subcommand("elast-dump", "write the elasticity CSV");
  for (auto* cmd : {evaluate, pareto, scalarize, mesh_dump, flow_dump, elast_dump})
    add_common(cmd, args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (evaluate->parsed()) return cmd_evaluate(args);
    if (pareto->parsed()) return cmd_pareto(args);
    if (scalarize->parsed()) return cmd_scalarize(args);
    if (mesh_dump->parsed()) return cmd_mesh_dump(args);
    if (flow_dump->parsed()) return cmd_flow_dump(args);
    if (elast_dump->parsed()) return cmd_elast_dump(args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
