#include "pflow/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <random>
#include <thread>

#include "pflow/errors.hpp"
#include "pflow/flow.hpp"

namespace pflow {

EvaluationRecord evaluate_design(const RunConfig& config,
                                 const std::vector<double>& coefficients,
                                 int id) {
  const Shape shape = realize_shape(config.shape_space, coefficients);
  const CoupledSolution cs = coupled_solve(shape, config.coupled);

  const double j_e = friction_loss(cs.flow, cs.boundary, config.fluidloss);
  const ReliabilityResult rel =
      reliability_functional(cs.solid, cs.boundary, config.reliability);

  EvaluationRecord rec;
  rec.design.id = id;
  rec.design.coefficients = coefficients;
  rec.design.objectives.values = {j_e, rel.j_r};
  rec.design.objectives.labels = {"J_E", "J_R"};
  rec.design.objectives.check_finite();
  rec.design.provenance = {config.coupled.h_fluid, config.coupled.h_solid,
                           config.coupled.rel_tol};
  rec.pof = rel.pof;
  return rec;
}

std::optional<ObjectiveVector> try_evaluate(const RunConfig& config,
                                            const std::vector<double>& coeffs) {
  try {
    return evaluate_design(config, coeffs, -1).design.objectives;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::vector<std::vector<double>> generate_pool_coefficients(
    const RunConfig& config, unsigned long long seed_override) {
  const int n = config.shape_space->n_modes;
  std::vector<std::vector<double>> out;
  switch (config.pool.mode) {
    case PoolConfig::Mode::Single: {
      std::vector<double> c = config.pool.coefficients;
      c.resize(n, 0.0);
      out.push_back(std::move(c));
      break;
    }
    case PoolConfig::Mode::Grid: {
      // Tensor grid over the first two modes, zeros elsewhere.
      const int g = std::max(1, config.pool.grid_per_axis);
      const double b = config.pool.coeff_bound;
      for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
          std::vector<double> c(n, 0.0);
          c[0] = g == 1 ? 0.0 : -b + 2.0 * b * i / (g - 1);
          if (n > 1) c[1] = g == 1 ? 0.0 : -b + 2.0 * b * j / (g - 1);
          out.push_back(std::move(c));
        }
      break;
    }
    case PoolConfig::Mode::Random: {
      std::mt19937_64 rng(seed_override ? seed_override : config.pool.seed);
      std::uniform_real_distribution<double> uni(-config.pool.coeff_bound,
                                                 config.pool.coeff_bound);
      int retries = 0;
      while (static_cast<int>(out.size()) < config.pool.count) {
        std::vector<double> c(n);
        for (double& v : c) v = uni(rng);
        bool duplicate = false;
        for (const auto& prev : out) duplicate = duplicate || prev == c;
        bool ok = !duplicate;
        if (ok) {
          try {
            realize_shape(config.shape_space, c);
          } catch (const Error&) {
            ok = false;
          }
        }
        if (ok) {
          out.push_back(std::move(c));
        } else if (++retries > config.pool.max_retries) {
          throw Error(ErrorCode::ConfigError,
                      "pool sampling kept drawing inadmissible shapes; "
                      "lower pool.coeff_bound or raise norm_bound");
        }
      }
      break;
    }
  }
  return out;
}

std::vector<EvaluationRecord> evaluate_pool(
    const RunConfig& config, const std::vector<std::vector<double>>& coeffs,
    int workers) {
  std::vector<EvaluationRecord> records(coeffs.size());
  std::vector<std::string> failures(coeffs.size());
  std::atomic<int> next{0};
  workers = std::max(1, workers);

  auto worker = [&]() {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= static_cast<int>(coeffs.size())) return;
      try {
        records[i] = evaluate_design(config, coeffs[i], i);
      } catch (const Error& e) {
        failures[i] = e.what();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  for (std::size_t i = 0; i < failures.size(); ++i)
    if (!failures[i].empty())
      throw Error(ErrorCode::ConfigError,
                  "shape " + std::to_string(i) + ": " + failures[i]);
  return records;
}

// ---------------------------------------------------------------------------
// Persistence

Manifest make_manifest(const RunConfig& config) {
  Manifest m;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(config.canonical)));
  m.config_hash = buf;
  m.h_fluid = config.coupled.h_fluid;
  m.h_solid = config.coupled.h_solid;
  m.rel_tol = config.coupled.rel_tol;
  std::time_t now = std::time(nullptr);
  char ts[64];
  std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  m.created = ts;
  return m;
}

void Manifest::write(const std::string& path) const {
  std::ofstream out(path);
  out << "{\n";
  out << "  \"config_hash\": \"" << config_hash << "\",\n";
  out << "  \"tool_version\": \"" << tool_version << "\",\n";
  out << "  \"created\": \"" << created << "\",\n";
  out << "  \"dim\": 2,\n";
  out << "  \"tolerances\": {\"h_fluid\": " << format_double(h_fluid)
      << ", \"h_solid\": " << format_double(h_solid)
      << ", \"rel_tol\": " << format_double(rel_tol) << "},\n";
  out << "  \"outputs\": [";
  for (std::size_t i = 0; i < outputs.size(); ++i)
    out << (i ? ", " : "") << '"' << outputs[i] << '"';
  out << "]\n}\n";
}

std::string csv_header_comment(const Manifest& m) {
  return "# manifest=manifest.json config_hash=" + m.config_hash +
         " tool_version=" + std::string(kToolVersion) + " dim=2\n";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_objectives_csv(const std::string& path, const Manifest& m,
                          const std::vector<EvaluationRecord>& records) {
  std::ofstream out(path);
  out << csv_header_comment(m);
  out << "shape_id";
  const int n =
      records.empty() ? 0 : static_cast<int>(records[0].design.coefficients.size());
  for (int i = 0; i < n; ++i) out << ",c" << i;
  out << ",J_E,J_R,PoF\n";
  for (const auto& r : records) {
    out << r.design.id;
    for (double c : r.design.coefficients) out << ',' << format_double(c);
    out << ',' << format_double(r.design.objectives.values[0]) << ','
        << format_double(r.design.objectives.values[1]) << ','
        << format_double(r.pof) << '\n';
  }
}

void write_front_csv(const std::string& path, const Manifest& m,
                     const DesignPool& pool, const DesignPool& front) {
  std::ofstream out(path);
  out << csv_header_comment(m);
  out << "shape_id";
  if (!pool.designs.empty())
    for (const auto& label : pool.designs[0].objectives.labels)
      out << ',' << label;
  out << ",is_nondominated\n";
  for (const auto& d : pool.designs) {
    bool in_front = false;
    for (const auto& f : front.designs) in_front = in_front || f.id == d.id;
    out << d.id;
    for (double v : d.objectives.values) out << ',' << format_double(v);
    out << ',' << (in_front ? 1 : 0) << '\n';
  }
}

int env_workers_default() {
  const char* env = std::getenv("PARETO_SHAPE_WORKERS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

}  // namespace pflow
