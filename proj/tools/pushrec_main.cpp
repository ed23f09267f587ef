#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pushrec/config.hpp"
#include "pushrec/errors.hpp"
#include "pushrec/report.hpp"

namespace fs = std::filesystem;
using namespace pushrec;

namespace {

struct CommonFlags {
  std::string config_path;
  std::vector<std::string> models;
  std::string out_dir;
  std::string format;
  int jobs = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "configuration file (key = value sections)");
  cmd->add_option("--model", flags.models, "model name, repeatable (IP LIPM TMIPM MMIPM LIPPFM ELIPPFM)");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--format", flags.format, "csv, svg or both")
      ->check(CLI::IsMember({"csv", "svg", "both"}));
  cmd->add_option("--jobs", flags.jobs, "worker threads for the sweep")
      ->check(CLI::PositiveNumber);
}

RunConfig resolve_config(const CommonFlags& flags) {
  RunConfig cfg = load_config_file(flags.config_path);
  if (!flags.models.empty()) {
    cfg.output.models.clear();
    for (const std::string& name : flags.models)
      cfg.output.models.push_back(model_from_name(name));
  }
  if (!flags.out_dir.empty()) cfg.output.dir = flags.out_dir;
  if (!flags.format.empty()) {
    cfg.output.csv = flags.format != "svg";
    cfg.output.svg = flags.format != "csv";
  }
  if (flags.jobs > 0) cfg.output.jobs = flags.jobs;
  return cfg;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << contents;
  if (!out) throw IoError("write failed: " + path.string());
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.output.dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir.string());
  return dir;
}

int run_sweep(const CommonFlags& flags) {
  RunConfig cfg = resolve_config(flags);
  const fs::path dir = prepare_out_dir(cfg);

  std::vector<RegionMap> maps;
  maps.reserve(cfg.output.models.size());
  for (ModelKind model : cfg.output.models) {
    maps.push_back(
        run_grid(model, cfg.grid, cfg.robot, cfg.sim, cfg.policy, cfg.output.jobs));
    const RegionMap& map = maps.back();
    if (cfg.output.csv) {
      std::ostringstream s;
      write_region_csv(s, map);
      write_file(dir / (std::string("region_") + model_name(model) + ".csv"), s.str());
    }
    if (cfg.output.svg) {
      std::ostringstream s;
      write_region_svg(s, map);
      write_file(dir / (std::string("region_") + model_name(model) + ".svg"), s.str());
    }
  }

  const SweepSummary summary = summarize(maps);
  if (cfg.output.csv) {
    std::ostringstream s;
    write_summary_csv(s, summary);
    write_file(dir / "summary.csv", s.str());
  }
  print_summary_table(std::cout, summary);
  return 0;
}

int run_trace(const CommonFlags& flags, double x0, double v0) {
  RunConfig cfg = resolve_config(flags);
  if (cfg.output.models.size() != 1)
    throw ConfigError("trace needs exactly one --model", "model", 0);
  const ModelKind model = cfg.output.models.front();
  if (!std::isfinite(x0) || !std::isfinite(v0))
    throw ConfigError("x0 and v0 must be finite", "x0", 0);

  const fs::path dir = prepare_out_dir(cfg);
  const ModelState initial = initial_state_for(model, x0, v0, cfg.robot);
  const auto [label, attempts] = classify(model, initial, cfg.robot, cfg.sim, cfg.policy);

  std::ostringstream s;
  write_trace_csv(s, model, attempts.back(), label);
  write_file(dir / (std::string("trace_") + model_name(model) + ".csv"), s.str());
  std::cout << model_name(model) << " (" << format_g9(x0) << ", " << format_g9(v0)
            << ") -> " << label_name(label) << '\n';
  return 0;
}

int run_walk(const CommonFlags& flags, int steps) {
  RunConfig cfg = resolve_config(flags);
  if (cfg.output.models.size() > 1 &&
      cfg.output.models.size() == kAllModels.size()) {
    cfg.output.models = {ModelKind::LIPM};  // default selection means LIPM
  }
  if (cfg.output.models.size() != 1)
    throw ConfigError("walk needs exactly one --model", "model", 0);
  const ModelKind model = cfg.output.models.front();

  const fs::path dir = prepare_out_dir(cfg);
  const WalkResult walk =
      generate_walk(model, steps, cfg.step, cfg.swing, cfg.robot, cfg.sim.dt);
  std::ostringstream s;
  write_walk_csv(s, walk);
  write_file(dir / (std::string("walk_") + model_name(model) + ".csv"), s.str());
  std::cout << "walked " << steps << " step(s) with " << model_name(model);
  if (walk.com_iterations > 0)
    std::cout << " (swing coupling converged in " << walk.com_iterations
              << " iterations)";
  std::cout << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simplified humanoid balance models: push-recovery region sweeps"};
  app.require_subcommand(1);

  CommonFlags sweep_flags, trace_flags, walk_flags;
  double x0 = 0.0, v0 = 0.0;
  int steps = 1;

  CLI::App* sweep = app.add_subcommand("sweep", "classify a grid of initial states per model");
  add_common(sweep, sweep_flags);

  CLI::App* trace = app.add_subcommand("trace", "time series of a single recovery run");
  add_common(trace, trace_flags);
  trace->add_option("--x0", x0, "initial COM offset (m)")->required();
  trace->add_option("--v0", v0, "initial COM velocity (m/s)")->required();

  CLI::App* walk = app.add_subcommand("walk", "nominal walking trajectories");
  add_common(walk, walk_flags);
  walk->add_option("--steps", steps, "number of steps")->required()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (sweep->parsed()) return run_sweep(sweep_flags);
    if (trace->parsed()) return run_trace(trace_flags, x0, v0);
    if (walk->parsed()) return run_walk(walk_flags, steps);
  } catch (const ConfigError& e) {
    std::cerr << "config error";
    if (e.line > 0) std::cerr << " (line " << e.line << ")";
    std::cerr << " [" << e.key << "]: " << e.what() << '\n';
    return 1;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 2;
  } catch (const NonConvergence& e) {
    std::cerr << "numerical failure: " << e.what() << " (residual " << e.residual
              << " after " << e.iterations << " iterations)\n";
    return 3;
  } catch (const NumericalBlowup& e) {
    std::cerr << "numerical failure: " << e.what() << " at t=" << e.time << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
