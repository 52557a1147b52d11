#include <iostream>

#include <CLI11.hpp>

#include "exalm/cli.hpp"

namespace {

void add_common(CLI::App* cmd, exalm::RunConfig& rc, std::string& config_path) {
  cmd->add_option("--problem", rc.problem, "catalog problem id");
  cmd->add_option("--config", config_path, "JSON config file");
  cmd->add_option("--out", rc.out_dir, "output directory");
  cmd->add_option("--seed", rc.seed, "seed for audit probes");
}

exalm::RunConfig merge(const std::string& config_path, const exalm::RunConfig& flags,
                       double c0, double tol, const std::string& mode) {
  exalm::RunConfig rc;
  if (!config_path.empty()) rc = exalm::load_run_config(config_path);
  if (!flags.problem.empty()) rc.problem = flags.problem;
  if (flags.out_dir != "out") rc.out_dir = flags.out_dir;
  if (flags.seed != 12345) rc.seed = flags.seed;
  if (c0 > 0) rc.solver_num["c0"] = c0;
  if (tol > 0) rc.solver_num["kkt_tol"] = tol;
  if (!mode.empty()) rc.grad_mode = mode;
  if (rc.problem.empty()) throw std::runtime_error("no problem id given (use --problem or --config)");
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exalm: exact augmented Lagrangian toolkit for constrained variational problems"};
  app.require_subcommand(1);

  exalm::RunConfig flags;
  std::string config_path;
  double c0 = 0.0, tol = 0.0;
  std::string mode;
  std::string suite;

  CLI::App* run = app.add_subcommand("run", "solve one catalog problem");
  add_common(run, flags, config_path);
  run->add_option("--c0", c0, "initial penalty parameter");
  run->add_option("--tol", tol, "KKT residual tolerance");
  run->add_option("--mode", mode, "gradient mode: analytic | fd")
      ->check(CLI::IsMember({"analytic", "fd"}));

  CLI::App* bench = app.add_subcommand("bench", "run a benchmark suite against the oracles");
  bench->add_option("suite", suite, "suite id: all | oc-only | calcvar-only")->required();
  add_common(bench, flags, config_path);

  CLI::App* check = app.add_subcommand("check", "gradient/adjoint/LICQ diagnostics");
  add_common(check, flags, config_path);
  check->add_option("--mode", mode, "gradient mode: analytic | fd")
      ->check(CLI::IsMember({"analytic", "fd"}));

  CLI::App* sweep = app.add_subcommand("sweep", "exactness sweep over penalty parameters");
  add_common(sweep, flags, config_path);
  sweep->add_option("--c0", c0, "initial penalty parameter");
  sweep->add_option("--tol", tol, "KKT residual tolerance");
  sweep->add_option("--mode", mode, "gradient mode: analytic | fd")
      ->check(CLI::IsMember({"analytic", "fd"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(bench)) {
      exalm::RunConfig rc;
      if (!config_path.empty()) rc = exalm::load_run_config(config_path);
      if (flags.out_dir != "out") rc.out_dir = flags.out_dir;
      if (flags.seed != 12345) rc.seed = flags.seed;
      return exalm::cmd_bench(suite, rc);
    }
    exalm::RunConfig rc = merge(config_path, flags, c0, tol, mode);
    if (app.got_subcommand(run)) return exalm::cmd_run(rc);
    if (app.got_subcommand(check)) return exalm::cmd_check(rc);
    if (app.got_subcommand(sweep)) return exalm::cmd_sweep(rc);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
