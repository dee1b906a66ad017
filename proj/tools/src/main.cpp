#include <iostream>

#include "CLI11.hpp"
#include "inls/app/app.hpp"
#include "inls/error.hpp"

using namespace inls;

int main(int argc, char** argv) {
  CLI::App cli{"inlslab: blow-up laboratory for the inhomogeneous NLS equation"};
  cli.require_subcommand(1);

  std::string config_path, out_dir, run_dir, series, axis, out_file;
  std::vector<std::string> values;
  int workers = 1;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub, bool need_config) {
    auto* opt = sub->add_option("--config", config_path, "config file (section.key = value)");
    if (need_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides analysis.output)");
    sub->add_option("--workers", workers, "concurrent workers")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "corpus seed (overrides analysis.seed)");
  };

  auto* gs_cmd = cli.add_subcommand("groundstate", "solve the ground state and export it");
  add_common(gs_cmd, false);
  auto* run_cmd = cli.add_subcommand("run", "ground state, evolution and analysis for one config");
  add_common(run_cmd, true);
  auto* sweep_cmd = cli.add_subcommand("sweep", "run one config per value of a scalar key");
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("--axis", axis, "config key, e.g. model.b")->required();
  sweep_cmd->add_option("--values", values, "values (comma separated)")->delimiter(',');
  auto* export_cmd = cli.add_subcommand("export", "write a two-column series from a run directory");
  export_cmd->add_option("--run", run_dir, "run directory")->required();
  export_cmd->add_option("--series", series, "series name")->required();
  export_cmd->add_option("--out", out_file, "output file (default stdout)");
  auto* verify_cmd = cli.add_subcommand("verify", "corpus inequality suite and cutoff certificates");
  add_common(verify_cmd, false);

  CLI11_PARSE(cli, argc, argv);

  try {
    app::RunConfig cfg;
    if (!config_path.empty()) cfg = app::load_config(config_path);
    if (!out_dir.empty()) cfg.analysis.output = out_dir;
    if (seed != 0) cfg.analysis.seed = seed;
    const std::string out = cfg.analysis.output;

    if (*gs_cmd) {
      const auto gs = app::run_groundstate(cfg, out);
      std::cout << "shoot_param = " << gs.shoot_param << "\nsharp_constant = " << gs.sharp_constant
                << "\nresidual = " << gs.residual << "\n";
    } else if (*run_cmd) {
      const auto r = app::run_config(cfg, out, workers);
      std::cout << "termination = " << r.summary.termination << "\nstatus = " << r.summary.status << "\n";
      for (const auto& line : r.trajectory.log) std::cout << "log: " << line << "\n";
    } else if (*sweep_cmd) {
      const auto rows = app::sweep(cfg, axis, values, out, workers);
      std::cout << app::summary_csv(rows, axis);
    } else if (*export_cmd) {
      const std::string text = app::export_series(run_dir, series);
      if (out_file.empty()) {
        std::cout << text;
      } else {
        app::write_text(out_file, text);
      }
    } else if (*verify_cmd) {
      std::string text;
      const bool ok = app::verify(cfg, out, workers, &text);
      std::cout << text;
      return ok ? 0 : 1;
    }
  } catch (const inls::Error& e) {
    std::cerr << "inlslab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "inlslab: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
