// qgraph: runs one experiment sweep from an INI config and writes CSV, JSON
// and gnuplot data files. Exit codes: 0 all criteria passed, 2 a criterion
// failed, 1 usage/config/runtime error.
#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "qgraph/config.hpp"
#include "qgraph/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quantum-graph massive-mode laboratory"};
  app.set_version_flag("--version", std::string(qgraph::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "INI experiment config (see qgraph.reference.ini)")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides QGRAPH_OUT_DIR and run.output_dir)");
  auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides run.seed)");
  app.add_option("--threads", threads, "worker threads (overrides run.threads)")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "print nothing on success");

  for (qgraph::Command c : qgraph::all_commands()) {
    const std::string name(qgraph::to_string(c));
    app.add_subcommand(name, "run the " + name + " experiment");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    qgraph::ExperimentConfig config = config_path.empty() ? qgraph::ExperimentConfig{} : qgraph::load_config(config_path);
    if (const char* env = std::getenv("QGRAPH_OUT_DIR"); env && *env) config.output_dir = env;
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (*seed_opt) config.seed = seed;
    if (threads > 0) config.threads = threads;

    const std::string sub = app.get_subcommands().front()->get_name();
    const qgraph::Command command = *qgraph::parse_command(sub);
    const qgraph::RunReport report = qgraph::run_experiment(command, config);
    if (!quiet || !report.all_passed()) {
      for (const auto& c : report.criteria)
        std::cout << (c.passed ? "PASS" : "FAIL") << "  criterion " << c.number << " (" << c.name << "): " << c.detail
                  << '\n';
      for (const auto& e : report.errors)
        std::cout << "ERROR size " << e.size << " [" << e.code << "]: " << e.message << '\n';
      if (!quiet) std::cout << "wrote " << report.files.size() << " files to " << config.output_dir << '\n';
    }
    return report.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "qgraph: " << e.what() << '\n';
    return 1;
  }
}
