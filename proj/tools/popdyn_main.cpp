// Command-line front end: run scenario configs or named presets through the
// simulator, the density solver, or both.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "popdyn/cli.hpp"
#include "popdyn/scenario.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
};

void add_common(CLI::App* sub, Options& opts) {
  sub->add_option("config", opts.config_path, "scenario config JSON file");
  sub->add_option("--preset", opts.preset, "named preset instead of a config file");
  sub->add_option("--out", opts.out_dir, "output directory override");
  sub->add_option("--seed", opts.seed, "seed override");
  sub->add_option("--tolerance", opts.tolerance, "comparison tolerance override");
}

using Command = int (*)(const popdyn::scenario::ScenarioConfig&);

int run_command(Command cmd, const Options& opts) {
  namespace scenario = popdyn::scenario;
  if (opts.config_path.empty() == opts.preset.empty()) {
    std::fprintf(stderr, "error: pass exactly one of a config file or --preset\n");
    return 2;
  }
  const auto apply_overrides = [&](scenario::ScenarioConfig cfg, const std::string& label) {
    if (!opts.out_dir.empty()) {
      cfg.out_dir = label.empty() ? opts.out_dir : opts.out_dir + "/" + label;
    }
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.tolerance) cfg.tolerance = *opts.tolerance;
    scenario::validate(cfg);
    return cfg;
  };

  if (!opts.config_path.empty()) {
    return cmd(apply_overrides(scenario::load_config(opts.config_path), ""));
  }
  const scenario::Preset* preset = scenario::find_preset(opts.preset);
  if (preset == nullptr) {
    std::fprintf(stderr, "error: unknown preset '%s' (see --list-presets)\n", opts.preset.c_str());
    return 2;
  }
  int status = 0;
  for (const auto& member : preset->members) {
    if (!member.label.empty()) std::printf("[%s/%s]\n", preset->name.c_str(), member.label.c_str());
    status = std::max(status, cmd(apply_overrides(member.config, member.label)));
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"population learning dynamics: agent-based runs vs. density advection"};
  app.require_subcommand(0, 1);
  bool list_presets = false;
  app.add_flag("--list-presets", list_presets, "print preset names and exit");

  Options opts;
  CLI::App* simulate = app.add_subcommand("simulate", "run the agent-based ensemble");
  CLI::App* solve = app.add_subcommand("solve", "run the density solver");
  CLI::App* compare = app.add_subcommand("compare", "run both and compare the curves");
  add_common(simulate, opts);
  add_common(solve, opts);
  add_common(compare, opts);

  CLI11_PARSE(app, argc, argv);

  if (list_presets) {
    for (const auto& preset : popdyn::scenario::presets()) {
      std::printf("%s\n", preset.name.c_str());
    }
    return 0;
  }

  try {
    if (simulate->parsed()) return run_command(popdyn::cli::cmd_simulate, opts);
    if (solve->parsed()) return run_command(popdyn::cli::cmd_solve, opts);
    if (compare->parsed()) return run_command(popdyn::cli::cmd_compare, opts);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  std::fprintf(stderr, "%s\n", app.help().c_str());
  return 2;
}
