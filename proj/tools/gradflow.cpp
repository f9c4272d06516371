// Batch front-end: gradflow {solve|tw|acceptance} [--config FILE] [flags]
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gradflow/io.hpp"
#include "gradflow/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Critical gradient-absorption p-Laplacian laboratory"};
  app.require_subcommand(1);
  app.fallthrough();
  auto* solve = app.add_subcommand("solve", "Evolve one initial datum and write norm series and snapshots");
  auto* tw = app.add_subcommand("tw", "Shoot the interface orbit and build hump/plateau barriers");
  auto* accept = app.add_subcommand("acceptance", "Run the acceptance criteria and write verdicts");

  std::string config_file;
  app.add_option("--config", config_file, "Flat key = value file; flags override it");

  // Every flag maps onto the config key of the same name (dashes become underscores).
  struct Flag {
    const char* name;
    const char* key;
    const char* help;
  };
  const std::vector<Flag> flags = {
      {"--p", "p", "Exponent p > 2"},
      {"--N", "N", "Space dimension"},
      {"--q", "q", "Absorption exponent (must equal p-1)"},
      {"--form", "form", "original | rescaled_v | rescaled_w"},
      {"--grid", "grid", "radial | line"},
      {"--grid-cells", "grid_cells", "Number of cells"},
      {"--r-max", "r_max", "Outer radius (line grids: right end)"},
      {"--x-min", "x_min", "Left end of a line grid"},
      {"--preset", "preset", "bump | explicit_wave | lemma_subsolution | sandpile_W | zero"},
      {"--R0", "R0", "Bump support radius"},
      {"--amplitude", "amplitude", "Bump amplitude"},
      {"--center", "center", "Bump centre (line grids)"},
      {"--t-end", "t_end", "Final clock of the chosen form"},
      {"--output-times", "output_times", "Comma-separated observer times"},
      {"--samples", "samples", "Evenly spaced observer times when none are given"},
      {"--snapshots", "snapshots", "Write nodal snapshots (true/false)"},
      {"--c", "c", "Wave speed"},
      {"--alpha", "alpha", "Perturbation coefficient"},
      {"--K", "K", "Interface location"},
      {"--z-extent", "z_extent", "Orbit length in z"},
      {"--only", "only", "Comma-separated acceptance criteria"},
      {"--out", "out", "Output directory (GRADFLOW_OUT overrides)"},
  };
  std::vector<std::string> values(flags.size());
  std::vector<CLI::Option*> options;
  for (std::size_t k = 0; k < flags.size(); ++k) {
    options.push_back(app.add_option(flags[k].name, values[k], flags[k].help));
  }

  CLI11_PARSE(app, argc, argv);

  gradflow::KeyValues flag_values;
  for (std::size_t k = 0; k < flags.size(); ++k) {
    if (options[k]->count()) flag_values[flags[k].key] = values[k];
  }
  if (solve->parsed()) flag_values["command"] = "solve";
  if (tw->parsed()) flag_values["command"] = "tw";
  if (accept->parsed()) flag_values["command"] = "acceptance";

  gradflow::RunConfig config;
  try {
    const auto file_values = config_file.empty() ? gradflow::KeyValues{} : gradflow::read_config_file(config_file);
    config = gradflow::resolve_config(file_values, flag_values);
  } catch (const gradflow::Error& e) {
    std::cerr << gradflow::io::error_record(std::string(gradflow::to_string(e.kind())), e.what(), "").dump() << '\n';
    return 2;
  }
  return gradflow::run(config, std::cout);
}
