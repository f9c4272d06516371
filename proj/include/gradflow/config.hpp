#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gradflow/initial_data.hpp"
#include "gradflow/solver.hpp"

namespace gradflow {

enum class Command { Solve, Tw, Acceptance };

std::string_view to_string(Command command);

enum class Preset { Bump, ExplicitWave, LemmaSubsolution, Sandpile, Zero };

std::string_view to_string(Preset preset);

/// Fully validated run description. Every field has a default, so an empty
/// configuration is valid.
struct RunConfig {
  Command command = Command::Solve;
  double p = 3.0;
  int N = 1;
  EquationForm form = EquationForm::RescaledV;

  GridKind grid = GridKind::Radial;
  std::ptrdiff_t grid_cells = 1000;
  double r_max = 10.0;
  /// Left end for line grids; defaults to −r_max.
  std::optional<double> x_min;

  Preset preset = Preset::Bump;
  double R0 = 1.0;
  double amplitude = 1.0;
  double center = 0.0;
  double R = 0.0;  // lemma_subsolution radius; 0 picks R_p
  double T = 0.0;  // lemma_subsolution shift; 0 picks T_p

  double t_end = 5.0;
  /// Observer times; empty means `samples` evenly spaced times up to t_end.
  std::vector<double> output_times;
  int samples = 50;
  /// Write one nodal snapshot per output time.
  bool snapshots = true;

  // Traveling-wave command.
  double c = 1.0;
  double alpha = 0.0;
  double K = 0.0;
  double z_extent = 10.0;

  /// Acceptance criteria to run; empty means all.
  std::vector<int> only;

  std::filesystem::path out = "gradflow_out";

  ModelParams<double> params() const { return ModelParams<double>(p, N); }
  Grid<double> make_grid() const;
  InitialData<double> initial_data() const;
  std::vector<double> resolved_output_times() const;

  /// Canonical key=value rendering; the basis of hash().
  std::string canonical() const;
  /// Hex digest of canonical(); stamped into every output file.
  std::string hash() const;
};

using KeyValues = std::map<std::string, std::string>;

/// Reads a flat `key = value` file. Blank lines and `#` comments are ignored.
KeyValues read_config_file(const std::filesystem::path& path);
KeyValues parse_key_values(const std::string& text);

/// Applies key/value pairs over the defaults and validates the result. Unknown
/// keys and out-of-range values raise ConfigError naming the key.
RunConfig parse_config(const KeyValues& values);

/// File values overridden by flag values, then GRADFLOW_OUT when set.
RunConfig resolve_config(const KeyValues& file_values, const KeyValues& flag_values);

}  // namespace gradflow
