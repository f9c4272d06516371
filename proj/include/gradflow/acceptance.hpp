#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace gradflow::acceptance {

/// One measured quantity against its target. `expected` is the reference value
/// and `tolerance` the allowed distance or bound, as described by `rule`.
struct Check {
  std::string name;
  double measured = 0;
  double expected = 0;
  double tolerance = 0;
  std::string rule;
  bool pass = false;
  std::string note;
};

struct Verdict {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0;

  bool pass() const;
  /// The first check stands for the criterion in the flat JSON fields.
  const Check& headline() const;
};

nlohmann::json to_json(const Check& check);
/// {id, expected, measured, tolerance, pass} plus title, seconds and checks.
nlohmann::json to_json(const Verdict& verdict);

/// One summary line, e.g. "criterion 3  PASS  orbit trichotomy (...)".
std::string summary_line(const Verdict& verdict);

Verdict exact_wave_regression();
Verdict separatrix_identity();
Verdict orbit_trichotomy();
Verdict discrete_comparison();
Verdict residual_signs();
/// Criteria 6, 8 and 9 share one RescaledV bump run.
Verdict expansion_law();
Verdict profile_convergence();
Verdict scaled_bound_ratios();
Verdict growup_exponent();
Verdict sandwich_and_symmetry();
Verdict frame_round_trips();

/// Runs the selected criteria (all when `only` is empty) in numeric order,
/// calling `on_done` after each.
std::vector<Verdict> run(const std::vector<int>& only = {},
                         const std::function<void(const Verdict&)>& on_done = {});

}  // namespace gradflow::acceptance
