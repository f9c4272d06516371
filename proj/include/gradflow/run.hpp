#pragma once

#include <ostream>

#include "gradflow/config.hpp"

namespace gradflow {

/// Executes one command and writes its artifacts below config.out:
///   solve       norms.csv (time, L1, Linf, Lip, support_radius), snapshots.csv
///   tw          orbit.csv (z, U, V, event_flag), tw_summary.json, hump.csv and
///               plateau.csv when the speed admits them
///   acceptance  acceptance.json, one summary line per criterion on `log`
/// Returns 0 on success, 1 when an acceptance criterion fails and 2 on a
/// compute error, which also leaves error.json behind.
int run(const RunConfig& config, std::ostream& log);

}  // namespace gradflow
