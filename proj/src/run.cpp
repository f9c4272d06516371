#include "gradflow/run.hpp"

#include <cmath>

#include "gradflow/acceptance.hpp"
#include "gradflow/analysis.hpp"
#include "gradflow/io.hpp"
#include "gradflow/travelingwaves.hpp"

namespace gradflow {
namespace {

using json = nlohmann::json;

json optional_number(const std::optional<double>& x) { return x ? io::number(*x) : json(nullptr); }

int run_solve(const RunConfig& cfg, std::ostream& log) {
  const auto params = cfg.params();
  const auto grid = cfg.make_grid();
  const Frame<double> frame{frame_of(cfg.form), 0.0};
  const auto s0 = sample_initial<double>(cfg.initial_data(), grid, params, frame);

  io::Table norms{{"time", "L1", "Linf", "Lip", "support_radius"}, {}};
  io::Table snaps{{"time", "x", "value"}, {}};
  auto record = [&](const SolutionState<double>& s) {
    norms.add({s.clock(), l1_norm(s), linf_norm(s), lipschitz_constant(s), support_radius(s)});
    if (!cfg.snapshots) return;
    for (std::ptrdiff_t i = 0; i < s.grid().size(); ++i) snaps.add({s.clock(), s.grid().node(i), s.values()[i]});
  };
  record(s0);

  EvolveOptions<double> opt;
  for (double t : cfg.resolved_output_times()) {
    if (t > 0) opt.output_times.push_back(t);
  }
  opt.observer = record;
  if (cfg.preset == Preset::ExplicitWave) {
    const double xl = grid.x_min(), K = cfg.K;
    opt.solver.inflow = [xl, K, params](double tau) { return profiles::separatrix_wave(xl - tau, K, 0.0, params); };
  }
  const auto result = evolve_detailed(s0, cfg.form, cfg.t_end, opt);

  const std::string hash = cfg.hash();
  io::write_csv(cfg.out / "norms.csv", norms, hash);
  if (cfg.snapshots) io::write_csv(cfg.out / "snapshots.csv", snaps, hash);
  io::write_json(cfg.out / "solve_summary.json",
                 {{"config_hash", hash},
                  {"form", std::string(to_string(cfg.form))},
                  {"final_time", result.state.clock()},
                  {"steps", result.stats.steps},
                  {"min_dt", io::number(result.stats.min_dt)},
                  {"clipped_mass", result.stats.clipped_mass},
                  {"final_support_radius", support_radius(result.state)},
                  {"final_sup", result.state.sup()}});
  log << "solve: " << result.stats.steps << " steps to " << to_string(frame.tag) << " clock "
      << io::format_number(result.state.clock()) << ", output in " << cfg.out.string() << '\n';
  return 0;
}

int run_tw(const RunConfig& cfg, std::ostream& log) {
  const TWParams<double> tw{cfg.c, cfg.p, cfg.alpha, cfg.K};
  tw.validate();
  const std::string hash = cfg.hash();
  const auto orbit = integrate_interface_orbit(tw, cfg.z_extent);

  io::Table table{{"z", "U", "V", "event_flag"}, {}};
  for (std::size_t k = 0; k < orbit.size(); ++k) {
    table.add({orbit.z[k], orbit.U[k], orbit.V[k], static_cast<double>(static_cast<int>(orbit.flag[k]))});
  }
  io::write_csv(cfg.out / "orbit.csv", table, hash);

  const auto cp = classify_critical_points(tw);
  json summary = {{"config_hash", hash},
                  {"c", tw.c},
                  {"p", tw.p},
                  {"alpha", tw.alpha},
                  {"K", tw.K},
                  {"separatrix_speed", tw.separatrix_speed()},
                  {"seed_coefficient", interface_seed_coefficient(tw)},
                  {"seed_offset", orbit.delta},
                  {"end", std::string(to_string(orbit.end))},
                  {"samples", orbit.size()},
                  {"z_peak", optional_number(orbit.z_peak)},
                  {"M", optional_number(orbit.M)},
                  {"z_left", optional_number(orbit.z_left)},
                  {"lambda", {cp.lambda1, cp.lambda2}},
                  {"Q1", {cp.Q1[0], cp.Q1[1]}},
                  {"Q2", {cp.Q2[0], cp.Q2[1]}}};

  if (tw.c < tw.separatrix_speed()) {
    try {
      const auto hump = build_hump(tw, cfg.z_extent);
      io::Table ht{{"z", "f"}, {}};
      const int n = 400;
      for (int k = 0; k <= n; ++k) {
        const double z = hump.z_left() + (hump.K() - hump.z_left()) * k / n;
        ht.add({z, hump(z)});
      }
      io::write_csv(cfg.out / "hump.csv", ht, hash);
      summary["hump"] = {{"z_left", hump.z_left()}, {"z_peak", hump.z_peak()}, {"M", hump.M()}};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotAHump) throw;
      summary["hump"] = {{"error", e.what()}};
    }
  }
  if (tw.alpha == 0 && tw.c > 0.5 && tw.c < 1 && tw.K > 0) {
    const auto plateau = build_plateau_subsolution(tw.c, tw.K, tw.p, cfg.N, cfg.z_extent);
    const double t0 = plateau.tau0();
    const double r_end = tw.K + tw.c * (t0 + 10) + 1;
    io::Table pt{{"r", "tau0", "tau0_plus_10"}, {}};
    const int n = 400;
    for (int k = 0; k <= n; ++k) {
      const double r = r_end * k / n;
      pt.add({r, plateau(t0, r), plateau(t0 + 10, r)});
    }
    io::write_csv(cfg.out / "plateau.csv", pt, hash);
    summary["plateau"] = {{"alpha_c", plateau.alpha_c()}, {"tau0", t0}, {"M", plateau.M()}, {"N", cfg.N}};
  }
  io::write_json(cfg.out / "tw_summary.json", summary);
  log << "tw: orbit with " << orbit.size() << " samples, end " << to_string(orbit.end)
      << (orbit.z_peak ? ", V-zero at z=" + io::format_number(*orbit.z_peak) : std::string(", no V-zero")) << '\n';
  return 0;
}

int run_acceptance(const RunConfig& cfg, std::ostream& log) {
  json doc = json::array();
  bool ok = true;
  const auto verdicts = acceptance::run(cfg.only, [&](const acceptance::Verdict& v) {
    log << acceptance::summary_line(v) << std::endl;
    ok = ok && v.pass();
  });
  for (const auto& v : verdicts) doc.push_back(acceptance::to_json(v));
  io::write_json(cfg.out / "acceptance.json", {{"config_hash", cfg.hash()}, {"criteria", doc}});
  return ok ? 0 : 1;
}

}  // namespace

int run(const RunConfig& config, std::ostream& log) {
  try {
    switch (config.command) {
      case Command::Solve: return run_solve(config, log);
      case Command::Tw: return run_tw(config, log);
      case Command::Acceptance: return run_acceptance(config, log);
    }
    return 2;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    try {
      io::write_json(config.out / "error.json", io::error_record(std::string(to_string(e.kind())), e.what(), config.hash()));
    } catch (const std::exception&) {
    }
    return 2;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    try {
      io::write_json(config.out / "error.json", io::error_record("internal", e.what(), config.hash()));
    } catch (const std::exception&) {
    }
    return 2;
  }
}

}  // namespace gradflow
