#include "gradflow/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "gradflow/analysis.hpp"
#include "gradflow/frames.hpp"
#include "gradflow/initial_data.hpp"
#include "gradflow/io.hpp"
#include "gradflow/solver.hpp"
#include "gradflow/travelingwaves.hpp"

namespace gradflow::acceptance {

bool Verdict::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check& Verdict::headline() const {
  require(!checks.empty(), ErrorKind::InvalidArgument, "verdict without checks");
  return checks.front();
}

nlohmann::json to_json(const Check& c) {
  return {{"name", c.name},        {"expected", io::number(c.expected)},
          {"measured", io::number(c.measured)}, {"tolerance", io::number(c.tolerance)},
          {"rule", c.rule},        {"pass", c.pass},
          {"note", c.note}};
}

nlohmann::json to_json(const Verdict& v) {
  const Check& h = v.headline();
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : v.checks) checks.push_back(to_json(c));
  return {{"id", v.id},
          {"title", v.title},
          {"expected", io::number(h.expected)},
          {"measured", io::number(h.measured)},
          {"tolerance", io::number(h.tolerance)},
          {"pass", v.pass()},
          {"seconds", v.seconds},
          {"checks", checks}};
}

std::string summary_line(const Verdict& v) {
  std::ostringstream os;
  os << "criterion " << v.id << (v.id < 10 ? "  " : " ") << (v.pass() ? "PASS" : "FAIL") << "  " << v.title;
  os << "  [";
  for (std::size_t k = 0; k < v.checks.size(); ++k) {
    const auto& c = v.checks[k];
    if (k) os << "; ";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", c.measured);
    os << c.name << '=' << buf << (c.pass ? "" : " (fail)");
  }
  os << "]";
  return os.str();
}

namespace {

using Clock = std::chrono::steady_clock;
using P = ModelParams<double>;

double sq(double x) { return x * x; }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Check at_most(std::string name, double measured, double bound, std::string note = {}) {
  return {std::move(name), measured, bound, 0.0, "measured <= expected", measured <= bound, std::move(note)};
}

Check at_least(std::string name, double measured, double bound, std::string note = {}) {
  return {std::move(name), measured, bound, 0.0, "measured >= expected", measured >= bound, std::move(note)};
}

Check within(std::string name, double measured, double lo, double hi, std::string note = {}) {
  return {std::move(name), measured, 0.5 * (lo + hi), 0.5 * (hi - lo),
          "measured in [" + fmt(lo) + ", " + fmt(hi) + "]", measured >= lo && measured <= hi, std::move(note)};
}

Check near(std::string name, double measured, double expected, double tol, std::string note = {}) {
  return {std::move(name), measured, expected, tol, "|measured - expected| <= tolerance",
          std::abs(measured - expected) <= tol, std::move(note)};
}

Check holds(std::string name, bool ok, std::string note = {}) {
  return {std::move(name), ok ? 1.0 : 0.0, 1.0, 0.0, "property holds", ok, std::move(note)};
}

Field<double> nodes_of(const Grid<double>& g) { return g.nodes(); }

// ---------------------------------------------------------------- criterion 1

struct WaveRun {
  double h = 0, error = 0, edge_error = 0, clipped = 0, mass0 = 0;
  std::size_t steps = 0;
};

// p = 3, K = 0: v(τ,x) = (τ − x)_+² / 4.
double wave_oracle(double tau, double x) { return 0.25 * sq(std::max(tau - x, 0.0)); }

WaveRun wave_run(double h, double tau_end) {
  const P params(3, 1);
  const double xl = -0.25, xr = 5.25;
  const auto n = static_cast<std::ptrdiff_t>(std::lround((xr - xl) / h));
  const auto grid = make_line_grid(xl, xr, n);
  const auto s0 = sample_initial<double>(ExplicitWaveData<double>{0.0}, grid, params, {FrameTag::RescaledV, 0.0});
  EvolveOptions<double> opt;
  opt.solver.inflow = [xl](double tau) { return wave_oracle(tau, xl); };
  const auto r = evolve_detailed(s0, EquationForm::RescaledV, tau_end, opt);
  WaveRun out;
  out.h = grid.h();
  out.steps = r.stats.steps;
  out.clipped = r.stats.clipped_mass;
  out.mass0 = l1_norm(s0);
  for (std::ptrdiff_t i = 0; i < grid.size(); ++i) {
    out.error = std::max(out.error, std::abs(r.state.values()[i] - wave_oracle(tau_end, grid.node(i))));
  }
  const auto edges = support_edges(r.state);
  out.edge_error = edges ? std::abs(edges->second - tau_end) : tau_end;
  return out;
}

// ---------------------------------------------------------------- criterion 6, 8, 9

struct BumpRun {
  NormSeries<double> norms{FrameTag::RescaledV};
  RateSeries<double> origin{SeriesLabel::PointValue, FrameTag::RescaledV};
  double h = 0;
  double clipped = 0, mass0 = 0;
};

const BumpRun& bump_run() {
  static const BumpRun run = [] {
    BumpRun out;
    const P params(3, 1);
    const auto grid = make_grid(GridKind::Radial, 50.0, 4000);
    out.h = grid.h();
    const auto s0 = sample_initial<double>(BumpData<double>{1.0, 1.0, 0.0}, grid, params, {FrameTag::RescaledV, 0.0});
    out.mass0 = l1_norm(s0);
    EvolveOptions<double> opt;
    for (int k = 1; k <= 400; ++k) opt.output_times.push_back(0.1 * k);
    opt.observer = [&](const SolutionState<double>& s) {
      out.norms(s);
      out.origin.push(s.clock(), s.values()[0]);
    };
    const auto r = evolve_detailed(s0, EquationForm::RescaledV, 40.0, opt);
    out.clipped = r.stats.clipped_mass;
    return out;
  }();
  return run;
}

// ---------------------------------------------------------------- criterion 4

std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

/// Random nonnegative profile vanishing on the held boundary nodes, with a
/// random support window so that flat zero regions and sharp edges both occur.
Field<double> random_profile(const Grid<double>& g, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const auto n = g.n_cells();
  Field<double> v = Field<double>::Zero(g.size());
  const auto a = static_cast<std::ptrdiff_t>(U(gen) * n * 0.4);
  const auto b = n - 1 - static_cast<std::ptrdiff_t>(U(gen) * n * 0.4);
  const double scale = std::pow(10.0, -2.0 + 3.0 * U(gen));
  for (std::ptrdiff_t i = a; i <= b; ++i) v[i] = scale * U(gen);
  v[n] = 0;
  if (!g.radial()) v[0] = 0;
  return v;
}

// ---------------------------------------------------------------- criterion 5

/// Nodes of a residual that satisfy `keep`.
template <typename Keep>
std::pair<double, double> residual_extremes(const Field<double>& res, const Grid<double>& g, Keep keep) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::ptrdiff_t i = 0; i < g.size(); ++i) {
    if (!keep(i, g.node(i))) continue;
    lo = std::min(lo, res[i]);
    hi = std::max(hi, res[i]);
  }
  return {lo, hi};
}

template <typename F>
Verdict timed(int id, std::string title, F&& body) {
  const auto t0 = Clock::now();
  Verdict v;
  v.id = id;
  v.title = std::move(title);
  try {
    v.checks = body();
  } catch (const std::exception& e) {
    v.checks.push_back(holds("completed", false, e.what()));
  }
  v.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return v;
}

}  // namespace

Verdict exact_wave_regression() {
  return timed(1, "exact-wave regression", [] {
    const double tau = 5.0;
    const auto fine = wave_run(1e-3, tau);
    const auto coarse = wave_run(2e-3, tau);
    const double order = std::log2(coarse.error / fine.error);
    std::vector<Check> c;
    c.push_back(at_most("sup_error_h1e-3", fine.error, 2e-2, "tau=5, K=0, p=3"));
    c.push_back(at_least("observed_order", order, 0.8,
                         "errors " + fmt(coarse.error) + " (h=2e-3) and " + fmt(fine.error) + " (h=1e-3)"));
    c.push_back(at_most("interface_error_per_time", fine.edge_error / tau, 2 * fine.h,
                        "edge error " + fmt(fine.edge_error) + " after tau=5"));
    c.push_back(at_most("clipped_mass_fraction", fine.clipped / fine.mass0, 1e-10));
    return c;
  });
}

Verdict separatrix_identity() {
  return timed(2, "separatrix identity", [] {
    std::vector<Check> c;
    for (const double alpha : {0.0, 0.2}) {
      const TWParams<double> tw{1.0 / (1.0 + alpha), 3.0, alpha, 0.0};
      const auto orbit = integrate_interface_orbit(tw, 10.0);
      // f = a s², V = 2 a s with a = (1+α)^{-1}/4, hence U = (1+α) V².
      double worst = 0;
      for (std::size_t k = 0; k < orbit.size(); ++k) {
        const double U = orbit.U[k], V = orbit.V[k];
        worst = std::max(worst, std::abs(U - (1 + alpha) * V * V) / std::max(U, 1e-12));
      }
      const std::string tag = alpha == 0 ? "alpha0" : "alpha0.2";
      c.push_back(at_most("relative_residual_" + tag, worst, 1e-6,
                          std::to_string(orbit.size()) + " samples over z extent 10, end " +
                              std::string(to_string(orbit.end))));
      c.push_back(holds("orbit_reached_extent_" + tag, orbit.end == OrbitEnd::Extent));
    }
    return c;
  });
}

Verdict orbit_trichotomy() {
  return timed(3, "orbit trichotomy", [] {
    std::vector<Check> c;
    const auto slow = integrate_interface_orbit(TWParams<double>{0.9, 3.0, 0.0, 0.0}, 50.0);
    const bool hump = slow.z_peak && slow.z_left && *slow.z_left < *slow.z_peak;
    c.push_back(holds("c0.9_v_zero_then_u_zero", hump,
                      hump ? "z_peak " + fmt(*slow.z_peak) + ", z_left " + fmt(*slow.z_left) : "events missing"));
    const auto fast = integrate_interface_orbit(TWParams<double>{1.5, 3.0, 0.0, 0.0}, 50.0);
    bool positive = !fast.escaped();
    for (std::size_t k = 0; k < fast.size(); ++k) positive = positive && fast.U[k] > 0 && fast.V[k] > 0;
    c.push_back(holds("c1.5_no_v_zero", !fast.z_peak.has_value(), "end " + std::string(to_string(fast.end))));
    c.push_back(holds("c1.5_monotone_positive", positive));
    bool signs = true;
    std::string bad;
    for (const double speed : {0.5, 0.9, 1.0, 1.1, 1.5}) {
      for (const double V : {0.5, 1.0, 2.0}) {
        const double s = direction_field_sign(TWParams<double>{speed, 3.0, 0.0, 0.0}, V);
        const int got = (s > 0) - (s < 0);
        const int want = (speed > 1) - (speed < 1);
        if (got != want) {
          signs = false;
          bad += " c=" + fmt(speed) + ",V=" + fmt(V);
        }
      }
    }
    c.push_back(holds("direction_field_sign", signs, bad));
    return c;
  });
}

Verdict discrete_comparison() {
  return timed(4, "discrete comparison principle", [] {
    std::vector<Check> c;
    auto& gen = rng();
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double ps[] = {2.5, 3.0, 3.5, 4.0};
    double worst = -std::numeric_limits<double>::infinity();
    int pairs = 0;
    for (int k = 0; k < 200; ++k) {
      const double p = ps[k % 4];
      const bool radial = (k / 4) % 2 == 0;
      const int dim = radial ? 1 + static_cast<int>(U(gen) * 3) : 1;
      const P params(p, dim);
      const auto grid = radial ? make_grid(GridKind::Radial, 2.0, 48) : make_grid(GridKind::Line, 2.0, 64);
      const Field<double> lo = random_profile(grid, gen);
      Field<double> hi = lo;
      for (std::ptrdiff_t i = 0; i < grid.size(); ++i) {
        if (U(gen) < 0.5) hi[i] += U(gen) * (lo.maxCoeff() + 1e-3);
      }
      hi[grid.n_cells()] = 0;
      if (!radial) hi[0] = 0;
      const double clock = 5 * U(gen);
      for (const auto form : {EquationForm::Original, EquationForm::RescaledV, EquationForm::RescaledW}) {
        const Stepper<double> st(grid, params, form);
        const double dt = std::min(st.stable_dt(lo, clock), st.stable_dt(hi, clock));
        const Field<double> a = st.advance(lo, clock, dt);
        const Field<double> b = st.advance(hi, clock, dt);
        worst = std::max(worst, (a - b).maxCoeff());
      }
      ++pairs;
    }
    c.push_back(at_most("random_pairs_max_violation", worst, 0.0,
                        std::to_string(pairs) + " ordered pairs x 3 forms, shared dt"));

    const P params(3, 1);
    const double R = profiles::lemma_radius_bound(params), T = profiles::lemma_time_bound(params);
    const auto grid = make_grid(GridKind::Radial, 20.0, 2000);
    const double h = grid.h();
    const auto s0 = sample_lemma22_subsolution(R, T, 0.0, grid, params);
    double violation = -std::numeric_limits<double>::infinity();
    EvolveOptions<double> opt;
    for (int k = 1; k <= 20; ++k) opt.output_times.push_back(0.5 * k);
    opt.observer = [&](const SolutionState<double>& v) {
      const auto sub = sample_lemma22_subsolution(R, T, v.clock(), grid, params);
      violation = std::max(violation, check_comparison(sub, v, 5 * h).violation);
    };
    evolve(s0, EquationForm::RescaledV, 10.0, opt);
    c.push_back(at_most("lemma_subsolution_ordering", violation, 5 * h,
                        "R=R_p=" + fmt(R) + ", T=T_p=" + fmt(T) + ", h=" + fmt(h) + ", tau in (0,10]"));
    return c;
  });
}

Verdict residual_signs() {
  return timed(5, "sub/supersolution residual signs", [] {
    std::vector<Check> c;
    const double dtau = 1e-4;
    {
      const P params(3, 1);
      const double R = profiles::lemma_radius_bound(params), T = profiles::lemma_time_bound(params);
      const auto grid = make_grid(GridKind::Radial, 4.0, 400);
      const double h = grid.h();
      double worst = -std::numeric_limits<double>::infinity();
      for (const double tau : {0.0, 1.0, 2.0, 5.0, 10.0}) {
        const std::function<SolutionState<double>(double)> sample = [&](double t) {
          return sample_lemma22_subsolution(R, T, t, grid, params);
        };
        const auto res = discrete_residual(EquationForm::RescaledV, sample, tau, dtau);
        const double edge = R * (T + tau);
        const auto [lo, hi] =
            residual_extremes(res, grid, [&](std::ptrdiff_t, double x) { return std::abs(std::abs(x) - edge) > 2 * h; });
        worst = std::max(worst, hi);
      }
      c.push_back(at_most("lemma_subsolution_residual_max", worst, 5 * h, "tau in {0,1,2,5,10}, h=" + fmt(h)));
    }
    {
      const auto grid = make_grid(GridKind::Radial, 1.5, 300);
      const double h = grid.h();
      const double R = 0.5;
      const P p1(3, 1), p2(3, 2);
      double worst1 = std::numeric_limits<double>::infinity(), worst2 = worst1;
      double excess_dev = 0, excess_min = std::numeric_limits<double>::infinity();
      for (const double tau : {0.0, 1.0, 5.0, 10.0}) {
        const double edge = (tau + R) / (tau + 1);
        const auto residual = [&](const P& params) {
          const std::function<SolutionState<double>(double)> sample = [&](double t) {
            return sample_supersolution_FR(R, t, grid, params);
          };
          return discrete_residual(EquationForm::RescaledW, sample, tau, dtau);
        };
        const Field<double> r1 = residual(p1), r2 = residual(p2);
        const auto away = [&](std::ptrdiff_t, double y) { return std::abs(y) > 2 * h; };
        worst1 = std::min(worst1, residual_extremes(r1, grid, away).first);
        worst2 = std::min(worst2, residual_extremes(r2, grid, away).first);
        const auto F = sample_supersolution_FR(R, tau, grid, p2);
        for (std::ptrdiff_t i = 0; i < grid.size(); ++i) {
          const double y = grid.node(i);
          if (y < 0.1 || y > edge - 0.1) continue;
          const double expected = F.values()[i] / ((1 + tau) * y);
          const double excess = r2[i] - r1[i];
          excess_min = std::min(excess_min, excess);
          excess_dev = std::max(excess_dev, std::abs(excess / expected - 1));
        }
      }
      c.push_back(at_least("FR_residual_min_N1", worst1, -5 * h, "R=0.5, tau in {0,1,5,10}, |y|>2h"));
      c.push_back(at_least("FR_residual_min_N2", worst2, -5 * h));
      c.push_back(at_least("FR_excess_min_N2", excess_min, 0.0, "strict supersolution for N=2"));
      c.push_back(at_most("FR_excess_relative_deviation_N2", excess_dev, 0.1,
                          "excess vs (N-1)F/((1+tau)|y|) on 0.1 <= |y| <= edge-0.1"));
    }
    {
      const P params(3, 1);
      const auto grid = make_grid(GridKind::Radial, 1.5, 300);
      const double h = grid.h();
      const double R = 0.5, theta = 0.1, beta = 0.6, tau = 9.0;
      const std::function<SolutionState<double>(double)> sample = [&](double t) {
        return sample_damped_FRtb(R, theta, beta, t, grid, params).state;
      };
      const auto win = sample_damped_FRtb(R, theta, beta, tau, grid, params).window;
      // K = β(τ+R)/(τ+1) − (p−1)/((p−2)(τ+1)) = 0.6·9.5/10 − 2/10.
      c.push_back(near("damped_window_K", win.K, 0.6 * 9.5 / 10 - 0.2, 1e-12));
      c.push_back(holds("damped_window_tau_ok", win.tau_ok, "tau2=" + fmt(win.tau2)));
      const auto res = discrete_residual(EquationForm::RescaledW, sample, tau, dtau);
      const auto [lo, hi] =
          residual_extremes(res, grid, [&](std::ptrdiff_t, double y) { return y > 0 && y <= win.K; });
      c.push_back(at_most("damped_residual_max", hi, 5 * h, "(R,beta,theta)=(0.5,0.6,0.1), tau=9"));
    }
    return c;
  });
}

Verdict expansion_law() {
  return timed(6, "expansion law", [] {
    const auto& run = bump_run();
    const P params(3, 1);
    const double R1 = 1.0 + 2.0 * 1.0;  // R_0 + (p−1)/(p−2)·‖u_0‖_∞^{(p−2)/(p−1)}
    const auto rep = fit_expansion_rate(run.norms.support, params, R1, 0.8, 1.02, run.h);
    std::vector<Check> c;
    c.push_back(within("support_ratio_tau40", rep.ratio.measured, 0.8, 1.02,
                       "rho(40)=" + fmt(run.norms.support.values().back())));
    c.push_back(holds("ratio_nondecreasing_last_decade", rep.ratio_nondecreasing));
    c.push_back(holds("support_nondecreasing_last_decade", rep.support_nondecreasing));
    c.push_back(at_least("bracket_margin", rep.bracket_margin, 0.0, "min over tau of R1 + tau - rho, R1=3"));
    c.push_back(at_most("clipped_mass_fraction", run.clipped / run.mass0, 1e-10));
    return c;
  });
}

Verdict profile_convergence() {
  return timed(7, "profile convergence", [] {
    std::vector<Check> c;
    const std::vector<double> checkpoints = {10, 30, 100, 300, 1000};
    std::map<int, std::vector<SolutionState<double>>> snaps;
    for (const int dim : {1, 2}) {
      const P params(3, dim);
      const auto grid = make_grid(GridKind::Radial, 1.5, 750);
      const auto s0 = sample_initial<double>(BumpData<double>{0.5, 0.2, 0.0}, grid, params, {FrameTag::RescaledW, 0.0});
      std::vector<double> errs;
      auto& kept = snaps[dim];
      EvolveOptions<double> opt;
      opt.output_times = checkpoints;
      opt.observer = [&](const SolutionState<double>& w) {
        errs.push_back(profile_error(w));
        kept.push_back(w);
      };
      const std::string tag = "_N" + std::to_string(dim);
      std::string stop;
      try {
        evolve(s0, EquationForm::RescaledW, checkpoints.back(), opt);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DomainOverflow) throw;
        stop = e.what();
      }
      std::string trail;
      for (std::size_t k = 0; k < errs.size(); ++k) trail += (k ? ", " : "") + fmt(errs[k]);
      c.push_back(holds("reached_tau1000" + tag, stop.empty(), stop));
      const double last = errs.empty() ? std::numeric_limits<double>::infinity() : errs.back();
      c.push_back(at_most("profile_error_last" + tag, last, 0.1,
                          "at tau=" + fmt(kept.empty() ? 0.0 : kept.back().clock()) + "; checkpoints: " + trail));
      c.push_back(holds("nonincreasing" + tag, is_nonincreasing(errs), trail));
    }
    const std::size_t common = std::min(snaps[1].size(), snaps[2].size());
    const double diff = common ? (snaps[1][common - 1].values() - snaps[2][common - 1].values()).abs().maxCoeff()
                               : std::numeric_limits<double>::infinity();
    c.push_back(at_most("N1_vs_N2_sup_difference", diff, 0.05,
                        "at tau=" + fmt(common ? snaps[1][common - 1].clock() : 0.0)));
    return c;
  });
}

Verdict scaled_bound_ratios() {
  return timed(8, "scaled-bound ratios", [] {
    const auto& run = bump_run();
    const P params(3, 1);
    std::vector<Check> c;
    for (const auto& r : check_scaled_bounds(run.norms, params, 10.0, 2.0)) {
      c.push_back(at_most(r.name + "_last_over_first", r.measured, 2.0, r.note + "; windows [1,10] and [4,40]"));
    }
    return c;
  });
}

Verdict growup_exponent() {
  return timed(9, "grow-up exponent", [] {
    const auto& run = bump_run();
    const P params(3, 1);
    const auto rep = fit_growup_exponent(run.origin, params);
    std::vector<Check> c;
    c.push_back(within("log_slope_last_decade", rep.slope, 0.9 * rep.expected, 1.1 * rep.expected,
                       "least-squares slope of log v(tau,0) vs log tau on [4,40]; epsilon=" + fmt(rep.epsilon) +
                           ", endpoint log v/log tau=" + fmt(rep.endpoint_ratio)));
    return c;
  });
}

Verdict sandwich_and_symmetry() {
  return timed(10, "sandwich and symmetry", [] {
    std::vector<Check> c;
    const P params(3, 1);
    const auto grid = make_grid(GridKind::Line, 16.0, 1600);
    const double h = grid.h();
    const Frame<double> f0{FrameTag::RescaledV, 0.0};
    // Off-centre bump supported in [−0.2, 0.8] ⊂ B(0, 0.8).
    const BumpData<double> data{0.5, 1.0, 0.3};
    const double R0 = 0.8;
    const BumpData<double> minorant{0.25, 0.5, 0.3};  // radial about x0 = 0.3
    const BumpData<double> majorant{1.2, 2.0, 0.0};   // radial about 0
    const auto u0 = sample_initial<double>(data, grid, params, f0);
    const auto lo0 = sample_initial<double>(minorant, grid, params, f0);
    const auto hi0 = sample_initial<double>(majorant, grid, params, f0);
    c.push_back(at_most("initial_ordering", std::max(check_comparison(lo0, u0, 0.0).violation,
                                                     check_comparison(u0, hi0, 0.0).violation),
                        0.0));
    const std::vector<double> times = {2, 5, 10};
    auto collect = [&](const SolutionState<double>& s0) {
      std::vector<SolutionState<double>> out;
      EvolveOptions<double> opt;
      opt.output_times = times;
      opt.observer = [&](const SolutionState<double>& s) { out.push_back(s); };
      evolve(s0, EquationForm::RescaledV, times.back(), opt);
      return out;
    };
    const auto u = collect(u0), lo = collect(lo0), hi = collect(hi0);
    double sym = -std::numeric_limits<double>::infinity(), sandwich = sym;
    std::size_t pairs = 0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      const auto rep = symmetry_inequality_check(u[k], R0, 5 * h);
      sym = std::max(sym, rep.violation);
      pairs += rep.pairs;
      sandwich = std::max({sandwich, check_comparison(lo[k], u[k], 5 * h).violation,
                           check_comparison(u[k], hi[k], 5 * h).violation});
    }
    c.push_back(at_most("symmetry_violation", sym, 5 * h,
                        "R0=0.8, tau in {2,5,10}, " + std::to_string(pairs) + " admissible nodes"));
    c.push_back(at_most("sandwich_violation", sandwich, 5 * h, "minorant at x0=0.3, centred majorant"));
    return c;
  });
}

Verdict frame_round_trips() {
  return timed(11, "frame round-trips", [] {
    std::vector<Check> c;
    double time_err = 0;
    for (const double p : {2.5, 3.0, 4.0}) {
      const P params(p, 1);
      for (const double t : {0.0, 0.1, 10.0, 1e6}) {
        const double back = t_of_tau(tau_of_t(t, params), params);
        time_err = std::max(time_err, t == 0 ? std::abs(back) : std::abs(back / t - 1));
      }
    }
    for (const double tau : {0.0, 0.5, 7.0, 1e4}) {
      const double back = tau_of_s(s_of_tau(tau));
      time_err = std::max(time_err, tau == 0 ? std::abs(back) : std::abs(back / tau - 1));
    }
    c.push_back(at_most("time_maps_relative", time_err, 1e-12));

    const P params(3, 2);
    const auto grid = make_grid(GridKind::Radial, 4.0, 400);
    const auto u = sample_initial<double>(BumpData<double>{1.0, 1.0, 0.0}, grid, params, {FrameTag::Original, 1.7});
    const double scale = u.sup();
    const auto u2 = v_to_u(u_to_v(u));
    c.push_back(at_most("u_v_u_relative", (u2.values() - u.values()).abs().maxCoeff() / scale, 1e-12));

    const auto v = u_to_v(u);
    const auto v2 = w_to_v(v_to_w(v));
    const double grid_err = (nodes_of(v2.grid()) - nodes_of(v.grid())).abs().maxCoeff() / grid.r_max();
    c.push_back(at_most("v_w_v_relative", (v2.values() - v.values()).abs().maxCoeff() / v.sup(), 1e-12));
    c.push_back(at_most("v_w_v_grid_relative", grid_err, 1e-12));

    const auto w = v_to_w(v);
    const auto w2 = omega_to_w(w_to_omega(w));
    c.push_back(at_most("w_omega_w_values", (w2.values() - w.values()).abs().maxCoeff(), 0.0));
    c.push_back(at_most("w_omega_w_clock", std::abs(w2.clock() - w.clock()) / w.clock(), 1e-12));

    // Interpolating path: resample onto an unrelated w-grid and back.
    const auto target = make_grid(GridKind::Radial, 3.0, 333);
    const auto wi = v_to_w(v, std::optional<Grid<double>>(target));
    const auto vi = w_to_v(wi, std::optional<Grid<double>>(grid));
    const double hw = target.h() * (1 + v.clock());
    const double bound = 2 * lipschitz_constant(v) * std::max(hw, grid.h());
    c.push_back(at_most("interpolated_v_w_v", (vi.values() - v.values()).abs().maxCoeff(), bound,
                        "bound 2 Lip max(h_v, (1+tau) h_w)"));
    return c;
  });
}

std::vector<Verdict> run(const std::vector<int>& only, const std::function<void(const Verdict&)>& on_done) {
  using Fn = Verdict (*)();
  const std::vector<std::pair<int, Fn>> all = {
      {1, exact_wave_regression}, {2, separatrix_identity}, {3, orbit_trichotomy},
      {4, discrete_comparison},   {5, residual_signs},      {6, expansion_law},
      {7, profile_convergence},   {8, scaled_bound_ratios}, {9, growup_exponent},
      {10, sandwich_and_symmetry}, {11, frame_round_trips},
  };
  std::vector<Verdict> out;
  for (const auto& [id, fn] : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    out.push_back(fn());
    if (on_done) on_done(out.back());
  }
  return out;
}

}  // namespace gradflow::acceptance
