#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gradflow/ode.hpp"
#include "gradflow/profiles.hpp"
#include "gradflow/state.hpp"

// Phase plane of the profile equation
//   −c f′ − (|f′|^{p−2} f′)′ − α |f′|^{p−2} f′ + |f′|^{p−1} − f = 0
// in the variables U = f, V = −f′.

namespace gradflow {

template <typename Scalar>
struct TWParams {
  Scalar c = Scalar(1);
  Scalar p = Scalar(3);
  Scalar alpha = Scalar(0);
  Scalar K = Scalar(0);

  void validate() const {
    require(c > Scalar(0), ErrorKind::InvalidArgument, "wave speed c must be positive");
    require(p > Scalar(2), ErrorKind::InvalidArgument, "p must exceed 2");
    require(alpha >= Scalar(0), ErrorKind::InvalidArgument, "alpha must be >= 0");
    require(std::isfinite(K), ErrorKind::InvalidArgument, "K must be finite");
  }
  Scalar m() const { return (p - Scalar(1)) / (p - Scalar(2)); }
  /// Speed of the explicit separatrix, 1/(1+α).
  Scalar separatrix_speed() const { return Scalar(1) / (Scalar(1) + alpha); }
};

using TWParamsd = TWParams<double>;

template <typename Scalar>
struct PhaseVector {
  Scalar dU{};
  Scalar dV{};
};

/// Desingularized field (after dividing the time by (p−1)|V|^{p−2}):
///   dU/ds = −(p−1)|V|^{p−2} V,   dV/ds = −cV − |V|^{p−1} − α|V|^{p−2}V + U,
/// with dz/ds = (p−1)|V|^{p−2}.
template <typename Scalar>
PhaseVector<Scalar> tw_rhs(Scalar U, Scalar V, const TWParams<Scalar>& tw) {
  using std::abs, std::pow;
  const Scalar a = abs(V);
  const Scalar ap = a == Scalar(0) ? Scalar(0) : pow(a, tw.p - Scalar(2));
  return {-(tw.p - Scalar(1)) * ap * V, -tw.c * V - ap * a - tw.alpha * ap * V + U};
}

/// Jacobian of tw_rhs with respect to (U, V).
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> tw_jacobian(Scalar U, Scalar V, const TWParams<Scalar>& tw) {
  using std::abs, std::pow;
  (void)U;
  const Scalar p = tw.p;
  const Scalar a = abs(V);
  const Scalar ap = a == Scalar(0) ? Scalar(0) : pow(a, p - Scalar(2));
  const Scalar sgn = V > Scalar(0) ? Scalar(1) : (V < Scalar(0) ? Scalar(-1) : Scalar(0));
  Eigen::Matrix<Scalar, 2, 2> J;
  J << Scalar(0), -(p - Scalar(1)) * (p - Scalar(1)) * ap,
      Scalar(1), -tw.c - (p - Scalar(1)) * ap * sgn - tw.alpha * (p - Scalar(1)) * ap;
  return J;
}

template <typename Scalar>
struct CriticalPointReport {
  Eigen::Matrix<Scalar, 2, 1> P = Eigen::Matrix<Scalar, 2, 1>::Zero();
  Eigen::Matrix<Scalar, 2, 2> jacobian_at_P;
  Scalar lambda1{};
  Scalar lambda2{};
  Eigen::Matrix<Scalar, 2, 1> e1;
  Eigen::Matrix<Scalar, 2, 1> e2;
  /// Critical points of the chart at infinity (Z = 1/U), written as (Z, W).
  Eigen::Matrix<Scalar, 2, 1> Q1;
  Eigen::Matrix<Scalar, 2, 1> Q2;
};

template <typename Scalar>
CriticalPointReport<Scalar> classify_critical_points(const TWParams<Scalar>& tw) {
  tw.validate();
  CriticalPointReport<Scalar> r;
  r.jacobian_at_P = tw_jacobian(Scalar(0), Scalar(0), tw);
  r.lambda1 = Scalar(0);
  r.lambda2 = -tw.c;
  r.e1 << tw.c, Scalar(1);
  r.e2 << Scalar(0), Scalar(1);
  const Scalar w = tw.separatrix_speed();
  r.Q1 << Scalar(0), w;
  r.Q2 << Scalar(0), -w;
  return r;
}

/// Closed-form separatrix wave; requires c = 1/(1+α).
template <typename Scalar>
Scalar explicit_wave(Scalar z, const TWParams<Scalar>& tw) {
  tw.validate();
  require(std::abs(tw.c - tw.separatrix_speed()) <= Scalar(1e-12) * tw.c, ErrorKind::InvalidArgument,
          "explicit wave needs c = 1/(1+alpha)");
  const ModelParams<Scalar> mp(tw.p, 1);
  return profiles::separatrix_wave(z, tw.K, tw.alpha, mp);
}

/// −f′ of the explicit wave.
template <typename Scalar>
Scalar explicit_wave_slope(Scalar z, const TWParams<Scalar>& tw) {
  const Scalar s = profiles::positive_part(tw.K - z);
  if (s == Scalar(0)) return Scalar(0);
  return tw.m() * explicit_wave(z, tw) / s;
}

/// Scalar product of the field with the normal (1, −(p−1)V^{p−2}) of the curve
/// U = V^{p−1}: (p−1)(c−1)V^{p−1}. Taken at α = 0.
template <typename Scalar>
Scalar direction_field_sign(const TWParams<Scalar>& tw, Scalar V) {
  require(V > Scalar(0), ErrorKind::InvalidArgument, "direction field sign needs V > 0");
  return (tw.p - Scalar(1)) * (tw.c - Scalar(1)) * std::pow(V, tw.p - Scalar(1));
}

template <typename Scalar>
struct MonotonicitySample {
  Scalar U{};
  Scalar V{};
  /// dV/dU(c2) − dV/dU(c1); empty when V = 0.
  std::optional<Scalar> difference;
  std::optional<Scalar> expected;
};

template <typename Scalar>
struct MonotonicityReport {
  bool pass = true;
  std::size_t skipped = 0;
  std::vector<MonotonicitySample<Scalar>> samples;
};

/// Checks that dV/dU increases with c: the difference at each (U, V) must equal
/// (c2−c1)/((p−1)|V|^{p−2}) and be positive.
template <typename Scalar>
MonotonicityReport<Scalar> c_monotonicity_check(Scalar p, Scalar alpha, Scalar c1, Scalar c2,
                                                const std::vector<std::pair<Scalar, Scalar>>& points) {
  require(c1 <= c2, ErrorKind::InvalidArgument, "c_monotonicity_check needs c1 <= c2");
  MonotonicityReport<Scalar> rep;
  const TWParams<Scalar> a{c1, p, alpha, Scalar(0)};
  const TWParams<Scalar> b{c2, p, alpha, Scalar(0)};
  for (const auto& [U, V] : points) {
    MonotonicitySample<Scalar> s{U, V, std::nullopt, std::nullopt};
    if (V == Scalar(0)) {
      ++rep.skipped;
      rep.samples.push_back(s);
      continue;
    }
    const auto fa = tw_rhs(U, V, a);
    const auto fb = tw_rhs(U, V, b);
    const Scalar diff = fb.dV / fb.dU - fa.dV / fa.dU;
    const Scalar expect = (c2 - c1) / ((p - Scalar(1)) * std::pow(std::abs(V), p - Scalar(2)));
    s.difference = diff;
    s.expected = expect;
    const Scalar tol = Scalar(1e-12) * std::max(Scalar(1), std::abs(expect));
    if (std::abs(diff - expect) > tol) rep.pass = false;
    if (c2 > c1 && V > Scalar(0) && !(diff > Scalar(0))) rep.pass = false;
    rep.samples.push_back(s);
  }
  return rep;
}

enum class OrbitEnd { Extent, UZero, Escaped, StepLimit };

constexpr std::string_view to_string(OrbitEnd e) {
  switch (e) {
    case OrbitEnd::Extent: return "extent";
    case OrbitEnd::UZero: return "u_zero";
    case OrbitEnd::Escaped: return "escaped";
    case OrbitEnd::StepLimit: return "step_limit";
  }
  return "unknown";
}

/// Marker attached to an orbit sample.
enum class OrbitFlag : int { None = 0, Start = 1, VZero = 2, UZero = 3 };

template <typename Scalar>
struct Orbit {
  TWParams<Scalar> params;
  Scalar delta{};
  /// Samples ordered by decreasing z, starting next to the interface.
  std::vector<Scalar> z, U, V;
  std::vector<OrbitFlag> flag;
  std::optional<Scalar> z_peak;  // first V-zero crossing
  std::optional<Scalar> M;       // U at z_peak
  std::optional<Scalar> z_left;  // first U-zero crossing after the peak
  OrbitEnd end = OrbitEnd::Extent;

  std::size_t size() const { return z.size(); }
  bool escaped() const { return end == OrbitEnd::Escaped || end == OrbitEnd::StepLimit; }
};

template <typename Scalar>
struct OrbitOptions {
  Scalar rtol = Scalar(1e-9);
  /// U and V start near 1e−13, so control is effectively relative.
  Scalar atol = Scalar(1e-30);
  /// Relative seed offset; the seed sits at z = K − delta_rel·max(1,|K|).
  Scalar delta_rel = Scalar(1e-6);
  Scalar escape = Scalar(1e12);
  std::size_t max_steps = 2'000'000;
};

/// Leading-order coefficient a of f ≈ a (K−z)^m at the interface,
/// a = c^{1/(p−2)} ((p−2)/(p−1))^m.
template <typename Scalar>
Scalar interface_seed_coefficient(const TWParams<Scalar>& tw) {
  using std::pow;
  return pow(tw.c, Scalar(1) / (tw.p - Scalar(2))) * pow((tw.p - Scalar(2)) / (tw.p - Scalar(1)), tw.m());
}

/// Shoots the interface orbit backward in z from K − δ down to K − z_extent,
/// stopping early at the first U-zero crossing or on blow-up.
template <typename Scalar>
Orbit<Scalar> integrate_interface_orbit(const TWParams<Scalar>& tw, Scalar z_extent,
                                        const OrbitOptions<Scalar>& opt = {}) {
  using std::abs, std::pow;
  tw.validate();
  require(z_extent > Scalar(0), ErrorKind::InvalidArgument, "z_extent must be positive");
  using V3 = ode::Vec<Scalar, 3>;
  const Scalar m = tw.m();
  const Scalar delta = opt.delta_rel * std::max(Scalar(1), abs(tw.K));
  require(delta < z_extent, ErrorKind::InvalidArgument, "z_extent must exceed the seed offset");
  const Scalar a = interface_seed_coefficient(tw);
  V3 y0;
  y0 << tw.K - delta, a * pow(delta, m), a * m * pow(delta, m - Scalar(1));

  // Independent variable σ = −s, so the field is negated.
  auto rhs = [&tw](Scalar, const V3& y) {
    const auto f = tw_rhs(y[1], y[2], tw);
    const Scalar av = abs(y[2]);
    V3 out;
    out << -(tw.p - Scalar(1)) * (av == Scalar(0) ? Scalar(0) : pow(av, tw.p - Scalar(2))), -f.dU, -f.dV;
    return out;
  };
  const Scalar z_stop = tw.K - z_extent;
  const Scalar escape = opt.escape;
  std::vector<ode::Event<Scalar, 3>> events{
      {[](Scalar, const V3& y) { return y[2]; }, false, -1},
      {[](Scalar, const V3& y) { return y[1]; }, true, -1},
      {[z_stop](Scalar, const V3& y) { return y[0] - z_stop; }, true, -1},
      {[escape](Scalar, const V3& y) { return escape - std::max(abs(y[1]), abs(y[2])); }, true, -1},
  };
  ode::Options<Scalar> o;
  o.rtol = opt.rtol;
  o.atol = opt.atol;
  o.max_steps = opt.max_steps;
  const auto sol = ode::integrate(rhs, Scalar(0), y0, std::numeric_limits<Scalar>::max() / Scalar(4), o,
                                  events);

  Orbit<Scalar> orbit;
  orbit.params = tw;
  orbit.delta = delta;
  auto push = [&](const V3& y, OrbitFlag f) {
    orbit.z.push_back(y[0]);
    orbit.U.push_back(y[1]);
    orbit.V.push_back(y[2]);
    orbit.flag.push_back(f);
  };
  std::size_t next_event = 0;
  push(sol.y.front(), OrbitFlag::Start);
  // Accepted samples with event points spliced in by time.
  for (std::size_t k = 1; k < sol.t.size(); ++k) {
    while (next_event < sol.events.size() && sol.events[next_event].t < sol.t[k]) {
      const auto& ev = sol.events[next_event++];
      if (ev.index == 0) push(ev.y, OrbitFlag::VZero);
    }
    const bool u_zero = k + 1 == sol.t.size() && sol.status == ode::Status::Terminated &&
                        sol.events.back().index == 1;
    const OrbitFlag f = u_zero ? OrbitFlag::UZero : OrbitFlag::None;
    push(sol.y[k], f);
  }

  for (const auto& ev : sol.events) {
    if (ev.index == 0 && !orbit.z_peak) {
      orbit.z_peak = ev.y[0];
      orbit.M = ev.y[1];
    }
  }
  switch (sol.status) {
    case ode::Status::Terminated: {
      const auto idx = sol.events.back().index;
      if (idx == 1) {
        orbit.end = OrbitEnd::UZero;
        orbit.z_left = sol.events.back().y[0];
        orbit.U.back() = Scalar(0);
      } else if (idx == 3) {
        orbit.end = OrbitEnd::Escaped;
      } else {
        orbit.end = OrbitEnd::Extent;
      }
      break;
    }
    case ode::Status::Escaped: orbit.end = OrbitEnd::Escaped; break;
    case ode::Status::StepLimit: orbit.end = OrbitEnd::StepLimit; break;
    case ode::Status::Completed: orbit.end = OrbitEnd::Extent; break;
  }
  return orbit;
}

/// Positive arch of a sub-separatrix orbit, zero outside [z_left, K].
template <typename Scalar>
class HumpProfile {
 public:
  HumpProfile() = default;
  HumpProfile(TWParams<Scalar> tw, Scalar z_left, Scalar z_peak, Scalar M, std::vector<Scalar> z,
              std::vector<Scalar> f, std::vector<Scalar> slope, Scalar seed_coefficient)
      : tw_(tw),
        z_left_(z_left),
        z_peak_(z_peak),
        M_(M),
        z_(std::move(z)),
        f_(std::move(f)),
        slope_(std::move(slope)),
        a_(seed_coefficient) {}

  const TWParams<Scalar>& params() const { return tw_; }
  Scalar K() const { return tw_.K; }
  Scalar z_left() const { return z_left_; }
  Scalar z_peak() const { return z_peak_; }
  Scalar M() const { return M_; }
  /// Samples in increasing z; slope is f′ = −V.
  const std::vector<Scalar>& z() const { return z_; }
  const std::vector<Scalar>& f() const { return f_; }
  const std::vector<Scalar>& slope() const { return slope_; }

  /// Cubic Hermite interpolant of the orbit, with the seed law a(K−z)^m on
  /// the last gap before the interface.
  Scalar operator()(Scalar z) const {
    if (z <= z_left_ || z >= tw_.K) return Scalar(0);
    if (z >= z_.back()) return a_ * std::pow(tw_.K - z, tw_.m());
    auto it = std::upper_bound(z_.begin(), z_.end(), z);
    const auto j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - z_.begin()));
    const Scalar z0 = z_[j - 1], z1 = z_[j];
    const Scalar dz = z1 - z0;
    const Scalar t = (z - z0) / dz;
    const Scalar t2 = t * t, t3 = t2 * t;
    const Scalar h00 = Scalar(2) * t3 - Scalar(3) * t2 + Scalar(1);
    const Scalar h10 = t3 - Scalar(2) * t2 + t;
    const Scalar h01 = Scalar(-2) * t3 + Scalar(3) * t2;
    const Scalar h11 = t3 - t2;
    const Scalar v = h00 * f_[j - 1] + h10 * dz * slope_[j - 1] + h01 * f_[j] + h11 * dz * slope_[j];
    return v > Scalar(0) ? v : Scalar(0);
  }

 private:
  TWParams<Scalar> tw_;
  Scalar z_left_{}, z_peak_{}, M_{};
  std::vector<Scalar> z_, f_, slope_;
  Scalar a_{};
};

/// Hump of the sub-separatrix wave with interface at K. Throws NotAHump when the
/// orbit does not show a V-zero and then a U-zero crossing within z_extent.
template <typename Scalar>
HumpProfile<Scalar> build_hump(const TWParams<Scalar>& tw, Scalar z_extent = Scalar(100),
                               const OrbitOptions<Scalar>& opt = {}) {
  tw.validate();
  require(tw.c < tw.separatrix_speed(), ErrorKind::InvalidArgument,
          "hump needs c < 1/(1+alpha)");
  // Shoot with the interface at 0 and shift, so f_{c,K}(z) = f_{c,0}(z−K) exactly.
  TWParams<Scalar> tw0 = tw;
  tw0.K = Scalar(0);
  const auto orbit = integrate_interface_orbit(tw0, z_extent, opt);
  require(orbit.z_peak.has_value() && orbit.z_left.has_value(), ErrorKind::NotAHump,
          "no V-zero then U-zero crossing within the configured extent");
  std::vector<Scalar> z, f, slope;
  z.reserve(orbit.size());
  for (std::size_t k = orbit.size(); k-- > 0;) {
    // Drop repeats (event points can coincide with accepted samples).
    if (!z.empty() && !(orbit.z[k] + tw.K > z.back())) continue;
    z.push_back(orbit.z[k] + tw.K);
    f.push_back(std::max(Scalar(0), orbit.U[k]));
    slope.push_back(-orbit.V[k]);
  }
  return HumpProfile<Scalar>(tw, *orbit.z_left + tw.K, *orbit.z_peak + tw.K, *orbit.M, std::move(z),
                             std::move(f), std::move(slope), interface_seed_coefficient(tw));
}

/// Radial barrier equal to M on |x| < z̃ + cτ and to the hump g(|x| − cτ)
/// outside, built at α_c = (1−c)/(1+c). Valid for τ ≥ τ_0.
template <typename Scalar>
class PlateauSubsolution {
 public:
  PlateauSubsolution(Scalar c, int dim, HumpProfile<Scalar> hump, Scalar z_peak0)
      : c_(c), dim_(dim), hump_(std::move(hump)) {
    const Scalar ac = alpha_c();
    const Scalar n1 = static_cast<Scalar>(dim - 1);
    tau0_ = std::max(Scalar(2) * n1 / ac - Scalar(2) * z_peak0, -z_peak0 / c);
  }

  Scalar c() const { return c_; }
  int dim() const { return dim_; }
  Scalar alpha_c() const { return (Scalar(1) - c_) / (Scalar(1) + c_); }
  Scalar M() const { return hump_.M(); }
  Scalar tau0() const { return tau0_; }
  Scalar K() const { return hump_.K(); }
  const HumpProfile<Scalar>& hump() const { return hump_; }

  Scalar operator()(Scalar tau, Scalar x) const {
    require(tau >= tau0_, ErrorKind::InvalidArgument, "plateau subsolution is defined for tau >= tau_0");
    const Scalar r = std::abs(x);
    if (r < hump_.z_peak() + c_ * tau) return hump_.M();
    return hump_(r - c_ * tau);
  }

 private:
  Scalar c_;
  int dim_;
  HumpProfile<Scalar> hump_;
  Scalar tau0_{};
};

template <typename Scalar>
Scalar plateau_alpha(Scalar c) {
  return (Scalar(1) - c) / (Scalar(1) + c);
}

template <typename Scalar>
PlateauSubsolution<Scalar> build_plateau_subsolution(Scalar c, Scalar K, Scalar p, int dim,
                                                     Scalar z_extent = Scalar(100),
                                                     const OrbitOptions<Scalar>& opt = {}) {
  require(c > Scalar(0.5) && c < Scalar(1), ErrorKind::InvalidArgument, "plateau needs c in (1/2, 1)");
  require(K > Scalar(0), ErrorKind::InvalidArgument, "plateau needs K > 0");
  require(dim >= 1, ErrorKind::InvalidArgument, "dimension must be >= 1");
  const Scalar ac = plateau_alpha(c);
  auto hump = build_hump(TWParams<Scalar>{c, p, ac, K}, z_extent, opt);
  const Scalar z_peak0 = hump.z_peak() - K;
  return PlateauSubsolution<Scalar>(c, dim, std::move(hump), z_peak0);
}

/// s_{R,T}(τ,·) sampled in the RescaledV frame; R ∈ (0, R_p], T ≥ T_p.
template <typename Scalar>
SolutionState<Scalar> sample_lemma22_subsolution(Scalar R, Scalar T, Scalar tau, const Grid<Scalar>& grid,
                                                 const ModelParams<Scalar>& params) {
  const Scalar Rp = profiles::lemma_radius_bound(params);
  const Scalar Tp = profiles::lemma_time_bound(params);
  require(R > Scalar(0) && R <= Rp * (Scalar(1) + Scalar(1e-14)), ErrorKind::InvalidArgument,
          "R must lie in (0, R_p]");
  require(T >= Tp * (Scalar(1) - Scalar(1e-14)), ErrorKind::InvalidArgument, "T must be >= T_p");
  require(tau >= Scalar(0), ErrorKind::InvalidArgument, "tau must be >= 0");
  Field<Scalar> values(grid.size());
  for (std::ptrdiff_t i = 0; i < grid.size(); ++i) {
    values[i] = profiles::lemma_subsolution(R, T, tau, grid.node(i), params);
  }
  return SolutionState<Scalar>({FrameTag::RescaledV, tau}, grid, std::move(values), params);
}

/// Where the damped family is a classical subsolution: τ ≥ τ_2 and
/// 0 < |y| ≤ K_{R,β}(τ); for N ≥ 2 additionally ϑ^{p−2} ≤ (1−β) r_*/(2(N−1)).
template <typename Scalar>
struct DampedWindow {
  Scalar tau2{};
  Scalar K{};
  /// Support edge β(τ+R)/(τ+1).
  Scalar edge{};
  std::optional<Scalar> theta_cap;
  bool tau_ok = false;
  bool theta_ok = true;
};

template <typename Scalar>
struct DampedSample {
  SolutionState<Scalar> state;
  DampedWindow<Scalar> window;
};

/// F_{R,ϑ,β}(τ,·) sampled in the RescaledW frame. r_star is required for N ≥ 2.
template <typename Scalar>
DampedSample<Scalar> sample_damped_FRtb(Scalar R, Scalar theta, Scalar beta, Scalar tau,
                                        const Grid<Scalar>& grid, const ModelParams<Scalar>& params,
                                        std::optional<Scalar> r_star = std::nullopt) {
  require(R > Scalar(0) && R < Scalar(1), ErrorKind::InvalidArgument, "R must lie in (0, 1)");
  require(theta > Scalar(0) && theta <= Scalar(1), ErrorKind::InvalidArgument, "theta must lie in (0, 1]");
  require(beta > Scalar(0.5) && beta <= Scalar(1), ErrorKind::InvalidArgument, "beta must lie in (1/2, 1]");
  require(tau >= Scalar(0), ErrorKind::InvalidArgument, "tau must be >= 0");
  Field<Scalar> values(grid.size());
  for (std::ptrdiff_t i = 0; i < grid.size(); ++i) {
    values[i] = profiles::damped_supersolution(R, theta, beta, tau, grid.node(i), params);
  }
  DampedWindow<Scalar> win;
  win.tau2 = profiles::damped_window_start(R, beta, params);
  win.K = profiles::damped_window_radius(R, beta, tau, params);
  win.edge = beta * (tau + R) / (tau + Scalar(1));
  win.tau_ok = tau >= win.tau2;
  if (params.dim() >= 2) {
    require(r_star.has_value() && *r_star > Scalar(0), ErrorKind::InvalidArgument,
            "N >= 2 needs a positive r_star");
    win.theta_cap = std::pow((Scalar(1) - beta) * *r_star / (Scalar(2) * (params.dim() - 1)),
                             Scalar(1) / (params.p() - Scalar(2)));
    win.theta_ok = theta <= *win.theta_cap;
  }
  return {SolutionState<Scalar>({FrameTag::RescaledW, tau}, grid, std::move(values), params), win};
}

/// F_R = F_{R,1,1}.
template <typename Scalar>
SolutionState<Scalar> sample_supersolution_FR(Scalar R, Scalar tau, const Grid<Scalar>& grid,
                                              const ModelParams<Scalar>& params) {
  require(R > Scalar(0) && R < Scalar(1), ErrorKind::InvalidArgument, "R must lie in (0, 1)");
  require(tau >= Scalar(0), ErrorKind::InvalidArgument, "tau must be >= 0");
  Field<Scalar> values(grid.size());
  for (std::ptrdiff_t i = 0; i < grid.size(); ++i) {
    values[i] = profiles::damped_supersolution(R, Scalar(1), Scalar(1), tau, grid.node(i), params);
  }
  return SolutionState<Scalar>({FrameTag::RescaledW, tau}, grid, std::move(values), params);
}

}  // namespace gradflow
