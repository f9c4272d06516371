#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string_view>
#include <utility>
#include <vector>

#include "gradflow/operators.hpp"

// GCC otherwise leaves parts of the fused Eigen evaluators out of line, which
// roughly halves kernel throughput.
#if defined(__GNUC__)
#define GRADFLOW_FLATTEN __attribute__((flatten))
#else
#define GRADFLOW_FLATTEN
#endif

namespace gradflow {

/// Evolution law being stepped:
///   Original   ∂t u = Δp u − |∇u|^{p−1}
///   RescaledV  ∂τ v = Δp v − |∇v|^{p−1} + v
///   RescaledW  ∂τ w = (Δp w + y·∇w − (p−1)/(p−2) w)/(1+τ) − |∇w|^{p−1} + w
enum class EquationForm { Original, RescaledV, RescaledW };

constexpr std::string_view to_string(EquationForm form) {
  switch (form) {
    case EquationForm::Original: return "original";
    case EquationForm::RescaledV: return "rescaled_v";
    case EquationForm::RescaledW: return "rescaled_w";
  }
  return "unknown";
}

constexpr FrameTag frame_of(EquationForm form) {
  switch (form) {
    case EquationForm::Original: return FrameTag::Original;
    case EquationForm::RescaledV: return FrameTag::RescaledV;
    case EquationForm::RescaledW: return FrameTag::RescaledW;
  }
  return FrameTag::Original;
}

template <typename Scalar>
struct SolverOptions {
  /// Returned by stable_dt when no term constrains the step (e.g. the zero state).
  Scalar dt_max = Scalar(0.1);
  Scalar safety = Scalar(0.4);
  /// Optional time-dependent value imposed at the left end of a line grid;
  /// without it both line ends are held at zero.
  std::function<Scalar(Scalar)> inflow;
};

template <typename Scalar>
struct StepReport {
  Scalar dt{};
  /// (p−1) max |Du|^{p−2} over the faces touching evolved nodes.
  Scalar max_diffusivity{};
  /// dt / stable_dt, in (0, 1].
  Scalar cfl_margin{};
  /// Change of the finite-volume mass over evolved nodes.
  Scalar mass_change{};
  /// Mass added by clipping negative undershoots to zero.
  Scalar clipped_mass{};
  /// Change of the index of the last node above ε_supp.
  std::ptrdiff_t support_change = 0;
};

/// Values below this are flushed to zero after each step; they sit far below
/// any support threshold and would otherwise decay into subnormals.
inline constexpr double kTailFlush = 1e-150;

template <typename Scalar>
std::ptrdiff_t last_support_index(const Field<Scalar>& values, Scalar threshold) {
  for (std::ptrdiff_t i = values.size() - 1; i >= 0; --i) {
    if (values[i] > threshold) return i;
  }
  return -1;
}

namespace detail {

/// Elementwise |x|^E for array expressions, unrolled for small integers.
template <int E>
struct IntPow {
  template <typename X>
  auto operator()(const X& a) const {
    if constexpr (E == 1) return a;
    else if constexpr (E == 2) return a.square();
    else if constexpr (E == 3) return a.cube();
    else return a.square().square();
  }
};

template <typename Scalar>
struct RealPow {
  Scalar e;
  template <typename X>
  auto operator()(const X& a) const { return a.pow(e); }
};

}  // namespace detail

/// Monotone forward-Euler stepper for one equation form on one grid. Holds the
/// precomputed stencil so repeated steps do not rebuild geometry.
///
/// Nodes [first, last) of the stencil are evolved. The radial origin is
/// handled separately so the remaining nodes form one contiguous block that
/// Eigen evaluates as a single fused, vectorized expression.
template <typename Scalar>
class Stepper {
 public:
  Stepper(const Grid<Scalar>& grid, const ModelParams<Scalar>& params, EquationForm form,
          SolverOptions<Scalar> options = {})
      : grid_(grid),
        params_(params),
        form_(form),
        options_(std::move(options)),
        stencil_(make_stencil(grid, params.dim())),
        flux_pow_(params.p() - Scalar(2)),
        sink_pow_(params.q()) {
    require(options_.safety > Scalar(0) && options_.safety <= Scalar(1), ErrorKind::InvalidArgument,
            "safety factor must lie in (0, 1]");
    require(options_.dt_max > Scalar(0), ErrorKind::InvalidArgument, "dt_max must be positive");
    require(!options_.inflow || !grid.radial(), ErrorKind::InvalidArgument,
            "inflow data needs a line grid");
    block_first_ = std::max<std::ptrdiff_t>(stencil_.first, 1);
    const std::ptrdiff_t k = block_size();
    y_plus_.resize(k);
    y_minus_.resize(k);
    for (std::ptrdiff_t i = stencil_.first; i < stencil_.last; ++i) {
      y_max_ = std::max(y_max_, std::abs(grid.node(i)));
    }
    for (std::ptrdiff_t j = 0; j < k; ++j) {
      const Scalar y = grid.node(block_first_ + j);
      y_plus_[j] = std::max(y, Scalar(0));
      y_minus_[j] = std::min(y, Scalar(0));
    }
    const Scalar p = params.p();
    if (p == Scalar(3)) pow_kind_ = 3;
    else if (p == Scalar(4)) pow_kind_ = 4;
    else if (p == Scalar(5)) pow_kind_ = 5;
  }

  EquationForm form() const { return form_; }
  const Stencil<Scalar>& stencil() const { return stencil_; }
  const SolverOptions<Scalar>& options() const { return options_; }

  /// Largest step keeping every nodal update a nondecreasing function of all
  /// old nodal values:
  ///   dt = safety · min( h² / (2(p−1) |Du|^{p−2} (1 + (N−1)h/max(r,h))) · [1+τ for w],
  ///                      h / (q G^{q−1}),  0.5 for v and w,
  ///                      for w also h(1+τ)/(4|y|) and (1+τ)/(4(p−1)/(p−2)) ),
  /// capped by dt_max, which is also the answer for the zero state.
  GRADFLOW_FLATTEN Scalar stable_dt(const Field<Scalar>& u, Scalar clock) const {
    // Every term vanishes on the zero state, whatever the step.
    if (u.maxCoeff() == Scalar(0)) return options_.dt_max;
    Scalar k_max = Scalar(0), g_max = Scalar(0);
    dispatch([&](auto fp, auto) {
      const auto dl = left_slope(u);
      const auto dr = right_slope(u);
      const std::ptrdiff_t k = block_size();
      if (k > 0) {
        k_max = (fp(dl.abs().max(dr.abs())) * stencil_.cfl_factor.segment(block_first_, k)).maxCoeff();
        g_max = (-dr).max(dl).maxCoeff();
      }
    });
    if (has_origin()) {
      const Scalar d = (u[1] - u[0]) / grid_.h();
      k_max = std::max(k_max, flux_pow_(std::abs(d)) * stencil_.cfl_factor[0]);
      g_max = std::max(g_max, -d);
    }
    g_max = std::max(g_max, Scalar(0));
    const Scalar h = grid_.h();
    const Scalar p = params_.p();
    const Scalar stretch = form_ == EquationForm::RescaledW ? Scalar(1) + clock : Scalar(1);
    Scalar cap = std::numeric_limits<Scalar>::infinity();
    if (k_max > Scalar(0)) cap = std::min(cap, stretch * h * h / (Scalar(2) * (p - Scalar(1)) * k_max));
    if (g_max > Scalar(0)) cap = std::min(cap, h / (params_.q() * flux_pow_(g_max)));
    if (form_ != EquationForm::Original) cap = std::min(cap, Scalar(0.5));
    if (form_ == EquationForm::RescaledW) {
      if (y_max_ > Scalar(0)) cap = std::min(cap, stretch * h / (Scalar(4) * y_max_));
      cap = std::min(cap, stretch / (Scalar(4) * params_.m()));
    }
    return std::min(options_.dt_max, options_.safety * cap);
  }

  /// Right-hand side of the semi-discrete system; zero on boundary nodes.
  GRADFLOW_FLATTEN Field<Scalar> rate(const Field<Scalar>& u, Scalar clock) const {
    Field<Scalar> out = Field<Scalar>::Zero(u.size());
    const std::ptrdiff_t k = block_size();
    if (k > 0) visit_rate(u, clock, [&](const auto& r) { out.segment(block_first_, k) = r; });
    if (has_origin()) out[0] = origin_rate(u, clock);
    return out;
  }

  /// One forward-Euler update; dt must not exceed stable_dt (unchecked here).
  /// With full_report false only dt and clipped mass are filled.
  GRADFLOW_FLATTEN Field<Scalar> advance(const Field<Scalar>& u, Scalar clock, Scalar dt,
                        StepReport<Scalar>* report = nullptr, bool full_report = true) const {
    const std::ptrdiff_t n = grid_.n_cells();
    const std::ptrdiff_t k = block_size();
    Field<Scalar> out = Field<Scalar>::Zero(n + 1);
    if (k > 0) {
      visit_rate(u, clock, [&](const auto& r) {
        out.segment(block_first_, k) = u.segment(block_first_, k) + dt * r;
      });
    }
    if (has_origin()) out[0] = u[0] + dt * origin_rate(u, clock);

    auto evolved = out.segment(stencil_.first, stencil_.last - stencil_.first);
    Scalar clipped = Scalar(0);
    if (evolved.minCoeff() < Scalar(0)) {
      clipped = ((-evolved).max(Scalar(0)) * stencil_.measure.segment(stencil_.first, evolved.size())).sum();
    }
    evolved = (evolved < Scalar(kTailFlush)).select(Scalar(0), evolved);
    if (options_.inflow) out[0] = std::max(Scalar(0), options_.inflow(clock + dt));

    if (report) {
      report->dt = dt;
      report->clipped_mass = clipped;
      if (!full_report) return out;
      const Scalar d_max = ((u.tail(n) - u.head(n)).abs() / grid_.h()).maxCoeff();
      report->max_diffusivity = (params_.p() - Scalar(1)) * flux_pow_(d_max);
      const std::ptrdiff_t e = stencil_.last - stencil_.first;
      report->mass_change =
          (stencil_.measure.segment(stencil_.first, e) * (out.segment(stencil_.first, e) - u.segment(stencil_.first, e)))
              .sum();
      const Scalar thr_old = Scalar(kSupportRelTol) * std::max(Scalar(1), u.maxCoeff());
      const Scalar thr_new = Scalar(kSupportRelTol) * std::max(Scalar(1), out.maxCoeff());
      report->support_change = last_support_index(out, thr_new) - last_support_index(u, thr_old);
    }
    return out;
  }

  /// stable_dt followed by advance with dt = min(dt_cap, stable_dt).
  Field<Scalar> advance_stable(const Field<Scalar>& u, Scalar clock, Scalar dt_cap, Scalar& dt,
                               StepReport<Scalar>* report = nullptr, bool full_report = true) const {
    dt = std::min(dt_cap, stable_dt(u, clock));
    return advance(u, clock, dt, report, full_report);
  }

 private:
  std::ptrdiff_t block_size() const { return stencil_.last - block_first_; }
  bool has_origin() const { return stencil_.first == 0; }

  // Left and right face slopes of every block node, as lazy expressions.
  // Kept as separate calls: bundling them in a pair defeats vectorization.
  auto left_slope(const Field<Scalar>& u) const {
    const std::ptrdiff_t k = block_size();
    return (u.segment(block_first_, k) - u.segment(block_first_ - 1, k)) * (Scalar(1) / grid_.h());
  }
  auto right_slope(const Field<Scalar>& u) const {
    const std::ptrdiff_t k = block_size();
    return (u.segment(block_first_ + 1, k) - u.segment(block_first_, k)) * (Scalar(1) / grid_.h());
  }

  template <typename Visit>
  void dispatch(Visit&& visit) const {
    switch (pow_kind_) {
      case 3: visit(detail::IntPow<1>{}, detail::IntPow<2>{}); break;
      case 4: visit(detail::IntPow<2>{}, detail::IntPow<3>{}); break;
      case 5: visit(detail::IntPow<3>{}, detail::IntPow<4>{}); break;
      default:
        visit(detail::RealPow<Scalar>{params_.p() - Scalar(2)}, detail::RealPow<Scalar>{params_.q()});
    }
  }

  /// Calls visit with the rate expression of the contiguous block.
  template <typename Visit>
  void visit_rate(const Field<Scalar>& u, Scalar clock, Visit&& visit) const {
    dispatch([&](auto fp, auto sp) {
      const std::ptrdiff_t k = block_size();
      const std::ptrdiff_t s = block_first_;
      const auto dl = left_slope(u);
      const auto dr = right_slope(u);
      const auto uc = u.segment(s, k);
      const auto lap = stencil_.c_plus.segment(s, k) * (fp(dr.abs()) * dr) -
                       stencil_.c_minus.segment(s, k) * (fp(dl.abs()) * dl);
      const auto sink = sp((-dr).max(dl).max(Scalar(0)));
      switch (form_) {
        case EquationForm::Original: visit(lap - sink); break;
        case EquationForm::RescaledV: visit(lap - sink + uc); break;
        case EquationForm::RescaledW: {
          // Upwind y·∇w: forward difference where y > 0, backward where y < 0.
          const Scalar inv_stretch = Scalar(1) / (Scalar(1) + clock);
          visit((lap + y_plus_ * dr + y_minus_ * dl - params_.m() * uc) * inv_stretch - sink + uc);
          break;
        }
      }
    });
  }

  /// Rate at the radial origin, where the mirror node u_{−1} = u_1 gives the
  /// upwind gradient max((u_0 − u_1)/h, 0) and y = 0 removes the drift.
  Scalar origin_rate(const Field<Scalar>& u, Scalar clock) const {
    const Scalar d = (u[1] - u[0]) / grid_.h();
    const Scalar lap = stencil_.c_plus[0] * flux_pow_(std::abs(d)) * d;
    const Scalar sink = sink_pow_(std::max(-d, Scalar(0)));
    switch (form_) {
      case EquationForm::Original: return lap - sink;
      case EquationForm::RescaledV: return lap - sink + u[0];
      case EquationForm::RescaledW: return (lap - params_.m() * u[0]) / (Scalar(1) + clock) - sink + u[0];
    }
    return Scalar(0);
  }

  Grid<Scalar> grid_;
  ModelParams<Scalar> params_;
  EquationForm form_;
  SolverOptions<Scalar> options_;
  Stencil<Scalar> stencil_;
  PowerLaw<Scalar> flux_pow_;
  PowerLaw<Scalar> sink_pow_;
  std::ptrdiff_t block_first_ = 1;
  int pow_kind_ = 0;
  Scalar y_max_ = Scalar(0);
  Field<Scalar> y_plus_, y_minus_;
};

namespace detail {

template <typename Scalar>
void require_form(const SolutionState<Scalar>& state, EquationForm form) {
  require(state.tag() == frame_of(form), ErrorKind::InvalidFrame,
          std::string("state in frame ") + std::string(to_string(state.tag())) +
              " cannot be stepped with form " + std::string(to_string(form)));
}

}  // namespace detail

template <typename Scalar>
Scalar stable_dt(const SolutionState<Scalar>& state, EquationForm form,
                 const SolverOptions<Scalar>& options = {}) {
  detail::require_form(state, form);
  return Stepper<Scalar>(state.grid(), state.params(), form, options).stable_dt(state.values(), state.clock());
}

/// Single checked step. Refuses dt above the stability bound rather than
/// sub-stepping.
template <typename Scalar>
std::pair<SolutionState<Scalar>, StepReport<Scalar>> step(const SolutionState<Scalar>& state,
                                                           EquationForm form, Scalar dt,
                                                           const SolverOptions<Scalar>& options = {}) {
  detail::require_form(state, form);
  require(dt > Scalar(0), ErrorKind::InvalidArgument, "dt must be positive");
  const Stepper<Scalar> stepper(state.grid(), state.params(), form, options);
  const Scalar limit = stepper.stable_dt(state.values(), state.clock());
  require(dt <= limit * (Scalar(1) + Scalar(1e-12)), ErrorKind::CflViolation,
          "dt exceeds the monotone stability bound");
  StepReport<Scalar> report;
  Field<Scalar> next = stepper.advance(state.values(), state.clock(), dt, &report);
  report.cfl_margin = dt / limit;
  Frame<Scalar> frame{state.tag(), state.clock() + dt};
  return {SolutionState<Scalar>(frame, state.grid(), std::move(next), state.params()), report};
}

template <typename Scalar>
struct EvolveOptions {
  SolverOptions<Scalar> solver;
  /// Clock values at which the observer fires; steps are truncated to hit them.
  std::vector<Scalar> output_times;
  std::function<void(const SolutionState<Scalar>&)> observer;
};

template <typename Scalar>
struct EvolveStats {
  std::size_t steps = 0;
  Scalar clipped_mass = Scalar(0);
  Scalar min_dt = std::numeric_limits<Scalar>::infinity();
};

template <typename Scalar>
struct EvolveResult {
  SolutionState<Scalar> state;
  EvolveStats<Scalar> stats;
};

/// Repeated stable steps up to t_end. Throws DomainOverflow as soon as the
/// support reaches the node next to a zero-held boundary.
template <typename Scalar>
EvolveResult<Scalar> evolve_detailed(const SolutionState<Scalar>& state, EquationForm form,
                                     Scalar t_end, const EvolveOptions<Scalar>& options = {}) {
  detail::require_form(state, form);
  require(t_end >= state.clock(), ErrorKind::InvalidArgument, "t_end precedes the state clock");
  const Stepper<Scalar> stepper(state.grid(), state.params(), form, options.solver);

  std::vector<Scalar> outputs;
  for (Scalar t : options.output_times) {
    if (t >= state.clock() && t <= t_end) outputs.push_back(t);
  }
  std::sort(outputs.begin(), outputs.end());
  outputs.erase(std::unique(outputs.begin(), outputs.end()), outputs.end());
  std::size_t next_out = 0;

  Field<Scalar> u = state.values();
  Scalar clock = state.clock();
  EvolveStats<Scalar> stats;
  const std::ptrdiff_t n = state.grid().n_cells();
  const bool guard_left = !state.grid().radial() && !options.solver.inflow;

  auto emit = [&] {
    while (next_out < outputs.size() && outputs[next_out] <= clock) {
      if (options.observer) {
        options.observer(SolutionState<Scalar>({state.tag(), clock}, state.grid(), u, state.params()));
      }
      ++next_out;
    }
  };
  emit();

  while (clock < t_end) {
    Scalar target = t_end;
    if (next_out < outputs.size()) target = std::min(target, outputs[next_out]);
    Scalar dt = Scalar(0);
    StepReport<Scalar> report;
    u = stepper.advance_stable(u, clock, target - clock, dt, &report, false);
    const bool lands = clock + dt >= target;
    clock = lands ? target : clock + dt;
    ++stats.steps;
    stats.min_dt = std::min(stats.min_dt, dt);
    stats.clipped_mass += report.clipped_mass;

    // The threshold is at least kSupportRelTol, so the max is only needed
    // when a guard node is already above that.
    const auto near_edge = [&](Scalar floor) { return u[n - 1] > floor || (guard_left && u[1] > floor); };
    if (near_edge(Scalar(kSupportRelTol)) &&
        near_edge(Scalar(kSupportRelTol) * std::max(Scalar(1), u.maxCoeff()))) {
      throw Error(ErrorKind::DomainOverflow, "support reached the outer boundary at clock " +
                                                 std::to_string(static_cast<double>(clock)));
    }
    emit();
  }
  SolutionState<Scalar> final_state({state.tag(), clock}, state.grid(), std::move(u), state.params());
  return {std::move(final_state), stats};
}

template <typename Scalar>
SolutionState<Scalar> evolve(const SolutionState<Scalar>& state, EquationForm form, Scalar t_end,
                             const EvolveOptions<Scalar>& options = {}) {
  return evolve_detailed(state, form, t_end, options).state;
}

}  // namespace gradflow
