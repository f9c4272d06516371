#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "gradflow/state.hpp"

namespace gradflow {

template <typename Scalar>
Scalar tau_of_t(Scalar t, const ModelParams<Scalar>& params) {
  require(t >= Scalar(0), ErrorKind::InvalidArgument, "t must be >= 0");
  const Scalar a = params.p() - Scalar(2);
  return std::log1p(a * t) / a;
}

template <typename Scalar>
Scalar t_of_tau(Scalar tau, const ModelParams<Scalar>& params) {
  require(tau >= Scalar(0), ErrorKind::InvalidArgument, "tau must be >= 0");
  const Scalar a = params.p() - Scalar(2);
  return std::expm1(a * tau) / a;
}

template <typename Scalar>
Scalar s_of_tau(Scalar tau) {
  require(tau >= Scalar(0), ErrorKind::InvalidArgument, "tau must be >= 0");
  return std::log1p(tau);
}

template <typename Scalar>
Scalar tau_of_s(Scalar s) {
  require(s >= Scalar(0), ErrorKind::InvalidArgument, "s must be >= 0");
  return std::expm1(s);
}

namespace detail {

template <typename Scalar>
void require_tag(const SolutionState<Scalar>& state, FrameTag tag) {
  require(state.tag() == tag, ErrorKind::InvalidFrame,
          "expected a state in frame " + std::string(to_string(tag)) + ", got " +
              std::string(to_string(state.tag())));
}

/// Piecewise-linear interpolant of nodal values, zero outside the grid. On
/// radial grids x is read as |x|.
template <typename Scalar>
Scalar interpolate(const Grid<Scalar>& grid, const Field<Scalar>& values, Scalar x) {
  if (grid.radial()) x = std::abs(x);
  if (x < grid.x_min() || x > grid.x_max()) return Scalar(0);
  const Scalar s = (x - grid.x_min()) / grid.h();
  auto j = static_cast<std::ptrdiff_t>(std::floor(s));
  j = std::clamp<std::ptrdiff_t>(j, 0, grid.n_cells() - 1);
  const Scalar t = std::clamp(s - static_cast<Scalar>(j), Scalar(0), Scalar(1));
  return (Scalar(1) - t) * values[j] + t * values[j + 1];
}

/// Samples values·scale at x = stretch·y for every node y of target, checking
/// that the source support lies inside the stretched target.
template <typename Scalar>
Field<Scalar> stretch_resample(const SolutionState<Scalar>& src, const Grid<Scalar>& target,
                               Scalar stretch, Scalar scale) {
  require(target.kind() == src.grid().kind(), ErrorKind::GridMismatch,
          "target grid kind differs from the source");
  const auto& g = src.grid();
  const auto& v = src.values();
  const Scalar thr = src.support_threshold();
  for (std::ptrdiff_t i = 0; i < g.size(); ++i) {
    if (v[i] <= thr) continue;
    const Scalar y = g.node(i) / stretch;
    require(y >= target.x_min() - Scalar(1e-12) * std::abs(target.x_min()) &&
                y <= target.x_max() * (Scalar(1) + Scalar(1e-12)),
            ErrorKind::DomainTooSmall, "target grid does not cover the support");
  }
  Field<Scalar> out(target.size());
  for (std::ptrdiff_t i = 0; i < target.size(); ++i) {
    out[i] = scale * interpolate(g, v, stretch * target.node(i));
  }
  return out;
}

template <typename Scalar>
Grid<Scalar> scaled_grid(const Grid<Scalar>& grid, Scalar factor) {
  return Grid<Scalar>(grid.kind(), grid.x_min() * factor, grid.x_max() * factor, grid.n_cells());
}

}  // namespace detail

/// v(τ,x) = (1+(p−2)t)^{1/(p−2)} u(t,x).
template <typename Scalar>
SolutionState<Scalar> u_to_v(const SolutionState<Scalar>& u) {
  detail::require_tag(u, FrameTag::Original);
  const auto& params = u.params();
  const Scalar a = params.p() - Scalar(2);
  const Scalar factor = std::pow(Scalar(1) + a * u.clock(), Scalar(1) / a);
  return SolutionState<Scalar>({FrameTag::RescaledV, tau_of_t(u.clock(), params)}, u.grid(),
                               u.values() * factor, params);
}

template <typename Scalar>
SolutionState<Scalar> v_to_u(const SolutionState<Scalar>& v) {
  detail::require_tag(v, FrameTag::RescaledV);
  const auto& params = v.params();
  const Scalar t = t_of_tau(v.clock(), params);
  const Scalar a = params.p() - Scalar(2);
  const Scalar factor = std::pow(Scalar(1) + a * t, -Scalar(1) / a);
  return SolutionState<Scalar>({FrameTag::Original, t}, v.grid(), v.values() * factor, params);
}

/// w(τ,y) = v(τ,(1+τ)y)/(1+τ)^{(p−1)/(p−2)}. Without a target the w-grid is the
/// v-grid scaled by 1/(1+τ), so nodes correspond exactly and no interpolation
/// happens.
template <typename Scalar>
SolutionState<Scalar> v_to_w(const SolutionState<Scalar>& v,
                             const std::optional<Grid<Scalar>>& target = std::nullopt) {
  detail::require_tag(v, FrameTag::RescaledV);
  const Scalar stretch = Scalar(1) + v.clock();
  const Scalar scale = std::pow(stretch, -v.params().m());
  Frame<Scalar> frame{FrameTag::RescaledW, v.clock()};
  if (!target) {
    return SolutionState<Scalar>(frame, detail::scaled_grid(v.grid(), Scalar(1) / stretch),
                                 v.values() * scale, v.params());
  }
  return SolutionState<Scalar>(frame, *target, detail::stretch_resample(v, *target, stretch, scale),
                               v.params());
}

template <typename Scalar>
SolutionState<Scalar> w_to_v(const SolutionState<Scalar>& w,
                             const std::optional<Grid<Scalar>>& target = std::nullopt) {
  detail::require_tag(w, FrameTag::RescaledW);
  const Scalar stretch = Scalar(1) + w.clock();
  const Scalar scale = std::pow(stretch, w.params().m());
  Frame<Scalar> frame{FrameTag::RescaledV, w.clock()};
  if (!target) {
    return SolutionState<Scalar>(frame, detail::scaled_grid(w.grid(), stretch), w.values() * scale,
                                 w.params());
  }
  return SolutionState<Scalar>(
      frame, *target, detail::stretch_resample(w, *target, Scalar(1) / stretch, scale), w.params());
}

template <typename Scalar>
SolutionState<Scalar> v_to_w(const SolutionState<Scalar>& v, const Grid<Scalar>& target) {
  return v_to_w(v, std::optional<Grid<Scalar>>(target));
}

template <typename Scalar>
SolutionState<Scalar> w_to_v(const SolutionState<Scalar>& w, const Grid<Scalar>& target) {
  return w_to_v(w, std::optional<Grid<Scalar>>(target));
}

/// ω(s,y) = w(τ,y) with s = log(1+τ).
template <typename Scalar>
SolutionState<Scalar> w_to_omega(const SolutionState<Scalar>& w) {
  detail::require_tag(w, FrameTag::RescaledW);
  return w.with_frame({FrameTag::LogTime, s_of_tau(w.clock())});
}

template <typename Scalar>
SolutionState<Scalar> omega_to_w(const SolutionState<Scalar>& omega) {
  detail::require_tag(omega, FrameTag::LogTime);
  return omega.with_frame({FrameTag::RescaledW, tau_of_s(omega.clock())});
}

}  // namespace gradflow
