#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gradflow/state.hpp"

namespace gradflow {

/// Surface measure |S^{N−1}| of the unit sphere (2 for N = 1).
template <typename Scalar>
Scalar unit_sphere_area(int dim) {
  using std::pow, std::tgamma;
  const Scalar half_n = static_cast<Scalar>(dim) / Scalar(2);
  return Scalar(2) * pow(std::numbers::pi_v<Scalar>, half_n) / Scalar(tgamma(static_cast<double>(half_n)));
}

/// Finite-volume geometry of a grid. The p-Laplacian at node i is
///   L_i = c_plus[i] · F_{i+1/2} − c_minus[i] · F_{i−1/2},   F = |D|^{p−2} D,
/// with D the one-sided difference across the face. On radial grids the
/// coefficients are face areas r^{N−1} over the cell volume, and the face at
/// the origin carries no flux.
template <typename Scalar>
struct Stencil {
  Field<Scalar> c_plus;
  Field<Scalar> c_minus;
  /// 1 + (N−1) h / max(r, h) on radial grids, 1 on line grids.
  Field<Scalar> cfl_factor;
  /// Cell measure (including |S^{N−1}|) used for exact mass bookkeeping.
  Field<Scalar> measure;
  /// Nodes [first, last) are evolved; the rest carry boundary data.
  std::ptrdiff_t first = 0;
  std::ptrdiff_t last = 0;
  Scalar h{};
  bool radial = false;
};

template <typename Scalar>
Stencil<Scalar> make_stencil(const Grid<Scalar>& grid, int dim) {
  using std::pow;
  const std::ptrdiff_t n = grid.n_cells();
  const Scalar h = grid.h();
  Stencil<Scalar> st;
  st.h = h;
  st.radial = grid.radial();
  st.c_plus = Field<Scalar>::Zero(n + 1);
  st.c_minus = Field<Scalar>::Zero(n + 1);
  st.cfl_factor = Field<Scalar>::Ones(n + 1);
  st.measure = Field<Scalar>::Zero(n + 1);
  if (!grid.radial()) {
    st.first = 1;
    st.last = n;
    st.c_plus.setConstant(Scalar(1) / h);
    st.c_minus.setConstant(Scalar(1) / h);
    st.measure.setConstant(h);
    st.measure[0] = st.measure[n] = h / Scalar(2);
    return st;
  }
  st.first = 0;
  st.last = n;
  const Scalar nd = static_cast<Scalar>(dim);
  const Scalar area = unit_sphere_area<Scalar>(dim);
  const Scalar half = h / Scalar(2);
  // Node 0 owns [0, h/2]; node i >= 1 owns [r_i − h/2, r_i + h/2].
  for (std::ptrdiff_t i = 0; i <= n; ++i) {
    const Scalar r = grid.node(i);
    const Scalar lo = i == 0 ? Scalar(0) : r - half;
    const Scalar hi = r + half;
    const Scalar volume = (pow(hi, nd) - pow(lo, nd)) / nd;
    st.measure[i] = area * volume;
    st.c_plus[i] = pow(hi, nd - Scalar(1)) / volume;
    st.c_minus[i] = i == 0 ? Scalar(0) : pow(lo, nd - Scalar(1)) / volume;
    st.cfl_factor[i] = Scalar(1) + (nd - Scalar(1)) * h / std::max(r, h);
  }
  return st;
}

namespace detail {

/// out = |x|^e elementwise, with the integer exponents unrolled.
template <typename Scalar, typename Derived>
Field<Scalar> power(const Eigen::ArrayBase<Derived>& x, const PowerLaw<Scalar>& law) {
  const Scalar e = law.exponent();
  if (e == Scalar(1)) return x;
  if (e == Scalar(2)) return x.square();
  if (e == Scalar(3)) return x.cube();
  if (e == Scalar(4)) return x.square().square();
  return x.pow(e);
}

/// Face slopes of a nodal field. Entry j ≥ 1 is (u_j − u_{j−1})/h, the face
/// between nodes j−1 and j; entry 0 is the face left of node 0, which is the
/// mirror slope −(u_1 − u_0)/h on radial grids and unused on line grids.
template <typename Scalar>
struct Faces {
  Field<Scalar> slope;
  Field<Scalar> abs_slope;
  /// |D|^{p−2}.
  Field<Scalar> diffusivity;
  /// |D|^{p−2} D.
  Field<Scalar> flux;
};

template <typename Scalar>
Faces<Scalar> faces(const Stencil<Scalar>& st, const Field<Scalar>& u, const PowerLaw<Scalar>& flux_pow) {
  const std::ptrdiff_t n = u.size() - 1;
  Faces<Scalar> f;
  f.slope.resize(n + 1);
  f.slope.tail(n) = (u.tail(n) - u.head(n)) / st.h;
  f.slope[0] = st.radial ? -f.slope[1] : Scalar(0);
  f.abs_slope = f.slope.abs();
  f.diffusivity = power(f.abs_slope, flux_pow);
  f.flux = f.diffusivity * f.slope;
  // No flux through the origin.
  if (st.radial) f.flux[0] = Scalar(0);
  return f;
}

/// Discrete p-Laplacian over evolved nodes [first, last):
///   c_plus[i] F_{i+1/2} − c_minus[i] F_{i−1/2}.
template <typename Scalar>
auto laplacian(const Stencil<Scalar>& st, const Faces<Scalar>& f) {
  const std::ptrdiff_t k = st.last - st.first;
  return st.c_plus.segment(st.first, k) * f.flux.segment(st.first + 1, k) -
         st.c_minus.segment(st.first, k) * f.flux.segment(st.first, k);
}

}  // namespace detail

/// Discrete Δp u = div(|∇u|^{p−2}∇u); zero on boundary nodes.
template <typename Scalar>
Field<Scalar> p_laplacian(const SolutionState<Scalar>& state) {
  const auto st = make_stencil(state.grid(), state.params().dim());
  const PowerLaw<Scalar> flux_pow(state.params().p() - Scalar(2));
  const auto f = detail::faces(st, state.values(), flux_pow);
  Field<Scalar> out = Field<Scalar>::Zero(state.grid().size());
  out.segment(st.first, st.last - st.first) = detail::laplacian(st, f);
  return out;
}

/// G_i = max((u_i − u_{i+1})/h, (u_i − u_{i−1})/h, 0). At the radial origin
/// the mirror node stands in for u_{−1}; at line end nodes the single
/// available difference is used.
template <typename Scalar>
Field<Scalar> gradient_magnitude_upwind(const SolutionState<Scalar>& state) {
  const auto& grid = state.grid();
  const auto& u = state.values();
  const std::ptrdiff_t n = grid.n_cells();
  const Scalar h = grid.h();
  Field<Scalar> out(n + 1);
  for (std::ptrdiff_t i = 0; i <= n; ++i) {
    Scalar g = Scalar(0);
    if (i + 1 <= n) g = std::max(g, (u[i] - u[i + 1]) / h);
    if (i >= 1) g = std::max(g, (u[i] - u[i - 1]) / h);
    out[i] = g;
  }
  return out;
}

/// Upwind y·∇w, differenced toward larger |y| (forward for y > 0, backward for
/// y < 0); boundary nodes get 0.
template <typename Scalar>
Field<Scalar> drift_upwind(const SolutionState<Scalar>& state) {
  const auto& grid = state.grid();
  const auto& u = state.values();
  const std::ptrdiff_t n = grid.n_cells();
  const Scalar h = grid.h();
  Field<Scalar> out = Field<Scalar>::Zero(n + 1);
  for (std::ptrdiff_t i = grid.radial() ? 0 : 1; i < n; ++i) {
    const Scalar y = grid.node(i);
    out[i] = y >= Scalar(0) ? y * (u[i + 1] - u[i]) / h : y * (u[i] - u[i - 1]) / h;
  }
  return out;
}

}  // namespace gradflow
