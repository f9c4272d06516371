#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "gradflow/profiles.hpp"
#include "gradflow/state.hpp"

namespace gradflow {

/// amplitude · (1 − |x−center|²/R0²)_+². Lipschitz constant 8/(3√3) · amplitude/R0.
template <typename Scalar>
struct BumpData {
  Scalar R0 = Scalar(1);
  Scalar amplitude = Scalar(1);
  Scalar center = Scalar(0);
};

/// Speed-one explicit wave with interface at K. Not compactly supported on the
/// left, so line runs pair it with inflow data at the left end.
template <typename Scalar>
struct ExplicitWaveData {
  Scalar K = Scalar(0);
};

/// The compact barrier s_{R,T}(0, ·).
template <typename Scalar>
struct LemmaSubsolutionData {
  Scalar R{};
  Scalar T{};
};

struct SandpileData {};

/// Piecewise-linear table, zero outside [xs.front(), xs.back()].
template <typename Scalar>
struct TableData {
  std::vector<Scalar> xs;
  std::vector<Scalar> values;
};

template <typename Scalar>
using InitialData = std::variant<BumpData<Scalar>, ExplicitWaveData<Scalar>,
                                 LemmaSubsolutionData<Scalar>, SandpileData, TableData<Scalar>>;

namespace detail {

template <typename Scalar>
Scalar table_lookup(const TableData<Scalar>& table, Scalar x) {
  const auto& xs = table.xs;
  if (xs.empty() || x < xs.front() || x > xs.back()) return Scalar(0);
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.end()) return table.values.back();
  const auto j = static_cast<std::size_t>(it - xs.begin());
  if (j == 0) return table.values.front();
  const Scalar t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return (Scalar(1) - t) * table.values[j - 1] + t * table.values[j];
}

}  // namespace detail

/// Closed-form value of a preset at coordinate x (|x| on radial grids).
template <typename Scalar>
Scalar evaluate_initial(const InitialData<Scalar>& data, Scalar x, const ModelParams<Scalar>& params) {
  return std::visit(
      [&](const auto& d) -> Scalar {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BumpData<Scalar>>) {
          const Scalar s = (x - d.center) / d.R0;
          const Scalar inner = Scalar(1) - s * s;
          return inner > Scalar(0) ? d.amplitude * inner * inner : Scalar(0);
        } else if constexpr (std::is_same_v<T, ExplicitWaveData<Scalar>>) {
          return profiles::separatrix_wave(x, d.K, Scalar(0), params);
        } else if constexpr (std::is_same_v<T, LemmaSubsolutionData<Scalar>>) {
          return profiles::lemma_subsolution(d.R, d.T, Scalar(0), x, params);
        } else if constexpr (std::is_same_v<T, SandpileData>) {
          return profiles::sandpile(x, params);
        } else {
          return detail::table_lookup(d, x);
        }
      },
      data);
}

/// Closed interval [lo, hi] outside which the preset vanishes.
template <typename Scalar>
std::pair<Scalar, Scalar> support_interval(const InitialData<Scalar>& data) {
  return std::visit(
      [](const auto& d) -> std::pair<Scalar, Scalar> {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BumpData<Scalar>>) {
          return {d.center - d.R0, d.center + d.R0};
        } else if constexpr (std::is_same_v<T, ExplicitWaveData<Scalar>>) {
          return {-std::numeric_limits<Scalar>::infinity(), d.K};
        } else if constexpr (std::is_same_v<T, LemmaSubsolutionData<Scalar>>) {
          return {-d.R * d.T, d.R * d.T};
        } else if constexpr (std::is_same_v<T, SandpileData>) {
          return {Scalar(-1), Scalar(1)};
        } else {
          if (d.xs.empty()) return {Scalar(0), Scalar(0)};
          return {d.xs.front(), d.xs.back()};
        }
      },
      data);
}

/// Samples a preset onto a grid. Every preset except the explicit wave must fit
/// strictly inside the mesh so that the outer node carries zero.
template <typename Scalar>
SolutionState<Scalar> sample_initial(const InitialData<Scalar>& data, const Grid<Scalar>& grid,
                                     const ModelParams<Scalar>& params, Frame<Scalar> frame = {}) {
  if (const auto* bump = std::get_if<BumpData<Scalar>>(&data)) {
    require(bump->R0 > Scalar(0) && bump->amplitude >= Scalar(0), ErrorKind::InvalidArgument,
            "bump needs R0 > 0 and amplitude >= 0");
    require(!grid.radial() || bump->center == Scalar(0), ErrorKind::InvalidArgument,
            "radial grids need a centred bump");
  }
  if (const auto* s = std::get_if<LemmaSubsolutionData<Scalar>>(&data)) {
    require(s->R > Scalar(0) && s->T > Scalar(0), ErrorKind::InvalidArgument,
            "barrier needs R > 0 and T > 0");
  }
  if (const auto* t = std::get_if<TableData<Scalar>>(&data)) {
    require(t->xs.size() == t->values.size() && t->xs.size() >= 2, ErrorKind::InvalidArgument,
            "table needs matching abscissae and values");
    require(std::is_sorted(t->xs.begin(), t->xs.end()), ErrorKind::InvalidArgument,
            "table abscissae must increase");
    for (Scalar v : t->values)
      require(v >= Scalar(0), ErrorKind::InvalidArgument, "table values must be >= 0");
  }

  const auto [lo, hi] = support_interval(data);
  const bool wave = std::holds_alternative<ExplicitWaveData<Scalar>>(data);
  require(!wave || !grid.radial(), ErrorKind::InvalidArgument,
          "explicit wave data needs a line grid");
  if (grid.radial()) {
    require(std::max(std::abs(lo), std::abs(hi)) < grid.x_max(), ErrorKind::DomainTooSmall,
            "preset support exceeds r_max");
  } else {
    require(hi < grid.x_max() && (wave || lo > grid.x_min()), ErrorKind::DomainTooSmall,
            "preset support exceeds the line domain");
  }

  Field<Scalar> values(grid.size());
  for (std::ptrdiff_t i = 0; i < grid.size(); ++i) {
    values[i] = evaluate_initial(data, grid.node(i), params);
  }
  values[grid.n_cells()] = Scalar(0);
  // The left end of a wave run holds inflow data.
  if (!grid.radial() && !wave) values[0] = Scalar(0);
  return SolutionState<Scalar>(frame, grid, std::move(values), params);
}

}  // namespace gradflow
