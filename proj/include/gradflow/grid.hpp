#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string_view>

#include <Eigen/Core>

#include "gradflow/error.hpp"

namespace gradflow {

template <typename Scalar>
using Field = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

enum class GridKind { Line, Radial };

constexpr std::string_view to_string(GridKind kind) {
  return kind == GridKind::Line ? "line" : "radial";
}

/// Uniform mesh. Radial grids cover [0, r_max] with node 0 at the origin; line
/// grids cover [x_min, x_max]. Nodes are indexed 0..n_cells.
template <typename Scalar>
class Grid {
 public:
  Grid(GridKind kind, Scalar x_min, Scalar x_max, std::ptrdiff_t n_cells)
      : kind_(kind), x_min_(x_min), x_max_(x_max), n_cells_(n_cells) {
    require(n_cells >= 2, ErrorKind::InvalidArgument, "grid needs at least 2 cells");
    require(x_max > x_min, ErrorKind::InvalidArgument, "grid extent must be positive");
    require(kind == GridKind::Line || x_min == Scalar(0), ErrorKind::InvalidArgument,
            "radial grids start at r = 0");
    h_ = (x_max - x_min) / static_cast<Scalar>(n_cells);
  }

  GridKind kind() const { return kind_; }
  bool radial() const { return kind_ == GridKind::Radial; }
  Scalar x_min() const { return x_min_; }
  Scalar x_max() const { return x_max_; }
  /// Largest |x| covered by the mesh.
  Scalar r_max() const { return std::max(std::abs(x_min_), std::abs(x_max_)); }
  std::ptrdiff_t n_cells() const { return n_cells_; }
  std::ptrdiff_t size() const { return n_cells_ + 1; }
  Scalar h() const { return h_; }

  Scalar node(std::ptrdiff_t i) const {
    return i == n_cells_ ? x_max_ : x_min_ + static_cast<Scalar>(i) * h_;
  }

  Field<Scalar> nodes() const {
    Field<Scalar> x(size());
    for (std::ptrdiff_t i = 0; i < size(); ++i) x[i] = node(i);
    return x;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  GridKind kind_;
  Scalar x_min_;
  Scalar x_max_;
  std::ptrdiff_t n_cells_;
  Scalar h_{};
};

using Gridd = Grid<double>;

/// Radial grid on [0, r_max] or symmetric line grid on [−r_max, r_max].
template <typename Scalar>
Grid<Scalar> make_grid(GridKind kind, Scalar r_max, std::ptrdiff_t n_cells) {
  require(r_max > Scalar(0), ErrorKind::InvalidArgument, "r_max must be positive");
  require(n_cells >= 2, ErrorKind::InvalidArgument, "n_cells too small");
  return kind == GridKind::Radial ? Grid<Scalar>(kind, Scalar(0), r_max, n_cells)
                                  : Grid<Scalar>(kind, -r_max, r_max, n_cells);
}

/// Asymmetric line grid, used when one end carries inflow data.
template <typename Scalar>
Grid<Scalar> make_line_grid(Scalar x_min, Scalar x_max, std::ptrdiff_t n_cells) {
  return Grid<Scalar>(GridKind::Line, x_min, x_max, n_cells);
}

}  // namespace gradflow
