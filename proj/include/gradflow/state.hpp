#pragma once

#include <algorithm>
#include <cmath>
#include <string_view>
#include <utility>

#include "gradflow/grid.hpp"
#include "gradflow/params.hpp"

namespace gradflow {

/// Which unknown a state holds: u(t,x), v(τ,x), w(τ,y) or ω(s,y).
enum class FrameTag { Original, RescaledV, RescaledW, LogTime };

constexpr std::string_view to_string(FrameTag tag) {
  switch (tag) {
    case FrameTag::Original: return "original";
    case FrameTag::RescaledV: return "rescaled_v";
    case FrameTag::RescaledW: return "rescaled_w";
    case FrameTag::LogTime: return "log_time";
  }
  return "unknown";
}

template <typename Scalar>
struct Frame {
  FrameTag tag = FrameTag::Original;
  Scalar clock = Scalar(0);

  friend bool operator==(const Frame&, const Frame&) = default;
};

/// Relative threshold below which a nodal value counts as outside the support.
inline constexpr double kSupportRelTol = 1e-12;

/// Frame-tagged nonnegative nodal profile. Immutable once built: solver steps
/// and frame maps return new states.
template <typename Scalar>
class SolutionState {
 public:
  SolutionState(Frame<Scalar> frame, Grid<Scalar> grid, Field<Scalar> values,
                ModelParams<Scalar> params)
      : frame_(frame), grid_(std::move(grid)), values_(std::move(values)), params_(params) {
    require(values_.size() == grid_.size(), ErrorKind::GridMismatch,
            "value count does not match grid nodes");
    require(frame_.clock >= Scalar(0), ErrorKind::InvalidArgument, "frame clock must be >= 0");
    require(values_.allFinite(), ErrorKind::InvalidArgument, "values must be finite");
    require((values_ >= Scalar(0)).all(), ErrorKind::InvalidArgument, "values must be >= 0");
  }

  const Frame<Scalar>& frame() const { return frame_; }
  FrameTag tag() const { return frame_.tag; }
  Scalar clock() const { return frame_.clock; }
  const Grid<Scalar>& grid() const { return grid_; }
  const Field<Scalar>& values() const { return values_; }
  const ModelParams<Scalar>& params() const { return params_; }

  Scalar sup() const { return values_.size() ? values_.maxCoeff() : Scalar(0); }

  /// ε_supp = 1e−12 · max(1, sup u).
  Scalar support_threshold() const {
    return Scalar(kSupportRelTol) * std::max(Scalar(1), sup());
  }

  SolutionState with_values(Field<Scalar> values) const {
    return SolutionState(frame_, grid_, std::move(values), params_);
  }
  SolutionState with_frame(Frame<Scalar> frame) const {
    return SolutionState(frame, grid_, values_, params_);
  }

 private:
  Frame<Scalar> frame_;
  Grid<Scalar> grid_;
  Field<Scalar> values_;
  ModelParams<Scalar> params_;
};

using SolutionStated = SolutionState<double>;

template <typename Scalar>
SolutionState<Scalar> zero_state(const Grid<Scalar>& grid, const ModelParams<Scalar>& params,
                                 Frame<Scalar> frame = {}) {
  return SolutionState<Scalar>(frame, grid, Field<Scalar>::Zero(grid.size()), params);
}

}  // namespace gradflow
