#pragma once

#include <cmath>

#include "gradflow/error.hpp"

namespace gradflow {

/// Exponents of  ∂t u − Δp u + |∇u|^{p−1} = 0  in the critical case q = p − 1.
template <typename Scalar>
class ModelParams {
 public:
  ModelParams(Scalar p, int dim) : p_(p), dim_(dim) {
    require(std::isfinite(static_cast<double>(p)) && p > Scalar(2), ErrorKind::InvalidArgument,
            "p must exceed 2");
    require(dim >= 1, ErrorKind::InvalidArgument, "N must be at least 1");
  }

  Scalar p() const { return p_; }
  int dim() const { return dim_; }

  /// Absorption exponent, always p − 1.
  Scalar q() const { return p_ - Scalar(1); }
  /// (p−1)/(p−2): growth exponent of the rescaled solution and edge exponent of W.
  Scalar m() const { return (p_ - Scalar(1)) / (p_ - Scalar(2)); }
  /// Constant c_p = (p−2)^{1/(p−2)} (p−1)^{(p−1)/(p−2)} in the original-variable limit law.
  Scalar cp() const {
    using std::pow;
    return pow(p_ - Scalar(2), Scalar(1) / (p_ - Scalar(2))) * pow(p_ - Scalar(1), m());
  }
  /// ((p−2)/(p−1))^{(p−1)/(p−2)}, the amplitude of every c = 1 wave and of W.
  Scalar wave_amplitude() const {
    using std::pow;
    return pow((p_ - Scalar(2)) / (p_ - Scalar(1)), m());
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  Scalar p_;
  int dim_;
};

using ModelParamsd = ModelParams<double>;

/// x ↦ x^e for x ≥ 0 with a fast path for small integer exponents, which is the
/// common case p = 3 in every hot loop.
template <typename Scalar>
class PowerLaw {
 public:
  explicit PowerLaw(Scalar exponent) : e_(exponent) {
    const Scalar r = std::round(exponent);
    if (std::abs(exponent - r) == Scalar(0) && r >= Scalar(0) && r <= Scalar(4)) {
      int_e_ = static_cast<int>(r);
    }
  }

  Scalar operator()(Scalar x) const {
    switch (int_e_) {
      case 0: return Scalar(1);
      case 1: return x;
      case 2: return x * x;
      case 3: return x * x * x;
      case 4: { const Scalar x2 = x * x; return x2 * x2; }
      default: return x > Scalar(0) ? std::pow(x, e_) : Scalar(0);
    }
  }

  Scalar exponent() const { return e_; }

 private:
  Scalar e_;
  int int_e_ = -1;
};

}  // namespace gradflow
