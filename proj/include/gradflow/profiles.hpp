#pragma once

#include <cmath>

#include "gradflow/params.hpp"

// Closed-form profiles shared by presets, barriers and diagnostics.

namespace gradflow::profiles {

template <typename Scalar>
Scalar positive_part(Scalar x) {
  return x > Scalar(0) ? x : Scalar(0);
}

/// Sandpile W(y) = ((p−2)/(p−1) (1−|y|)_+)^{(p−1)/(p−2)}.
template <typename Scalar>
Scalar sandpile(Scalar y, const ModelParams<Scalar>& params) {
  using std::abs, std::pow;
  const Scalar s = positive_part(Scalar(1) - abs(y));
  return s > Scalar(0) ? params.wave_amplitude() * pow(s, params.m()) : Scalar(0);
}

/// Explicit wave ((p−2)/(p−1))^m (1+α)^{−1/(p−2)} (K−z)_+^m. For α = 0 this is
/// the speed-one wave; for α > 0 it solves the α-modified profile equation at
/// speed 1/(1+α).
template <typename Scalar>
Scalar separatrix_wave(Scalar z, Scalar K, Scalar alpha, const ModelParams<Scalar>& params) {
  using std::pow;
  const Scalar s = positive_part(K - z);
  if (s == Scalar(0)) return Scalar(0);
  const Scalar damping =
      alpha == Scalar(0) ? Scalar(1) : pow(Scalar(1) + alpha, -Scalar(1) / (params.p() - Scalar(2)));
  return params.wave_amplitude() * damping * pow(s, params.m());
}

/// Largest admissible radius R_p = (p−2)/(2^p (p−1)) of the compact barrier s_{R,T}.
template <typename Scalar>
Scalar lemma_radius_bound(const ModelParams<Scalar>& params) {
  using std::pow;
  const Scalar p = params.p();
  return (p - Scalar(2)) / (pow(Scalar(2), p) * (p - Scalar(1)));
}

/// Smallest admissible time shift T_p = 2(p−1)/(p−2) (2 + 2^{p−1}(N+p−2)).
template <typename Scalar>
Scalar lemma_time_bound(const ModelParams<Scalar>& params) {
  using std::pow;
  const Scalar p = params.p();
  const Scalar n = static_cast<Scalar>(params.dim());
  return Scalar(2) * (p - Scalar(1)) / (p - Scalar(2)) *
         (Scalar(2) + pow(Scalar(2), p - Scalar(1)) * (n + p - Scalar(2)));
}

/// s_{R,T}(τ,x) = (p−2)/(R(p−1)) (T+τ)^m (R² − |x|²/(T+τ)²)_+^m.
template <typename Scalar>
Scalar lemma_subsolution(Scalar R, Scalar T, Scalar tau, Scalar x,
                         const ModelParams<Scalar>& params) {
  using std::pow;
  const Scalar p = params.p();
  const Scalar m = params.m();
  const Scalar shift = T + tau;
  const Scalar inner = positive_part(R * R - (x * x) / (shift * shift));
  if (inner == Scalar(0)) return Scalar(0);
  return (p - Scalar(2)) / (R * (p - Scalar(1))) * pow(shift, m) * pow(inner, m);
}

/// Damped family ϑ((p−2)/(p−1))^m (β(τ+R)/(τ+1) − |y|)_+^m. ϑ = β = 1 gives F_R.
template <typename Scalar>
Scalar damped_supersolution(Scalar R, Scalar theta, Scalar beta, Scalar tau, Scalar y,
                            const ModelParams<Scalar>& params) {
  using std::abs, std::pow;
  const Scalar edge = beta * (tau + R) / (tau + Scalar(1));
  const Scalar s = positive_part(edge - abs(y));
  if (s == Scalar(0)) return Scalar(0);
  return theta * params.wave_amplitude() * pow(s, params.m());
}

/// Start of the subsolution window, τ_2(R,β) = (p−1)/(β(p−2)) − R.
template <typename Scalar>
Scalar damped_window_start(Scalar R, Scalar beta, const ModelParams<Scalar>& params) {
  const Scalar p = params.p();
  return (p - Scalar(1)) / (beta * (p - Scalar(2))) - R;
}

/// Outer radius of the subsolution window, K_{R,β}(τ) = β(τ+R)/(τ+1) − (p−1)/((p−2)(τ+1)).
template <typename Scalar>
Scalar damped_window_radius(Scalar R, Scalar beta, Scalar tau, const ModelParams<Scalar>& params) {
  return beta * (tau + R) / (tau + Scalar(1)) - params.m() / (tau + Scalar(1));
}

}  // namespace gradflow::profiles
