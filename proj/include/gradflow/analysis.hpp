#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gradflow/frames.hpp"
#include "gradflow/profiles.hpp"
#include "gradflow/solver.hpp"

namespace gradflow {

enum class SeriesLabel { L1, Linf, Lip, SupportRadius, ProfileError, PointValue };

constexpr std::string_view to_string(SeriesLabel label) {
  switch (label) {
    case SeriesLabel::L1: return "L1";
    case SeriesLabel::Linf: return "Linf";
    case SeriesLabel::Lip: return "Lip";
    case SeriesLabel::SupportRadius: return "support_radius";
    case SeriesLabel::ProfileError: return "profile_error";
    case SeriesLabel::PointValue: return "point_value";
  }
  return "unknown";
}

template <typename Scalar>
class RateSeries {
 public:
  RateSeries() = default;
  RateSeries(SeriesLabel label, FrameTag tag) : label_(label), tag_(tag) {}

  void push(Scalar clock, Scalar value) {
    require(clocks_.empty() || clock > clocks_.back(), ErrorKind::InvalidArgument,
            "series clocks must increase strictly");
    clocks_.push_back(clock);
    values_.push_back(value);
  }

  SeriesLabel label() const { return label_; }
  FrameTag tag() const { return tag_; }
  const std::vector<Scalar>& clocks() const { return clocks_; }
  const std::vector<Scalar>& values() const { return values_; }
  std::size_t size() const { return clocks_.size(); }
  bool empty() const { return clocks_.empty(); }

 private:
  SeriesLabel label_ = SeriesLabel::L1;
  FrameTag tag_ = FrameTag::RescaledV;
  std::vector<Scalar> clocks_;
  std::vector<Scalar> values_;
};

template <typename Scalar>
struct FitReport {
  std::string name;
  Scalar measured{};
  Scalar expected{};
  Scalar tolerance{};
  Scalar window_lo{};
  Scalar window_hi{};
  Scalar residual{};
  bool pass = false;
  std::string note;
};

/// Largest and smallest node coordinate carrying a value above ε_supp; empty
/// for an identically zero state.
template <typename Scalar>
std::optional<std::pair<Scalar, Scalar>> support_edges(const SolutionState<Scalar>& state) {
  const auto& v = state.values();
  const Scalar thr = state.support_threshold();
  std::ptrdiff_t lo = -1, hi = -1;
  for (std::ptrdiff_t i = 0; i < v.size(); ++i) {
    if (v[i] > thr) {
      if (lo < 0) lo = i;
      hi = i;
    }
  }
  if (lo < 0) return std::nullopt;
  return std::make_pair(state.grid().node(lo), state.grid().node(hi));
}

/// sup{|x| : value > ε_supp} + h/2; 0 for the zero state.
template <typename Scalar>
Scalar support_radius(const SolutionState<Scalar>& state) {
  const auto edges = support_edges(state);
  if (!edges) return Scalar(0);
  return std::max(std::abs(edges->first), std::abs(edges->second)) + state.grid().h() / Scalar(2);
}

/// Trapezoid L1 norm; radial grids weight by |S^{N−1}| r^{N−1}.
template <typename Scalar>
Scalar l1_norm(const SolutionState<Scalar>& state) {
  const auto& g = state.grid();
  const auto& v = state.values();
  const int dim = state.params().dim();
  auto weight = [&](std::ptrdiff_t i) {
    if (!g.radial()) return Scalar(1);
    return unit_sphere_area<Scalar>(dim) * std::pow(g.node(i), static_cast<Scalar>(dim - 1));
  };
  Scalar sum = Scalar(0);
  for (std::ptrdiff_t i = 0; i + 1 < v.size(); ++i) {
    sum += Scalar(0.5) * g.h() * (weight(i) * v[i] + weight(i + 1) * v[i + 1]);
  }
  return sum;
}

template <typename Scalar>
Scalar linf_norm(const SolutionState<Scalar>& state) {
  return state.sup();
}

/// Largest one-sided difference quotient.
template <typename Scalar>
Scalar lipschitz_constant(const SolutionState<Scalar>& state) {
  const auto& v = state.values();
  if (v.size() < 2) return Scalar(0);
  return (v.tail(v.size() - 1) - v.head(v.size() - 1)).abs().maxCoeff() / state.grid().h();
}

/// Observer collecting the norm and support series of a run.
template <typename Scalar>
struct NormSeries {
  RateSeries<Scalar> L1, Linf, Lip, support;

  explicit NormSeries(FrameTag tag = FrameTag::RescaledV)
      : L1(SeriesLabel::L1, tag),
        Linf(SeriesLabel::Linf, tag),
        Lip(SeriesLabel::Lip, tag),
        support(SeriesLabel::SupportRadius, tag) {}

  void operator()(const SolutionState<Scalar>& s) {
    L1.push(s.clock(), l1_norm(s));
    Linf.push(s.clock(), linf_norm(s));
    Lip.push(s.clock(), lipschitz_constant(s));
    support.push(s.clock(), support_radius(s));
  }
};

template <typename Scalar>
NormSeries<Scalar> norm_series(const std::vector<SolutionState<Scalar>>& stream) {
  NormSeries<Scalar> out(stream.empty() ? FrameTag::RescaledV : stream.front().tag());
  for (const auto& s : stream) out(s);
  return out;
}

/// Exponents of the scaled bounds ‖v‖_1 τ^{−a}, ‖v‖_∞ τ^{−b}, Lip τ^{−c}:
/// a = (p(N+1)−2N−1)/(p−2), b = (p−1)/(p−2), c = 1/(p−2).
template <typename Scalar>
Scalar scaled_bound_exponent(SeriesLabel label, const ModelParams<Scalar>& params) {
  const Scalar p = params.p();
  const Scalar n = static_cast<Scalar>(params.dim());
  switch (label) {
    case SeriesLabel::L1: return (p * (n + Scalar(1)) - Scalar(2) * n - Scalar(1)) / (p - Scalar(2));
    case SeriesLabel::Linf: return (p - Scalar(1)) / (p - Scalar(2));
    case SeriesLabel::Lip: return Scalar(1) / (p - Scalar(2));
    default: break;
  }
  throw Error(ErrorKind::InvalidArgument, "no scaled bound for this series");
}

namespace detail {

template <typename Scalar>
Scalar window_sup(const std::vector<Scalar>& t, const std::vector<Scalar>& v, Scalar lo, Scalar hi) {
  Scalar s = -std::numeric_limits<Scalar>::infinity();
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] >= lo && t[k] <= hi) s = std::max(s, v[k]);
  }
  return s;
}

}  // namespace detail

/// Sup of value/τ^exponent over the first window [1, factor] and the last
/// window [τ_end/factor, τ_end]; passes when last/first ≤ max_ratio.
template <typename Scalar>
FitReport<Scalar> check_scaled_bound(const RateSeries<Scalar>& series, const ModelParams<Scalar>& params,
                                     Scalar factor = Scalar(2), Scalar max_ratio = Scalar(2),
                                     Scalar min_end = Scalar(20)) {
  require(series.tag() == FrameTag::RescaledV, ErrorKind::InvalidFrame,
          "scaled bounds are stated in the RescaledV frame");
  require(factor > Scalar(1), ErrorKind::InvalidArgument, "window factor must exceed 1");
  const auto& t = series.clocks();
  require(!t.empty() && t.front() <= Scalar(1) && t.back() >= min_end, ErrorKind::InvalidWindow,
          "series must cover [1, tau_end] with tau_end >= " + std::to_string(static_cast<double>(min_end)));
  const Scalar e = scaled_bound_exponent(series.label(), params);
  std::vector<Scalar> ratio(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    ratio[k] = t[k] > Scalar(0) ? series.values()[k] / std::pow(t[k], e) : Scalar(0);
  }
  const Scalar end = t.back();
  const Scalar first = detail::window_sup(t, ratio, Scalar(1), factor);
  const Scalar last = detail::window_sup(t, ratio, end / factor, end);
  FitReport<Scalar> r;
  r.name = std::string("scaled_") + std::string(to_string(series.label()));
  r.expected = Scalar(1);
  r.tolerance = max_ratio;
  r.window_lo = end / factor;
  r.window_hi = end;
  r.residual = last;
  r.measured = first > Scalar(0) ? last / first : std::numeric_limits<Scalar>::infinity();
  r.pass = std::isfinite(r.measured) && r.measured <= max_ratio;
  r.note = "first-window sup " + std::to_string(static_cast<double>(first)) + ", last-window sup " +
           std::to_string(static_cast<double>(last));
  return r;
}

template <typename Scalar>
std::vector<FitReport<Scalar>> check_scaled_bounds(const NormSeries<Scalar>& s, const ModelParams<Scalar>& params,
                                                   Scalar factor = Scalar(2), Scalar max_ratio = Scalar(2)) {
  return {check_scaled_bound(s.L1, params, factor, max_ratio), check_scaled_bound(s.Linf, params, factor, max_ratio),
          check_scaled_bound(s.Lip, params, factor, max_ratio)};
}

/// R_1 = R_0 + (p−1)/(p−2) ‖u_0‖_∞^{(p−2)/(p−1)}.
template <typename Scalar>
Scalar support_bracket_radius(Scalar R0, Scalar sup_u0, const ModelParams<Scalar>& params) {
  return R0 + params.m() * std::pow(sup_u0, Scalar(1) / params.m());
}

template <typename Scalar>
struct ExpansionReport {
  /// ϱ(τ)/τ at the last sample against limit 1.
  FitReport<Scalar> ratio;
  /// ϱ nondecreasing over the last decade, up to slack.
  bool support_nondecreasing = false;
  /// ϱ/τ nondecreasing over the last decade, up to slack.
  bool ratio_nondecreasing = false;
  /// ϱ(τ) ≤ R_1 + τ at every sample.
  bool bracket_ok = false;
  Scalar bracket_margin{};
  /// γ(t)/log t at the matching original time, limit 1/(p−2).
  Scalar original_ratio{};
};

/// Expansion diagnostics for a RescaledV support series. The ratio passes when
/// it lies in [lo, hi].
template <typename Scalar>
ExpansionReport<Scalar> fit_expansion_rate(const RateSeries<Scalar>& support, const ModelParams<Scalar>& params,
                                           Scalar R1, Scalar lo = Scalar(0.8), Scalar hi = Scalar(1.02),
                                           Scalar slack = Scalar(0), Scalar min_end = Scalar(20)) {
  require(support.tag() == FrameTag::RescaledV, ErrorKind::InvalidFrame,
          "expansion rate is fitted in the RescaledV frame");
  const auto& t = support.clocks();
  const auto& r = support.values();
  require(!t.empty() && t.back() >= min_end, ErrorKind::InvalidWindow, "series must reach tau_end >= 20");
  const Scalar end = t.back();
  ExpansionReport<Scalar> rep;
  rep.ratio.name = "expansion_rate";
  rep.ratio.measured = r.back() / end;
  rep.ratio.expected = Scalar(1);
  rep.ratio.tolerance = std::max(Scalar(1) - lo, hi - Scalar(1));
  rep.ratio.window_lo = end / Scalar(10);
  rep.ratio.window_hi = end;
  rep.ratio.pass = rep.ratio.measured >= lo && rep.ratio.measured <= hi;

  rep.support_nondecreasing = true;
  rep.ratio_nondecreasing = true;
  std::optional<std::size_t> prev;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < end / Scalar(10)) continue;
    if (prev) {
      if (r[k] < r[*prev] - slack) rep.support_nondecreasing = false;
      if (r[k] / t[k] < r[*prev] / t[*prev] - slack / t[k]) rep.ratio_nondecreasing = false;
    }
    prev = k;
  }
  rep.bracket_ok = true;
  rep.bracket_margin = std::numeric_limits<Scalar>::infinity();
  for (std::size_t k = 0; k < t.size(); ++k) {
    const Scalar margin = R1 + t[k] - r[k];
    rep.bracket_margin = std::min(rep.bracket_margin, margin);
    if (margin < Scalar(0)) rep.bracket_ok = false;
  }
  const Scalar t_orig = t_of_tau(end, params);
  rep.original_ratio = t_orig > Scalar(1) ? r.back() / std::log(t_orig) : std::numeric_limits<Scalar>::quiet_NaN();
  return rep;
}

/// sup_y |w(τ,y) − W(y)| with W the sandpile profile.
template <typename Scalar>
Scalar profile_error(const SolutionState<Scalar>& state) {
  require(state.tag() == FrameTag::RescaledW || state.tag() == FrameTag::LogTime, ErrorKind::InvalidFrame,
          "profile error needs a RescaledW or LogTime state");
  Scalar err = Scalar(0);
  for (std::ptrdiff_t i = 0; i < state.grid().size(); ++i) {
    const Scalar W = profiles::sandpile(state.grid().node(i), state.params());
    err = std::max(err, std::abs(state.values()[i] - W));
  }
  return err;
}

template <typename Scalar>
struct ViolationReport {
  Scalar violation{};
  Scalar slack{};
  bool pass = false;
  bool skipped = false;
  std::size_t pairs = 0;
  /// Coordinate of the worst node.
  Scalar where{};
};

/// max_i (lower_i − upper_i), passing iff ≤ slack.
template <typename Scalar>
ViolationReport<Scalar> check_comparison(const SolutionState<Scalar>& lower, const SolutionState<Scalar>& upper,
                                         Scalar slack) {
  require(lower.grid() == upper.grid(), ErrorKind::GridMismatch, "comparison needs identical grids");
  require(lower.tag() == upper.tag(), ErrorKind::InvalidFrame, "comparison needs identical frames");
  ViolationReport<Scalar> rep;
  rep.slack = slack;
  const Field<Scalar> d = lower.values() - upper.values();
  std::ptrdiff_t at = 0;
  rep.violation = d.maxCoeff(&at);
  rep.where = lower.grid().node(at);
  rep.pairs = static_cast<std::size_t>(d.size());
  rep.pass = rep.violation <= slack;
  return rep;
}

/// One-dimensional reflection inequality v(τ,x) ≤ min(v(τ,r), v(τ,−r)) for
/// |x| > 2R_0 and 0 ≤ r < |x| − 2R_0, over all node pairs.
template <typename Scalar>
ViolationReport<Scalar> symmetry_inequality_check(const SolutionState<Scalar>& state, Scalar R0, Scalar slack) {
  require(state.tag() == FrameTag::RescaledV, ErrorKind::InvalidFrame, "symmetry check needs a RescaledV state");
  require(!state.grid().radial() && state.params().dim() == 1, ErrorKind::InvalidArgument,
          "symmetry check needs a one-dimensional line state");
  const auto& g = state.grid();
  const auto& v = state.values();
  const Scalar h = g.h();
  const Scalar reach = std::max(std::abs(g.x_min()), std::abs(g.x_max()));
  const auto n_r = static_cast<std::ptrdiff_t>(std::floor(reach / h)) + 1;
  // running_min[k] = min over radii k'h ≤ kh of min(v(k'h), v(−k'h)).
  std::vector<Scalar> running_min(static_cast<std::size_t>(n_r));
  Scalar acc = std::numeric_limits<Scalar>::infinity();
  for (std::ptrdiff_t k = 0; k < n_r; ++k) {
    const Scalar r = static_cast<Scalar>(k) * h;
    acc = std::min({acc, detail::interpolate(g, v, r), detail::interpolate(g, v, -r)});
    running_min[static_cast<std::size_t>(k)] = acc;
  }
  ViolationReport<Scalar> rep;
  rep.slack = slack;
  rep.violation = -std::numeric_limits<Scalar>::infinity();
  for (std::ptrdiff_t i = 0; i < g.size(); ++i) {
    const Scalar x = g.node(i);
    const Scalar gap = std::abs(x) - Scalar(2) * R0;
    if (gap <= Scalar(0)) continue;
    // Largest admissible radius index with kh < gap.
    auto k = static_cast<std::ptrdiff_t>(std::ceil(gap / h)) - 1;
    k = std::min(k, n_r - 1);
    if (k < 0) continue;
    ++rep.pairs;
    const Scalar d = v[i] - running_min[static_cast<std::size_t>(k)];
    if (d > rep.violation) {
      rep.violation = d;
      rep.where = x;
    }
  }
  if (rep.pairs == 0) {
    rep.skipped = true;
    rep.violation = Scalar(0);
    rep.pass = true;
    return rep;
  }
  rep.pass = rep.violation <= slack;
  return rep;
}

/// Right-hand side of the semi-discrete scheme for a state.
template <typename Scalar>
Field<Scalar> spatial_rate(const SolutionState<Scalar>& state, EquationForm form) {
  detail::require_form(state, form);
  return Stepper<Scalar>(state.grid(), state.params(), form).rate(state.values(), state.clock());
}

/// Discrete residual ∂τS − rate(S) of a sampled time-dependent profile, with a
/// centred (forward at the initial time) difference in time. Boundary nodes
/// carry 0.
template <typename Scalar>
Field<Scalar> discrete_residual(EquationForm form, const std::function<SolutionState<Scalar>(Scalar)>& sample,
                                Scalar tau, Scalar dtau) {
  require(dtau > Scalar(0), ErrorKind::InvalidArgument, "dtau must be positive");
  const auto now = sample(tau);
  const Scalar back = std::max(Scalar(0), tau - dtau);
  const auto a = sample(back);
  const auto b = sample(tau + dtau);
  Field<Scalar> dt = (b.values() - a.values()) / (tau + dtau - back);
  Field<Scalar> res = dt - spatial_rate(now, form);
  const auto st = make_stencil(now.grid(), now.params().dim());
  for (std::ptrdiff_t i = 0; i < st.first; ++i) res[i] = Scalar(0);
  for (std::ptrdiff_t i = st.last; i < res.size(); ++i) res[i] = Scalar(0);
  return res;
}

template <typename Scalar>
struct GrowupReport {
  /// Least-squares slope of log v against log τ over the last decade.
  Scalar slope{};
  /// log v(τ_end)/log τ_end.
  Scalar endpoint_ratio{};
  /// Fitted prefactor exp(intercept) at the expected exponent.
  Scalar epsilon{};
  Scalar expected{};
  std::size_t samples = 0;
};

template <typename Scalar>
GrowupReport<Scalar> fit_growup_exponent(const RateSeries<Scalar>& point_values, const ModelParams<Scalar>& params) {
  const auto& t = point_values.clocks();
  const auto& v = point_values.values();
  require(!t.empty() && t.back() > Scalar(1), ErrorKind::InvalidWindow, "grow-up fit needs tau_end > 1");
  const Scalar end = t.back();
  GrowupReport<Scalar> rep;
  rep.expected = params.m();
  Scalar sx = 0, sy = 0, sxx = 0, sxy = 0, se = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < end / Scalar(10) || !(v[k] > Scalar(0)) || t[k] <= Scalar(0)) continue;
    const Scalar x = std::log(t[k]);
    const Scalar y = std::log(v[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    se += y - rep.expected * x;
    ++rep.samples;
  }
  require(rep.samples >= 2, ErrorKind::InvalidWindow, "grow-up fit needs two positive samples in the last decade");
  const Scalar n = static_cast<Scalar>(rep.samples);
  rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  rep.epsilon = std::exp(se / n);
  rep.endpoint_ratio = v.back() > Scalar(0) ? std::log(v.back()) / std::log(end) : -std::numeric_limits<Scalar>::infinity();
  return rep;
}

/// True when values never increase by more than slack between samples.
template <typename Scalar>
bool is_nonincreasing(const std::vector<Scalar>& values, Scalar slack = Scalar(0)) {
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[k - 1] + slack) return false;
  }
  return true;
}

}  // namespace gradflow
