#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "gradflow/error.hpp"

// Dormand–Prince 5(4) with the standard fourth-order continuous extension and
// sign-change event location on the dense output.

namespace gradflow::ode {

template <typename Scalar, int Dim>
using Vec = Eigen::Matrix<Scalar, Dim, 1>;

template <typename Scalar, int Dim>
struct Event {
  std::function<Scalar(Scalar, const Vec<Scalar, Dim>&)> g;
  bool terminal = false;
  /// +1 only rising crossings, −1 only falling, 0 both.
  int direction = 0;
};

template <typename Scalar, int Dim>
struct EventHit {
  std::size_t index = 0;
  Scalar t{};
  Vec<Scalar, Dim> y;
};

enum class Status { Completed, Terminated, Escaped, StepLimit };

template <typename Scalar>
struct Options {
  Scalar rtol = Scalar(1e-9);
  Scalar atol = Scalar(1e-14);
  Scalar h0 = Scalar(0);  // 0 picks a starting step automatically
  Scalar h_max = std::numeric_limits<Scalar>::infinity();
  std::size_t max_steps = 2'000'000;
  /// The run stops with Status::Escaped once the infinity norm exceeds this.
  Scalar escape_norm = std::numeric_limits<Scalar>::infinity();
  Scalar event_tol = Scalar(1e-13);
};

template <typename Scalar, int Dim>
struct Solution {
  std::vector<Scalar> t;
  std::vector<Vec<Scalar, Dim>> y;
  std::vector<EventHit<Scalar, Dim>> events;
  Status status = Status::Completed;
  std::size_t rejected = 0;
};

namespace detail {

template <typename Scalar, int Dim>
struct Dense {
  Scalar t0, h;
  Vec<Scalar, Dim> r1, r2, r3, r4, r5;

  Vec<Scalar, Dim> operator()(Scalar t) const {
    const Scalar th = (t - t0) / h;
    const Scalar th1 = Scalar(1) - th;
    return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
  }
};

}  // namespace detail

template <typename Scalar, int Dim, typename Rhs>
Solution<Scalar, Dim> integrate(Rhs&& f, Scalar t0, const Vec<Scalar, Dim>& y0, Scalar t_end,
                                const Options<Scalar>& opt = {},
                                const std::vector<Event<Scalar, Dim>>& events = {}) {
  using V = Vec<Scalar, Dim>;
  require(t_end > t0, ErrorKind::InvalidArgument, "integration interval must be increasing");
  require(y0.allFinite(), ErrorKind::InvalidArgument, "initial state must be finite");

  constexpr Scalar c2 = Scalar(1) / 5, c3 = Scalar(3) / 10, c4 = Scalar(4) / 5, c5 = Scalar(8) / 9;
  constexpr Scalar a21 = Scalar(1) / 5;
  constexpr Scalar a31 = Scalar(3) / 40, a32 = Scalar(9) / 40;
  constexpr Scalar a41 = Scalar(44) / 45, a42 = Scalar(-56) / 15, a43 = Scalar(32) / 9;
  constexpr Scalar a51 = Scalar(19372) / 6561, a52 = Scalar(-25360) / 2187,
                   a53 = Scalar(64448) / 6561, a54 = Scalar(-212) / 729;
  constexpr Scalar a61 = Scalar(9017) / 3168, a62 = Scalar(-355) / 33, a63 = Scalar(46732) / 5247,
                   a64 = Scalar(49) / 176, a65 = Scalar(-5103) / 18656;
  constexpr Scalar a71 = Scalar(35) / 384, a73 = Scalar(500) / 1113, a74 = Scalar(125) / 192,
                   a75 = Scalar(-2187) / 6784, a76 = Scalar(11) / 84;
  constexpr Scalar e1 = Scalar(71) / 57600, e3 = Scalar(-71) / 16695, e4 = Scalar(71) / 1920,
                   e5 = Scalar(-17253) / 339200, e6 = Scalar(22) / 525, e7 = Scalar(-1) / 40;
  constexpr Scalar d1 = Scalar(-12715105075.0) / Scalar(11282082432.0),
                   d3 = Scalar(87487479700.0) / Scalar(32700410799.0),
                   d4 = Scalar(-10690763975.0) / Scalar(1880347072.0),
                   d5 = Scalar(701980252875.0) / Scalar(199316789632.0),
                   d6 = Scalar(-1453857185.0) / Scalar(822651844.0),
                   d7 = Scalar(69997945.0) / Scalar(29380423.0);

  Solution<Scalar, Dim> sol;
  Scalar t = t0;
  V y = y0;
  V k1 = f(t, y);
  sol.t.push_back(t);
  sol.y.push_back(y);

  auto err_norm = [&](const V& err, const V& ya, const V& yb) {
    const V sc = (opt.atol + opt.rtol * ya.cwiseAbs().cwiseMax(yb.cwiseAbs()).array()).matrix();
    return std::sqrt((err.array() / sc.array()).square().mean());
  };

  Scalar h = opt.h0;
  if (h <= Scalar(0)) {
    const V sc = (opt.atol + opt.rtol * y.cwiseAbs().array()).matrix();
    const Scalar dn = std::sqrt((y.array() / sc.array()).square().mean());
    const Scalar fn = std::sqrt((k1.array() / sc.array()).square().mean());
    h = (dn < Scalar(1e-5) || fn < Scalar(1e-5)) ? Scalar(1e-6) : Scalar(0.01) * dn / fn;
  }
  h = std::min({h, opt.h_max, t_end - t0});

  std::vector<Scalar> g_prev(events.size());
  for (std::size_t e = 0; e < events.size(); ++e) g_prev[e] = events[e].g(t, y);

  std::size_t steps = 0;
  while (t < t_end) {
    if (++steps > opt.max_steps) {
      sol.status = Status::StepLimit;
      return sol;
    }
    const bool last = t + h >= t_end;
    if (last) h = t_end - t;
    const V k2 = f(t + c2 * h, y + h * (a21 * k1));
    const V k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const V k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const V k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const V k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const V y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const V k7 = f(t + h, y1);
    const V err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const Scalar en = y1.allFinite() ? err_norm(err, y, y1) : std::numeric_limits<Scalar>::infinity();

    if (!(en <= Scalar(1))) {
      ++sol.rejected;
      const Scalar fac = std::isfinite(en) ? std::max(Scalar(0.2), Scalar(0.9) * std::pow(en, Scalar(-0.2)))
                                           : Scalar(0.2);
      h *= fac;
      require(h > std::numeric_limits<Scalar>::epsilon() * std::max(Scalar(1), std::abs(t)),
              ErrorKind::OrbitEscaped, "step size underflow in orbit integration");
      continue;
    }

    detail::Dense<Scalar, Dim> dense{t, h, y, y1 - y, V(), V(), V()};
    dense.r3 = h * k1 - dense.r2;
    dense.r4 = dense.r2 - h * k7 - dense.r3;
    dense.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
    const Scalar t1 = last ? t_end : t + h;

    // Record every crossing up to the first terminal one, in time order.
    std::vector<EventHit<Scalar, Dim>> found;
    bool stop = false;
    Scalar t_stop = t1;
    for (std::size_t e = 0; e < events.size(); ++e) {
      const Scalar ga = g_prev[e];
      const Scalar gb = events[e].g(t1, y1);
      const bool rising = ga < Scalar(0) && gb >= Scalar(0);
      const bool falling = ga > Scalar(0) && gb <= Scalar(0);
      if (!((rising && events[e].direction >= 0) || (falling && events[e].direction <= 0))) continue;
      Scalar lo = t, hi = t1;
      for (int it = 0; it < 200 && hi - lo > opt.event_tol * std::max(Scalar(1), std::abs(hi)); ++it) {
        const Scalar mid = Scalar(0.5) * (lo + hi);
        const Scalar gm = events[e].g(mid, dense(mid));
        if ((gm < Scalar(0)) == (ga < Scalar(0)) && gm != Scalar(0)) lo = mid;
        else hi = mid;
      }
      found.push_back({e, hi, dense(hi)});
      if (events[e].terminal && hi <= t_stop) {
        stop = true;
        t_stop = hi;
      }
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
    for (const auto& ev : found) {
      if (ev.t <= t_stop) sol.events.push_back(ev);
    }
    if (stop) {
      sol.t.push_back(t_stop);
      sol.y.push_back(dense(t_stop));
      sol.status = Status::Terminated;
      return sol;
    }

    t = t1;
    y = y1;
    k1 = k7;
    for (std::size_t e = 0; e < events.size(); ++e) g_prev[e] = events[e].g(t, y);
    sol.t.push_back(t);
    sol.y.push_back(y);
    if (y.cwiseAbs().maxCoeff() > opt.escape_norm) {
      sol.status = Status::Escaped;
      return sol;
    }

    const Scalar fac = en > Scalar(0) ? Scalar(0.9) * std::pow(en, Scalar(-0.2)) : Scalar(10);
    h = std::min({h * std::clamp(fac, Scalar(0.2), Scalar(10)), opt.h_max});
  }
  sol.status = Status::Completed;
  return sol;
}

}  // namespace gradflow::ode
