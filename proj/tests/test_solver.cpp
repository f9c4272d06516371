#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gradflow/analysis.hpp"
#include "gradflow/initial_data.hpp"
#include "gradflow/operators.hpp"
#include "gradflow/solver.hpp"
#include "test_util.hpp"

using namespace gradflow;

namespace {

SolutionStated state_from(const Gridd& g, const ModelParamsd& params, auto&& f, FrameTag tag = FrameTag::Original,
                          double clock = 0.0) {
  Field<double> v(g.size());
  for (std::ptrdiff_t i = 0; i < g.size(); ++i) v[i] = f(g.node(i));
  return SolutionStated({tag, clock}, g, v, params);
}

Field<double> random_profile(const Gridd& g, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Field<double> v = Field<double>::Zero(g.size());
  const auto n = g.n_cells();
  const auto a = static_cast<std::ptrdiff_t>(U(gen) * n * 0.3);
  const auto b = n - 1 - static_cast<std::ptrdiff_t>(U(gen) * n * 0.3);
  for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(a, g.radial() ? 0 : 1); i <= b; ++i) v[i] = U(gen);
  return v;
}

}  // namespace

TEST_CASE("p-Laplacian vanishes on constants and linear ramps") {
  const ModelParamsd params(3.5, 1);
  const auto g = make_grid(GridKind::Line, 2.0, 40);
  const auto c = state_from(g, params, [](double) { return 0.7; });
  CHECK(p_laplacian(c).abs().maxCoeff() == 0.0);
  const auto ramp = state_from(g, params, [](double x) { return 3.0 - x; });
  CHECK(p_laplacian(ramp).abs().maxCoeff() < 1e-9);
}

TEST_CASE("p-Laplacian of the sandpile on a line grid") {
  // p = 3: W = (1−|x|)²/4, |W'|W' = −(1−x)²/4 for x > 0, so Δ_3 W = (1−|x|)/2.
  const ModelParamsd params(3, 1);
  const auto g = make_grid(GridKind::Line, 1.5, 300);
  const auto W = sample_initial<double>(SandpileData{}, g, params);
  const auto lap = p_laplacian(W);
  for (std::ptrdiff_t i = 1; i < g.n_cells(); ++i) {
    const double x = std::abs(g.node(i));
    if (x < 2 * g.h() || x > 1 - 2 * g.h()) continue;
    CHECK(lap[i] == doctest::Approx((1 - x) / 2).epsilon(1e-10));
  }
}

TEST_CASE("radial p-Laplacian matches the closed form") {
  // p = 3, u = 1 − r²: |u'|u' = −4r², Δ_3 u = r^{1−N}(−4 r^{N+1})' = −4(N+1) r.
  // Face fluxes are exact for this profile: N = 1 is exact to round-off, the
  // cell-averaged metric makes N ≥ 2 first order.
  const ModelParamsd p1(3, 1), p2(3, 2), p3(3, 3);
  for (const auto* params : {&p1, &p2, &p3}) {
    const int N = params->dim();
    double prev = 0;
    for (int cells : {100, 200}) {
      const auto g = make_grid(GridKind::Radial, 2.0, cells);
      const auto u = state_from(g, *params, [](double r) { return r < 1 ? 1 - r * r : 0.0; });
      const auto lap = p_laplacian(u);
      double err = 0;
      for (std::ptrdiff_t i = 1; i < g.n_cells(); ++i) {
        const double r = g.node(i);
        if (r > 0.9) break;
        err = std::max(err, std::abs(lap[i] + 4.0 * (N + 1) * r));
      }
      if (N == 1) CHECK(err < 1e-9);
      else CHECK(err < 0.1);
      if (N > 1 && prev > 0) CHECK(err < 0.6 * prev);
      prev = err;
    }
  }
}

TEST_CASE("radial p-Laplacian converges for a non-polynomial profile") {
  // p = 4, u = cos(r) on r < π/2: |u'|²u' = −sin³r,
  // Δ_4 u = r^{1−N}(−r^{N−1} sin³r)' = −3 sin²r cos r − (N−1) sin³r / r.
  const ModelParamsd params(4, 3);
  const int N = 3;
  double prev = 0;
  for (int cells : {200, 400, 800}) {
    const auto g = make_grid(GridKind::Radial, 2.0, cells);
    const auto u = state_from(g, params, [](double r) { return r < M_PI / 2 ? std::cos(r) : 0.0; });
    const auto lap = p_laplacian(u);
    double err = 0;
    for (std::ptrdiff_t i = 1; g.node(i) < 1.3; ++i) {
      const double r = g.node(i), sr = std::sin(r);
      err = std::max(err, std::abs(lap[i] - (-3 * sr * sr * std::cos(r) - (N - 1) * sr * sr * sr / r)));
    }
    if (prev > 0) CHECK(err < 0.6 * prev);
    prev = err;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("upwind gradient magnitude examples") {
  const ModelParamsd params(3, 1);
  const auto g = make_grid(GridKind::Line, 1.0, 10);
  CHECK(gradient_magnitude_upwind(state_from(g, params, [](double) { return 2.0; })).maxCoeff() == 0.0);
  const auto ramp = gradient_magnitude_upwind(state_from(g, params, [](double x) { return 5 - 1.5 * x; }));
  for (std::ptrdiff_t i = 1; i < g.n_cells(); ++i) CHECK(ramp[i] == doctest::Approx(1.5));
  const auto dip = gradient_magnitude_upwind(state_from(g, params, [](double x) { return x * x + 0.1; }));
  CHECK(dip[5] == 0.0);  // node 5 sits at x = 0, a strict local minimum
}

TEST_CASE("stable_dt examples") {
  const ModelParamsd params(3, 1);
  const auto g = make_grid(GridKind::Radial, 2.0, 100);
  for (auto form : {EquationForm::Original, EquationForm::RescaledV, EquationForm::RescaledW}) {
    CHECK(stable_dt(zero_state(g, params, {frame_of(form), 0.0}), form) == doctest::Approx(0.1));
  }

  // Diffusion-dominated state: halving h shrinks dt by at least 4.
  auto bump_dt = [&](int cells) {
    const auto gg = make_grid(GridKind::Radial, 2.0, cells);
    return stable_dt(sample_initial<double>(BumpData<double>{1.0, 0.1, 0.0}, gg, params), EquationForm::Original);
  };
  CHECK(bump_dt(100) / bump_dt(200) >= 4.0 * (1 - 1e-9));

  // Line ramp with slope L: dt = 0.4 min(h²/(2(p−1)L^{p−2}), h/(q L^{q−1})).
  const ModelParamsd p4(4, 1);
  const auto line = make_grid(GridKind::Line, 1.0, 50);
  const double L = 3.0, h = line.h();
  const auto ramp = state_from(line, p4, [&](double x) { return L * (1 - std::abs(x)); });
  const double oracle = 0.4 * std::min(h * h / (2 * 3 * L * L), h / (3 * L * L));
  CHECK(stable_dt(ramp, EquationForm::Original) == doctest::Approx(oracle));
}

TEST_CASE("step refuses oversized dt and mismatched frames") {
  const ModelParamsd params(3, 1);
  const auto g = make_grid(GridKind::Radial, 2.0, 50);
  const auto s = sample_initial<double>(BumpData<double>{1.0, 1.0, 0.0}, g, params);
  const double dt = stable_dt(s, EquationForm::Original);
  CHECK(thrown_kind([&] { step(s, EquationForm::Original, 1.5 * dt); }) == ErrorKind::CflViolation);
  CHECK(thrown_kind([&] { step(s, EquationForm::RescaledV, dt); }) == ErrorKind::InvalidFrame);
  const auto [next, rep] = step(s, EquationForm::Original, dt);
  CHECK(next.clock() == doctest::Approx(dt));
  CHECK(rep.cfl_margin == doctest::Approx(1.0));
  CHECK(rep.clipped_mass == 0.0);
}

TEST_CASE("the zero state is stationary in every form") {
  const ModelParamsd params(3, 2);
  const auto g = make_grid(GridKind::Radial, 2.0, 50);
  for (auto form : {EquationForm::Original, EquationForm::RescaledV, EquationForm::RescaledW}) {
    const auto z = zero_state(g, params, {frame_of(form), 0.0});
    const auto [next, rep] = step(z, form, 0.1);
    CHECK(next.values().maxCoeff() == 0.0);
    CHECK(evolve(z, form, 3.0).values().maxCoeff() == 0.0);
  }
}

TEST_CASE("evolving by zero time is the identity") {
  const ModelParamsd params(3, 1);
  const auto g = make_grid(GridKind::Radial, 2.0, 50);
  const auto s = sample_initial<double>(BumpData<double>{1.0, 1.0, 0.0}, g, params);
  const auto e = evolve(s, EquationForm::Original, 0.0);
  CHECK((e.values() == s.values()).all());
  CHECK(e.clock() == 0.0);
}

TEST_CASE("observer fires exactly at requested times") {
  const ModelParamsd params(3, 1);
  const auto g = make_grid(GridKind::Radial, 3.0, 60);
  const auto s = sample_initial<double>(BumpData<double>{1.0, 1.0, 0.0}, g, params, {FrameTag::RescaledV, 0.0});
  std::vector<double> seen;
  EvolveOptions<double> opt;
  opt.output_times = {0.25, 0.5, 0.125, 2.0};
  opt.observer = [&](const SolutionStated& x) { seen.push_back(x.clock()); };
  const auto e = evolve(s, EquationForm::RescaledV, 0.5, opt);
  REQUIRE(seen.size() == 3);
  CHECK(seen[0] == 0.125);
  CHECK(seen[1] == 0.25);
  CHECK(seen[2] == 0.5);
  CHECK(e.clock() == 0.5);
}

TEST_CASE("support reaching the outer boundary raises domain-overflow") {
  const ModelParamsd params(3, 1);
  const auto g = make_grid(GridKind::Radial, 1.5, 30);
  const auto s = sample_initial<double>(BumpData<double>{1.0, 1.0, 0.0}, g, params, {FrameTag::RescaledV, 0.0});
  CHECK(thrown_kind([&] { evolve(s, EquationForm::RescaledV, 5.0); }) == ErrorKind::DomainOverflow);
}

TEST_CASE("original form: mass and sup are nonincreasing, support grows at most one node per step") {
  for (int dim : {1, 2, 3}) {
    const ModelParamsd params(3, dim);
    const auto g = make_grid(GridKind::Radial, 3.0, 120);
    auto s = sample_initial<double>(BumpData<double>{1.0, 2.0, 0.0}, g, params);
    const double sup0 = s.sup();
    for (int k = 0; k < 400; ++k) {
      const double dt = stable_dt(s, EquationForm::Original);
      const auto [next, rep] = step(s, EquationForm::Original, dt);
      CHECK(rep.mass_change <= 1e-13);
      CHECK(next.sup() <= s.sup());
      CHECK(rep.support_change <= 1);
      CHECK(rep.clipped_mass == 0.0);
      s = next;
    }
    CHECK(s.sup() <= sup0);
  }
}

TEST_CASE("one step preserves nodewise ordering in every form") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double ps[] = {2.5, 3.0, 3.5, 4.0};
  for (int k = 0; k < 60; ++k) {
    const ModelParamsd params(ps[k % 4], 1 + k % 3);
    const auto g = k % 2 ? make_grid(GridKind::Line, 1.0, 40) : make_grid(GridKind::Radial, 2.0, 40);
    const Field<double> lo = random_profile(g, gen);
    Field<double> hi = lo;
    for (std::ptrdiff_t i = g.radial() ? 0 : 1; i < g.n_cells(); ++i) hi[i] += 0.3 * U(gen);
    for (auto form : {EquationForm::Original, EquationForm::RescaledV, EquationForm::RescaledW}) {
      const Frame<double> f{frame_of(form), 2.0 * U(gen)};
      const SolutionStated a(f, g, lo, params), b(f, g, hi, params);
      const double dt = std::min(stable_dt(a, form), stable_dt(b, form));
      const auto na = step(a, form, dt).first, nb = step(b, form, dt).first;
      CHECK((na.values() - nb.values()).maxCoeff() <= 0.0);
    }
  }
}

TEST_CASE("fused stepper rate agrees with the reference operators") {
  std::mt19937_64 gen(5);
  for (int k = 0; k < 12; ++k) {
    const ModelParamsd params(k % 2 ? 3.0 : 2.7, 1 + k % 3);
    const auto g = k % 3 == 0 ? make_grid(GridKind::Line, 1.0, 30) : make_grid(GridKind::Radial, 2.0, 30);
    const Field<double> u = random_profile(g, gen);
    const double tau = 1.5;
    const SolutionStated s({FrameTag::RescaledW, tau}, g, u, params);
    const Field<double> lap = p_laplacian(s);
    const Field<double> G = gradient_magnitude_upwind(s);
    const Field<double> drift = drift_upwind(s);
    const Field<double> sink = G.pow(params.q());
    const auto st = make_stencil(g, params.dim());
    const Stepper<double> orig(g, params, EquationForm::Original), v(g, params, EquationForm::RescaledV),
        w(g, params, EquationForm::RescaledW);
    const auto ro = orig.rate(u, tau), rv = v.rate(u, tau), rw = w.rate(u, tau);
    for (std::ptrdiff_t i = st.first; i < st.last; ++i) {
      CHECK(ro[i] == doctest::Approx(lap[i] - sink[i]));
      CHECK(rv[i] == doctest::Approx(lap[i] - sink[i] + u[i]));
      CHECK(rw[i] == doctest::Approx((lap[i] + drift[i] - params.m() * u[i]) / (1 + tau) - sink[i] + u[i]));
    }
  }
}

TEST_CASE("explicit wave translates at unit speed") {
  const ModelParamsd params(3, 1);
  const auto g = make_line_grid(-0.25, 2.75, 300);
  const double h = g.h();
  const auto s0 = sample_initial<double>(ExplicitWaveData<double>{0.0}, g, params, {FrameTag::RescaledV, 0.0});
  EvolveOptions<double> opt;
  opt.solver.inflow = [&](double tau) { return 0.25 * std::pow(std::max(tau - g.x_min(), 0.0), 2); };
  const double T = 1.5;
  const auto s = evolve(s0, EquationForm::RescaledV, T, opt);
  const auto edges = support_edges(s);
  REQUIRE(edges);
  CHECK(std::abs(edges->second - T) <= 2 * h * T);
  double err = 0;
  for (std::ptrdiff_t i = 0; i < g.size(); ++i) {
    const double z = T - g.node(i);
    err = std::max(err, std::abs(s.values()[i] - (z > 0 ? 0.25 * z * z : 0.0)));
  }
  CHECK(err < 2e-2);
}

TEST_CASE("rescaled-v bump: self-convergence order") {
  const ModelParamsd params(3, 1);
  std::vector<Field<double>> finals;
  const int base = 100;
  for (int f : {1, 2, 4}) {
    const auto g = make_grid(GridKind::Radial, 6.0, base * f);
    const auto s0 = sample_initial<double>(BumpData<double>{1.0, 1.0, 0.0}, g, params, {FrameTag::RescaledV, 0.0});
    const auto s = evolve(s0, EquationForm::RescaledV, 2.0);
    Field<double> coarse(base + 1);
    for (int i = 0; i <= base; ++i) coarse[i] = s.values()[i * f];
    finals.push_back(coarse);
  }
  const double e1 = (finals[0] - finals[1]).abs().maxCoeff();
  const double e2 = (finals[1] - finals[2]).abs().maxCoeff();
  MESSAGE("self-convergence differences " << e1 << ", " << e2);
  CHECK(std::log2(e1 / e2) >= 0.8);
}
