#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gradflow/analysis.hpp"
#include "gradflow/initial_data.hpp"
#include "test_util.hpp"

using namespace gradflow;

namespace {

SolutionStated state_from(const Gridd& g, const ModelParamsd& params, auto&& f,
                          FrameTag tag = FrameTag::RescaledW, double clock = 0.0) {
  Field<double> v(g.size());
  for (std::ptrdiff_t i = 0; i < g.size(); ++i) v[i] = f(g.node(i));
  return SolutionStated({tag, clock}, g, std::move(v), params);
}

RateSeries<double> series(SeriesLabel label, auto&& f, double t0, double t1, int n,
                          FrameTag tag = FrameTag::RescaledV) {
  RateSeries<double> s(label, tag);
  for (int k = 0; k <= n; ++k) {
    const double t = t0 + (t1 - t0) * k / n;
    s.push(t, f(t));
  }
  return s;
}

}  // namespace

TEST_CASE("support radius") {
  const ModelParamsd params(3, 1);
  const auto g = make_grid(GridKind::Line, 1.5, 300);
  const auto W = sample_initial<double>(SandpileData{}, g, params, {FrameTag::RescaledW, 0.0});
  CHECK(std::abs(support_radius(W) - 1.0) <= g.h());
  CHECK(support_radius(W.with_values(Field<double>::Zero(g.size()))) == 0.0);
  CHECK(!support_edges(W.with_values(Field<double>::Zero(g.size()))));

  const Gridd line(GridKind::Line, -1.0, 4.0, 500);
  const auto wave = sample_initial<double>(ExplicitWaveData<double>{2.0}, line, params, {FrameTag::RescaledV, 0.0});
  CHECK(std::abs(support_edges(wave)->second - 2.0) <= line.h() + 1e-12);
}

TEST_CASE("support radius is monotone under domination") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const ModelParamsd params(3, 2);
  const auto g = make_grid(GridKind::Radial, 2.0, 100);
  for (int k = 0; k < 100; ++k) {
    Field<double> a(g.size()), b(g.size());
    for (std::ptrdiff_t i = 0; i < g.size(); ++i) {
      a[i] = U(gen) < 0.3 ? 0.0 : U(gen);
      b[i] = U(gen) < 0.5 ? a[i] : a[i] + U(gen);
    }
    const SolutionStated sa({FrameTag::RescaledV, 0.0}, g, a, params), sb({FrameTag::RescaledV, 0.0}, g, b, params);
    CHECK(support_radius(sa) <= support_radius(sb));
  }
}

TEST_CASE("norms of the sandpile profile") {
  const ModelParamsd params(3, 1);
  std::vector<double> l1_err;
  for (int n : {240, 480, 960}) {
    const auto g = make_grid(GridKind::Line, 1.2, n);
    const auto W = sample_initial<double>(SandpileData{}, g, params);
    CHECK(linf_norm(W) == doctest::Approx(0.25));
    CHECK(lipschitz_constant(W) <= 0.5);
    CHECK(lipschitz_constant(W) >= 0.5 - g.h());
    l1_err.push_back(std::abs(l1_norm(W) - 1.0 / 6));
  }
  CHECK(l1_err[0] < 1e-4);
  CHECK(l1_err[1] < l1_err[0] / 3);
  CHECK(l1_err[2] < l1_err[1] / 3);

  const auto g = make_grid(GridKind::Radial, 1.0, 200);
  const auto zero = SolutionStated({FrameTag::Original, 0.0}, g, Field<double>::Zero(g.size()), params);
  CHECK(l1_norm(zero) == 0.0);
  CHECK(linf_norm(zero) == 0.0);
  CHECK(lipschitz_constant(zero) == 0.0);
}

TEST_CASE("radial L1 carries the surface measure") {
  // ∫_{B(0,1)} (1 − |x|²) dx = |S^{N−1}| (1/N − 1/(N+2)).
  const double sphere[] = {0, 2, 2 * std::numbers::pi, 4 * std::numbers::pi};
  for (int N : {1, 2, 3}) {
    const ModelParamsd params(3, N);
    const auto g = make_grid(GridKind::Radial, 1.0, 1000);
    const auto s = state_from(g, params, [](double r) { return 1 - r * r; });
    CHECK(l1_norm(s) == doctest::Approx(sphere[N] * (1.0 / N - 1.0 / (N + 2))).epsilon(1e-5));
  }
}

TEST_CASE("norm series observer") {
  const ModelParamsd params(3, 1);
  const auto g = make_grid(GridKind::Line, 1.5, 150);
  const auto W = sample_initial<double>(SandpileData{}, g, params, {FrameTag::RescaledV, 0.0});
  const auto s = norm_series<double>({W, W.with_frame({FrameTag::RescaledV, 1.0})});
  CHECK(s.L1.size() == 2);
  CHECK(s.Linf.values()[1] == doctest::Approx(0.25));
  CHECK(s.support.tag() == FrameTag::RescaledV);
  RateSeries<double> r(SeriesLabel::L1, FrameTag::RescaledV);
  r.push(1.0, 0.0);
  CHECK(thrown_kind([&] { r.push(1.0, 0.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("scaled bounds") {
  const ModelParamsd params(3, 1);
  CHECK(scaled_bound_exponent(SeriesLabel::L1, params) == doctest::Approx(3.0));
  CHECK(scaled_bound_exponent(SeriesLabel::Linf, params) == doctest::Approx(2.0));
  CHECK(scaled_bound_exponent(SeriesLabel::Lip, params) == doctest::Approx(1.0));
  CHECK(scaled_bound_exponent(SeriesLabel::L1, ModelParamsd(4, 2)) == doctest::Approx(7.0 / 2));

  auto linf = [&](auto&& f) { return check_scaled_bound(series(SeriesLabel::Linf, f, 1, 40, 390), params); };
  const auto flat = linf([](double t) { return 7 * t * t; });
  CHECK(flat.pass);
  CHECK(flat.measured == doctest::Approx(1.0));
  const auto cubic = linf([](double t) { return t * t * t; });
  CHECK(!cubic.pass);
  CHECK(cubic.measured > 10);

  const auto short_run = series(SeriesLabel::Linf, [](double t) { return t; }, 1, 10, 90);
  CHECK(thrown_kind([&] { check_scaled_bound(short_run, params); }) == ErrorKind::InvalidWindow);
  const auto wrong = series(SeriesLabel::Linf, [](double t) { return t; }, 1, 40, 90, FrameTag::Original);
  CHECK(thrown_kind([&] { check_scaled_bound(wrong, params); }) == ErrorKind::InvalidFrame);
}

TEST_CASE("expansion rate fit") {
  const ModelParamsd params(3, 1);
  CHECK(support_bracket_radius(1.0, 1.0, params) == doctest::Approx(3.0));
  CHECK(support_bracket_radius(0.5, 0.25, ModelParamsd(4, 1)) == doctest::Approx(0.5 + 1.5 * std::pow(0.25, 2.0 / 3)));

  const auto half = fit_expansion_rate(series(SeriesLabel::SupportRadius, [](double t) { return 0.5 * t; }, 0, 40, 400),
                                       params, 3.0);
  CHECK(!half.ratio.pass);
  CHECK(half.ratio.measured == doctest::Approx(0.5));
  CHECK(half.support_nondecreasing);

  const auto past = fit_expansion_rate(series(SeriesLabel::SupportRadius, [](double t) { return 4 + t; }, 0, 40, 400),
                                       params, 3.0);
  CHECK(!past.bracket_ok);
  CHECK(past.bracket_margin == doctest::Approx(-1.0));
  CHECK(!past.ratio_nondecreasing);

  CHECK(thrown_kind([&] {
          fit_expansion_rate(series(SeriesLabel::SupportRadius, [](double t) { return t; }, 0, 10, 10), params, 3.0);
        }) == ErrorKind::InvalidWindow);
}

TEST_CASE("expansion rate of the exact traveling wave") {
  // v(τ,x) = f(x − τ) with the interface at K + τ.
  const ModelParamsd params(3, 1);
  const Gridd line(GridKind::Line, -1.0, 25.0, 1040);
  RateSeries<double> s(SeriesLabel::SupportRadius, FrameTag::RescaledV);
  for (int k = 0; k <= 40; ++k) {
    const double tau = 0.5 * k;
    s.push(tau, support_radius(sample_initial<double>(ExplicitWaveData<double>{tau}, line, params,
                                                      {FrameTag::RescaledV, tau})));
  }
  const auto rep = fit_expansion_rate(s, params, 3.0);
  CHECK(std::abs(rep.ratio.measured - 1.0) <= line.h() / 20);
  CHECK(rep.ratio.pass);
  CHECK(rep.support_nondecreasing);
  CHECK(rep.bracket_ok);
  CHECK(rep.original_ratio == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("profile error") {
  for (double p : {3.0, 4.0}) {
    const ModelParamsd params(p, 1);
    const auto g = make_grid(GridKind::Radial, 1.5, 300);
    const auto W = sample_initial<double>(SandpileData{}, g, params, {FrameTag::RescaledW, 0.0});
    CHECK(profile_error(W) <= 1e-15);
    const double W0 = std::pow((p - 2) / (p - 1), (p - 1) / (p - 2));
    CHECK(profile_error(W.with_values(Field<double>::Zero(g.size()))) == doctest::Approx(W0));
    CHECK(profile_error(W.with_frame({FrameTag::LogTime, 1.0})) <= 1e-15);
    CHECK(thrown_kind([&] { profile_error(W.with_frame({FrameTag::RescaledV, 0.0})); }) == ErrorKind::InvalidFrame);
  }
  CHECK(ModelParamsd(3, 1).cp() == doctest::Approx(4.0));
  CHECK(std::pow(3.0 - 2, -3.0 / (3.0 - 2)) == 1.0);
}

TEST_CASE("comparison check") {
  const ModelParamsd params(3, 1);
  const auto g = make_grid(GridKind::Line, 1.5, 300);
  const auto W = sample_initial<double>(SandpileData{}, g, params, {FrameTag::RescaledW, 0.0});
  const auto W2 = W.with_values(2 * W.values());
  CHECK(check_comparison(W, W, 0.0).violation == 0.0);
  CHECK(check_comparison(W, W2, 0.0).pass);
  const auto bad = check_comparison(W2, W, 0.0);
  CHECK(!bad.pass);
  CHECK(bad.violation == doctest::Approx(0.25));
  CHECK(bad.where == doctest::Approx(0.0));
  const auto other = make_grid(GridKind::Line, 1.5, 150);
  const auto Wc = sample_initial<double>(SandpileData{}, other, params, {FrameTag::RescaledW, 0.0});
  CHECK(thrown_kind([&] { check_comparison(W, Wc, 0.0); }) == ErrorKind::GridMismatch);
  CHECK(thrown_kind([&] { check_comparison(W, W.with_frame({FrameTag::LogTime, 0.0}), 0.0); }) ==
        ErrorKind::InvalidFrame);
}

TEST_CASE("reflection inequality") {
  const ModelParamsd params(3, 1);
  const auto g = make_grid(GridKind::Line, 4.0, 400);
  const auto hat = state_from(g, params, [](double x) { return std::max(0.0, 3 - std::abs(x)); }, FrameTag::RescaledV);
  CHECK(symmetry_inequality_check(hat, 0.5, 0.0).pass);
  const auto bump = state_from(g, params, [](double x) { return std::max(0.0, 0.25 - (x - 0.2) * (x - 0.2)); },
                               FrameTag::RescaledV);
  const auto r = symmetry_inequality_check(bump, 0.7, 0.0);
  CHECK(r.pass);
  CHECK(r.pairs > 0);
  // A value far out above the centre violates it.
  const auto spike = state_from(g, params, [](double x) { return std::abs(x - 3) < 0.2 ? 1.0 : 0.0; },
                                FrameTag::RescaledV);
  CHECK(!symmetry_inequality_check(spike, 0.5, 0.0).pass);
  const auto small = make_grid(GridKind::Line, 1.0, 100);
  const auto none = symmetry_inequality_check(state_from(small, params, [](double) { return 0.0; }, FrameTag::RescaledV),
                                              0.6, 0.0);
  CHECK(none.skipped);
  CHECK(thrown_kind([&] { symmetry_inequality_check(hat.with_frame({FrameTag::Original, 0.0}), 0.5, 0.0); }) ==
        ErrorKind::InvalidFrame);
}

TEST_CASE("asymmetric bump keeps the reflection inequality") {
  const ModelParamsd params(3, 1);
  const auto g = make_grid(GridKind::Line, 8.0, 320);
  const auto v0 = sample_initial<double>(BumpData<double>{0.3, 1.0, 0.2}, g, params, {FrameTag::RescaledV, 0.0});
  RateSeries<double> support(SeriesLabel::SupportRadius, FrameTag::RescaledV);
  EvolveOptions<double> opt;
  for (int k = 1; k <= 10; ++k) opt.output_times.push_back(0.5 * k);
  opt.observer = [&](const SolutionStated& s) { support.push(s.clock(), support_radius(s)); };
  const auto v = evolve(v0, EquationForm::RescaledV, 5.0, opt);
  const auto r = symmetry_inequality_check(v, 0.5, 5 * g.h());
  CHECK(r.pass);
  CHECK(r.pairs > 0);
  CHECK(is_nonincreasing(std::vector<double>(support.values().rbegin(), support.values().rend())));
}

TEST_CASE("grow-up exponent fit") {
  const ModelParamsd params(3, 1);
  const auto s = series(SeriesLabel::PointValue, [](double t) { return 3 * t * t; }, 1, 100, 99);
  const auto r = fit_growup_exponent(s, params);
  CHECK(r.expected == doctest::Approx(2.0));
  CHECK(r.slope == doctest::Approx(2.0));
  CHECK(r.epsilon == doctest::Approx(3.0));
  CHECK(r.endpoint_ratio == doctest::Approx(std::log(3e4) / std::log(100.0)));
  const auto zero = series(SeriesLabel::PointValue, [](double) { return 0.0; }, 1, 100, 99);
  CHECK(thrown_kind([&] { fit_growup_exponent(zero, params); }) == ErrorKind::InvalidWindow);
}

TEST_CASE("nonincreasing helper") {
  CHECK(is_nonincreasing<double>({3, 2, 2, 1}));
  CHECK(!is_nonincreasing<double>({3, 2, 2.5}));
  CHECK(is_nonincreasing<double>({3, 2, 2.5}, 0.5));
  CHECK(is_nonincreasing<double>({}));
}

TEST_CASE("discrete residual of the exact wave shrinks with h") {
  const ModelParamsd params(3, 1);
  std::vector<double> res;
  for (int n : {200, 400, 800}) {
    const Gridd line(GridKind::Line, -2.0, 2.0, n);
    std::function<SolutionStated(double)> sample = [&](double tau) {
      return sample_initial<double>(ExplicitWaveData<double>{tau}, line, params, {FrameTag::RescaledV, tau});
    };
    const auto r = discrete_residual(EquationForm::RescaledV, sample, 0.5, 1e-4);
    // Away from the interface at x = 0.5.
    double worst = 0;
    for (std::ptrdiff_t i = 0; i < line.size(); ++i) {
      if (std::abs(line.node(i) - 0.5) > 0.2) worst = std::max(worst, std::abs(r[i]));
    }
    res.push_back(worst);
  }
  CHECK(res[1] < 0.6 * res[0]);
  CHECK(res[2] < 0.6 * res[1]);
}
