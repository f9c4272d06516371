#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gradflow/analysis.hpp"
#include "gradflow/initial_data.hpp"
#include "test_util.hpp"

using namespace gradflow;

TEST_CASE("model parameters derive q, m and c_p") {
  for (double p : {2.5, 3.0, 4.0, 7.0}) {
    const ModelParamsd params(p, 2);
    CHECK(params.q() == doctest::Approx(p - 1));
    CHECK(params.m() == doctest::Approx((p - 1) / (p - 2)));
    CHECK(params.m() > 1);
    CHECK(params.cp() == doctest::Approx(std::pow(p - 2, 1 / (p - 2)) * std::pow(p - 1, (p - 1) / (p - 2))));
  }
  CHECK(ModelParamsd(3, 1).cp() == doctest::Approx(4.0));
  CHECK(thrown_kind([] { ModelParamsd(2.0, 1); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([] { ModelParamsd(1.5, 1); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([] { ModelParamsd(3.0, 0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("make_grid examples") {
  const auto radial = make_grid(GridKind::Radial, 2.0, 4);
  CHECK(radial.h() == doctest::Approx(0.5));
  const double expect_r[] = {0, 0.5, 1.0, 1.5, 2.0};
  for (int i = 0; i < 5; ++i) CHECK(radial.node(i) == doctest::Approx(expect_r[i]));

  const auto line = make_grid(GridKind::Line, 1.0, 2);
  CHECK(line.node(0) == doctest::Approx(-1.0));
  CHECK(line.node(1) == doctest::Approx(0.0));
  CHECK(line.node(2) == doctest::Approx(1.0));

  CHECK(thrown_kind([] { make_grid(GridKind::Radial, 0.0, 8); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([] { make_grid(GridKind::Radial, -1.0, 8); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([] { make_grid(GridKind::Radial, 1.0, 1); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("grid nodes increase strictly and end exactly at x_max") {
  const auto g = make_line_grid(-0.3, 1.7, 37);
  const auto x = g.nodes();
  for (Eigen::Index i = 1; i < x.size(); ++i) CHECK(x[i] > x[i - 1]);
  CHECK(x[x.size() - 1] == 1.7);
  CHECK(x[0] == -0.3);
}

TEST_CASE("solution states reject invalid values") {
  const auto g = make_grid(GridKind::Radial, 1.0, 8);
  const ModelParamsd params(3, 1);
  Field<double> v = Field<double>::Zero(9);
  v[2] = -1e-3;
  CHECK(thrown_kind([&] { SolutionStated({}, g, v, params); }) == ErrorKind::InvalidArgument);
  v[2] = std::nan("");
  CHECK(thrown_kind([&] { SolutionStated({}, g, v, params); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([&] { SolutionStated({}, g, Field<double>::Zero(5), params); }) == ErrorKind::GridMismatch);
  CHECK(thrown_kind([&] { SolutionStated({FrameTag::Original, -1.0}, g, Field<double>::Zero(9), params); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("support threshold scales with the sup") {
  const auto g = make_grid(GridKind::Radial, 1.0, 8);
  const ModelParamsd params(3, 1);
  Field<double> v = Field<double>::Zero(9);
  v[0] = 0.5;
  CHECK(SolutionStated({}, g, v, params).support_threshold() == doctest::Approx(1e-12));
  v[0] = 1e4;
  CHECK(SolutionStated({}, g, v, params).support_threshold() == doctest::Approx(1e-8));
}

TEST_CASE("preset point values") {
  const ModelParamsd p3(3, 1);
  CHECK(evaluate_initial<double>(SandpileData{}, 0.0, p3) == doctest::Approx(0.25));
  CHECK(evaluate_initial<double>(SandpileData{}, 1.0, p3) == 0.0);
  CHECK(evaluate_initial<double>(SandpileData{}, -1.0, p3) == 0.0);
  CHECK(evaluate_initial<double>(ExplicitWaveData<double>{0.0}, -2.0, p3) == doctest::Approx(1.0));
  CHECK(evaluate_initial<double>(ExplicitWaveData<double>{0.0}, 0.5, p3) == 0.0);
  CHECK(evaluate_initial<double>(BumpData<double>{2.0, 3.0, 0.0}, 1.0, p3) == doctest::Approx(3.0 * 0.75 * 0.75));
}

TEST_CASE("sampled sandpile matches the closed form at every node") {
  for (double p : {2.5, 3.0, 4.0}) {
    const ModelParamsd params(p, 1);
    const auto g = make_grid(GridKind::Line, 1.5, 300);
    const auto s = sample_initial<double>(SandpileData{}, g, params);
    for (std::ptrdiff_t i = 0; i < g.size(); ++i) {
      const double y = std::abs(g.node(i));
      const double oracle = y < 1 ? std::pow((p - 2) / (p - 1) * (1 - y), (p - 1) / (p - 2)) : 0.0;
      CHECK(s.values()[i] == doctest::Approx(oracle).epsilon(1e-14));
    }
  }
}

TEST_CASE("sampled presets are nonnegative, vanish at the outer node and respect the Lipschitz bound") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const ModelParamsd params(2.2 + 2 * U(gen), 1 + k % 3);
    const double R0 = 0.2 + 2 * U(gen), A = 0.1 + 3 * U(gen);
    const auto g = make_grid(GridKind::Radial, R0 * 1.5, 200);
    const auto s = sample_initial<double>(BumpData<double>{R0, A, 0.0}, g, params);
    CHECK((s.values() >= 0).all());
    CHECK(s.values()[g.n_cells()] == 0.0);
    CHECK(lipschitz_constant(s) <= 2 * A / R0);
    CHECK(support_radius(s) <= R0 + g.h() / 2);  // radius reports the half-cell past the last node
  }
}

TEST_CASE("presets that do not fit the mesh are refused") {
  const ModelParamsd params(3, 1);
  const auto g = make_grid(GridKind::Radial, 1.0, 50);
  CHECK(thrown_kind([&] { sample_initial<double>(BumpData<double>{1.0, 1.0, 0.0}, g, params); }) ==
        ErrorKind::DomainTooSmall);
  CHECK(thrown_kind([&] { sample_initial<double>(SandpileData{}, g, params); }) == ErrorKind::DomainTooSmall);
  CHECK(thrown_kind([&] { sample_initial<double>(ExplicitWaveData<double>{0.0}, g, params); }) ==
        ErrorKind::InvalidArgument);
  const auto line = make_grid(GridKind::Line, 1.0, 50);
  CHECK(thrown_kind([&] { sample_initial<double>(BumpData<double>{0.5, 1.0, 0.6}, line, params); }) ==
        ErrorKind::DomainTooSmall);
}

TEST_CASE("table presets interpolate linearly and validate input") {
  const ModelParamsd params(3, 1);
  const TableData<double> t{{0.0, 0.5, 1.0}, {1.0, 0.5, 0.0}};
  CHECK(evaluate_initial<double>(t, 0.25, params) == doctest::Approx(0.75));
  CHECK(evaluate_initial<double>(t, 1.5, params) == 0.0);
  const auto g = make_grid(GridKind::Radial, 2.0, 20);
  CHECK(thrown_kind([&] { sample_initial<double>(TableData<double>{{0.0, 1.0}, {1.0, -1.0}}, g, params); }) ==
        ErrorKind::InvalidArgument);
  CHECK(thrown_kind([&] { sample_initial<double>(TableData<double>{{1.0, 0.0}, {1.0, 0.0}}, g, params); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("lemma constants") {
  // R_p = (p−2)/(2^p (p−1)), T_p = 2(p−1)/(p−2)·(2 + 2^{p−1}(N+p−2)).
  const ModelParamsd params(3, 1);
  CHECK(profiles::lemma_radius_bound(params) == doctest::Approx(1.0 / 16));
  CHECK(profiles::lemma_time_bound(params) == doctest::Approx(4.0 * (2 + 4 * 2)));
}
