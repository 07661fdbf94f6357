#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ctqw/spectral.hpp"
#include "ctqw/sweep.hpp"

using namespace ctqw;

namespace {

const SweepResult& n10_sweep() {
  static const SweepResult r = sweep_gamma(10, kDefaultEps, default_gamma_grid(), Method::Exact, 2);
  return r;
}

bool same(const SweepResult& a, const SweepResult& b) {
  if (a.points.size() != b.points.size()) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const auto& p = a.points[i];
    const auto& q = b.points[i];
    if (p.gamma != q.gamma || p.t_mix != q.t_mix || p.converged != q.converged) return false;
  }
  return a.gamma_opt == b.gamma_opt && a.t_opt == b.t_opt;
}

}  // namespace

TEST_CASE("log-spaced grid") {
  const auto g = default_gamma_grid();
  REQUIRE(g.size() == 25);
  CHECK(g.front() == 1e-3);
  CHECK(g.back() == 1e2);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(std::pow(1e5, 1.0 / 24)));
  CHECK_THROWS_AS(log_spaced(0.0, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(log_spaced(1.0, 1.0, 5), std::invalid_argument);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(sweep_gamma(10, 0.01, {}, Method::Exact), std::invalid_argument);
  CHECK_THROWS_AS(sweep_gamma(10, 0.01, {0.1, 0.05}, Method::Exact), std::invalid_argument);
  CHECK_THROWS_AS(sweep_gamma(10, 0.01, {0.0, 0.05}, Method::Exact), std::invalid_argument);
  CHECK_THROWS_AS(sweep_gamma(2, 0.01, {0.1}, Method::Exact), std::invalid_argument);
}

TEST_CASE("N=10 sweep shape") {
  const SweepResult& r = n10_sweep();
  CHECK(sign_changes(r) == 1);
  CHECK(r.gamma_opt > 1e-3);
  CHECK(r.gamma_opt < 1e2);
  MESSAGE("N=10 grid optimum gamma=" << r.gamma_opt << " t=" << r.t_opt);
  CHECK(r.points.front().t_mix <= small_gamma_mixing_bound(10, r.points.front().gamma, kDefaultEps));
  CHECK(r.points.back().t_mix >= r.t_opt);

  const Optimum grid = optimal_gamma(r, false);
  CHECK(grid.gamma == r.gamma_opt);
  CHECK_FALSE(grid.refined);
  const Optimum fine = optimal_gamma(r, true);
  CHECK(fine.refined);
  CHECK(fine.t_mix <= grid.t_mix);

  CHECK(loglog_slope(r, 5, true) == doctest::Approx(-1.0).epsilon(0.15));
  CHECK(loglog_slope(r, 5, false) == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("determinism and thread-count independence") {
  const auto g = log_spaced(1e-2, 10.0, 9);
  const SweepResult a = sweep_gamma(7, 0.01, g, Method::Exact, 1);
  const SweepResult b = sweep_gamma(7, 0.01, g, Method::Exact, 1);
  const SweepResult c = sweep_gamma(7, 0.01, g, Method::Exact, 4);
  CHECK(same(a, b));
  CHECK(same(a, c));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(a.points[i].gamma == g[i]);
}

TEST_CASE("boundary minimum is refused") {
  // Small-gamma side only: t_mix keeps falling across the grid.
  const SweepResult r = sweep_gamma(10, 0.01, log_spaced(1e-3, 1e-2, 5), Method::Exact);
  CHECK_THROWS_AS(optimal_gamma(r, false), std::domain_error);
  CHECK(r.gamma_opt == 1e-2);
}

TEST_CASE("per-point failures are recorded, not fatal") {
  MixingOptions bad;
  bad.grid_intervals = 0;
  const SweepResult r = sweep_gamma(6, 0.01, {0.1, 10.0}, Method::Exact, 1, bad);
  for (const auto& p : r.points) {
    CHECK_FALSE(p.converged);
    CHECK_FALSE(p.error.empty());
    CHECK(std::isnan(p.t_mix));
  }
  CHECK(std::isnan(r.gamma_opt));
}

TEST_CASE("transition report") {
  const auto rows = transition_report({5, 6}, 0.01, default_gamma_grid(), Method::Exact, 2);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.interior);
    CHECK(row.sign_changes == 1);
    CHECK(row.slope_small == doctest::Approx(-1.0).epsilon(0.15));
    CHECK(row.slope_large == doctest::Approx(1.0).epsilon(0.15));
  }
}
