#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "ctqw/evolution.hpp"
#include "ctqw/expm.hpp"
#include "ctqw/large_gamma.hpp"

using namespace ctqw;
using std::numbers::pi;

namespace {

bool band(int j, int k, int n) { return j == k || wrap(j - k, n) == 1 || wrap(k - j, n) == 1; }

// Sup-norm gap between RK4 on the truncated model and the closed form.
double truncated_fidelity(int n, double gamma, double t_end) {
  const WalkConfig c(n, gamma);
  TruncatedState s = truncated_initial_state(n);
  const double dt = 0.05;
  const int steps = static_cast<int>(std::lround(t_end / dt));
  auto f = [&](const Eigen::VectorXd& y) {
    const TruncatedState d = truncated_rhs({y.head(n), y.tail(n)}, c);
    Eigen::VectorXd out(2 * n);
    out << d.a, d.d;
    return out;
  };
  Eigen::VectorXd y(2 * n);
  y << s.a, s.d;
  double err = 0.0;
  for (int i = 1; i <= steps; ++i) {
    y = rk4_step(y, dt, f);
    if (i % 20 == 0) err = std::max(err, (y.head(n) - closed_form_a(c, i * dt)).cwiseAbs().maxCoeff());
  }
  return err;
}

}  // namespace

TEST_CASE("diagonal sums") {
  const DiagonalSums d0 = diagonal_sums(initial_state(WalkConfig(6, 1.0)));
  CHECK(d0.d(0) == 1.0);
  CHECK(d0.d.tail(5).cwiseAbs().maxCoeff() == 0.0);
  const DiagonalSums du = diagonal_sums(stationary_state(6));
  CHECK(du.d(0) == doctest::Approx(1.0));
  CHECK(du.d.tail(5).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("minor diagonal sums decay as exp(-gamma t)") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 6;
  SMatrix s(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = j; k < n; ++k) s(j, k) = s(k, j) = u(rng);
  for (double g : {0.5, 5.0}) {
    const WalkConfig c(n, g);
    const DiagonalSums before = diagonal_sums(s);
    const SMatrix later = advance(s, c, 3.0, 1e-3);
    const DiagonalSums after = diagonal_sums(later);
    for (int k = 1; k < n; ++k) CHECK(std::abs(after.d(k) - before.d(k) * std::exp(-3.0 * g)) < 1e-8);
    CHECK(std::abs(after.d(0) - before.d(0)) < 1e-12);
  }
}

TEST_CASE("truncated right-hand side") {
  const WalkConfig c3(3, 10.0);
  TruncatedState eq{Eigen::VectorXd::Constant(3, 1.0 / 3), Eigen::VectorXd::Zero(3)};
  const TruncatedState z = truncated_rhs(eq, c3);
  CHECK(z.a.cwiseAbs().maxCoeff() < 1e-16);
  CHECK(z.d.cwiseAbs().maxCoeff() < 1e-16);

  const TruncatedState d = truncated_rhs(truncated_initial_state(3), c3);
  CHECK(d.a.cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.d(0) == doctest::Approx(-0.5));
  CHECK(d.d(2) == doctest::Approx(0.5));

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TruncatedState r{Eigen::VectorXd(7), Eigen::VectorXd(7)};
  for (int j = 0; j < 7; ++j) {
    r.a(j) = u(rng);
    r.d(j) = u(rng);
  }
  CHECK(std::abs(truncated_rhs(r, WalkConfig(7, 4.0)).a.sum()) < 1e-14);
}

TEST_CASE("mode rates") {
  const ModeRates r0 = mode_rates(0, WalkConfig(4, 10.0));
  CHECK(r0.gamma0 == 0.0);
  CHECK(r0.gamma1 == 10.0);
  const ModeRates r1 = mode_rates(1, WalkConfig(4, 10.0));
  CHECK(r1.gamma0 == doctest::Approx((10.0 - std::sqrt(99.0)) / 2).epsilon(1e-13));
  CHECK(r1.gamma1 == doctest::Approx(9.9749372).epsilon(1e-8));
  CHECK(std::abs(r1.gamma0 - 0.025) < 3e-4);
  for (int n : {5, 12})
    for (double g : {2.0, 7.0, 300.0})
      for (int k = 1; k < n; ++k) {
        const ModeRates r = mode_rates(k, WalkConfig(n, g));
        const double s = std::sin(pi * k / n);
        CHECK(std::abs(r.gamma0 + r.gamma1 - g) <= 1e-12 * g);
        CHECK(std::abs(r.gamma0 * r.gamma1 - s * s / 2) <= 1e-12);
      }
  CHECK(large_gamma_valid(2.0));
  CHECK_FALSE(large_gamma_valid(1.5));
  CHECK_THROWS_AS(mode_rates(2, WalkConfig(4, 0.5)), std::domain_error);
}

TEST_CASE("closed-form populations") {
  const WalkConfig c(9, 6.0);
  const Distribution p0 = closed_form_a(c, 0.0);
  CHECK(std::abs(p0(0) - 1.0) < 1e-14);
  CHECK(p0.tail(8).cwiseAbs().maxCoeff() < 1e-14);
  const Distribution late = closed_form_a(c, 100.0 * 6.0 * 81);
  CHECK((late.array() - 1.0 / 9).abs().maxCoeff() < 1e-12);
  CHECK_THROWS(closed_form_a(WalkConfig(9, 0.0), 1.0));

  // Classical heat kernel with hop rate 1/(8 gamma).
  for (int n : {5, 12})
    for (double g : {5.0, 50.0}) {
      const double r = 1.0 / (8.0 * g);
      Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
      for (int j = 0; j < n; ++j) {
        lap(j, j) = -2.0 * r;
        lap(j, wrap(j + 1, n)) += r;
        lap(j, wrap(j - 1, n)) += r;
      }
      for (double t : {1.0, 100.0})
        CHECK((closed_form_a(WalkConfig(n, g), t) - expm(lap * t).col(0)).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("closed form tracks the full recurrence within 2/gamma") {
  const WalkConfig c(10, 10.0);
  const SMatrix s = advance(initial_state(c), c, 500.0, 0.01);
  CHECK((diagonal_distribution(s) - closed_form_a(c, 500.0)).cwiseAbs().maxCoeff() <= 2.0 / 10.0);
}

TEST_CASE("truncated-model fidelity improves like 1/gamma") {
  const double e10 = truncated_fidelity(10, 10.0, 2000.0);
  const double e40 = truncated_fidelity(10, 40.0, 2000.0);
  CHECK(e10 <= 5e-3);
  CHECK(e40 <= e10 / 4.0);
}

TEST_CASE("full large-gamma state") {
  const int n = 10;
  const WalkConfig c(n, 20.0);
  const SMatrix s = full_large_gamma_state(c, 10.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (!band(j, k, n)) CHECK(s(j, k) == 0.0);
  for (int j = 0; j < n; ++j) CHECK(std::abs(s(j, wrap(j + 1, n))) <= 2.0 / 20.0);

  const SMatrix s0 = full_large_gamma_state(c, 0.0);
  CHECK((s0 - initial_state(c)).cwiseAbs().maxCoeff() < 1e-14);

  // Residual of the recurrence on the retained band falls like 1/gamma^2.
  auto band_residual = [&](double g) {
    const WalkConfig cg(n, g);
    const SMatrix r = full_large_gamma_rate(cg, 1.0) - s_rhs(full_large_gamma_state(cg, 1.0), cg);
    double m = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (band(j, k, n)) m = std::max(m, std::abs(r(j, k)));
    return m;
  };
  const double c10 = band_residual(10.0) * 100.0;
  for (double g : {20.0, 40.0}) CHECK(band_residual(g) <= 1.1 * c10 / (g * g));
}

TEST_CASE("large-gamma bounds") {
  const BoundsReport b = large_gamma_bounds(10, 10.0, 0.01);
  const double s2 = std::pow(std::sin(pi / 10), 2);
  CHECK(b.t_lower == doctest::Approx(20.0 / s2 * std::log(20.0)));
  CHECK(b.t_lower == doctest::Approx(627.4).epsilon(1e-4));
  CHECK(b.t_upper == doctest::Approx(500.0 * std::log(201.0)));
  CHECK(b.t_upper == doctest::Approx(2651.7).epsilon(1e-4));
  CHECK(b.t_lower_conclusions == doctest::Approx(b.t_lower_large_n / 2));
  CHECK(b.valid);
  CHECK(large_gamma_bounds(10, 10.0, 0.2).t_lower == 0.0);
  CHECK_FALSE(large_gamma_bounds(10, 1.0, 0.01).valid);
  CHECK_THROWS_AS(large_gamma_bounds(10, 10.0, 2.0), std::invalid_argument);
}
