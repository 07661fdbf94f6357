#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "ctqw/evolution.hpp"
#include "ctqw/expm.hpp"

using namespace ctqw;

namespace {

double max_diag_error(const TimeSeries& series, const WalkConfig& c) {
  double err = 0.0;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const Distribution ref = diagonal_distribution(exact_evolve(c, series.times[i]));
    err = std::max(err, (series.dists[i] - ref).cwiseAbs().maxCoeff());
  }
  return err;
}

}  // namespace

TEST_CASE("model names") {
  CHECK(parse_model("s-literal") == Model::SLiteral);
  CHECK(parse_model("rho") == Model::Rho);
  CHECK(to_string(Model::Rho) == "rho");
  CHECK_THROWS_AS(parse_model("density"), std::invalid_argument);
}

TEST_CASE("time grid validation") {
  CHECK_NOTHROW(TimeGrid{0.0, 1.0, 0.1, 1}.validate());
  CHECK_THROWS_AS((TimeGrid{1.0, 1.0, 0.1, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((TimeGrid{0.0, 1.0, 2.0, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((TimeGrid{0.0, 1.0, 0.0, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((TimeGrid{0.0, 1.0, 0.1, 0}.validate()), std::invalid_argument);
}

TEST_CASE("full operator reproduces s_rhs") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {3, 4, 7}) {
    for (double g : {0.0, 2.0}) {
      const WalkConfig c(n, g);
      const FullOperator op = build_full_operator(c);
      SMatrix s(n, n);
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) s(j, k) = u(rng);
      CHECK((unvectorize(op.matrix * vectorize(s), n) - s_rhs(s, c)).cwiseAbs().maxCoeff() < 1e-14);
      CHECK((op.matrix * vectorize(stationary_state(n))).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
}

TEST_CASE("full operator structure at N=3") {
  const FullOperator free = build_full_operator(WalkConfig(3, 0.0));
  for (int r = 0; r < 9; ++r) {
    int nonzero = 0;
    for (int col = 0; col < 9; ++col) {
      const double v = free.matrix(r, col);
      if (v != 0.0) {
        ++nonzero;
        CHECK(std::abs(v) <= 0.5);
      }
    }
    CHECK(nonzero <= 4);
  }
  const FullOperator damped = build_full_operator(WalkConfig(3, 2.0));
  for (int mu = 0; mu < 3; ++mu)
    for (int nu = 0; nu < 3; ++nu) {
      const int r = mu * 3 + nu;
      CHECK(damped.matrix(r, r) - free.matrix(r, r) == (mu == nu ? 0.0 : -2.0));
    }
  // Diagonal-sum drift is zero: summing rows with mu == nu gives a zero row.
  Eigen::RowVectorXd drift = Eigen::RowVectorXd::Zero(9);
  for (int mu = 0; mu < 3; ++mu) drift += damped.matrix.row(mu * 4);
  CHECK(drift.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("exact_evolve") {
  const WalkConfig c4(4, 0.5);
  CHECK((exact_evolve(c4, 0.0) - initial_state(c4)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(exact_evolve(c4, 10.0).trace() - 1.0) < 1e-12);

  const WalkConfig c5(5, 1.0);
  CHECK((exact_evolve(c5, 200.0) - stationary_state(5)).cwiseAbs().maxCoeff() <= 1e-6);
  // The approach to S^0 is explained by the spectrum: one zero eigenvalue,
  // the rest strictly in the left half-plane.
  const Eigen::VectorXcd ev = build_full_operator(c5).matrix.eigenvalues();
  int zeros = 0;
  for (const auto& l : ev) {
    if (std::abs(l) < 1e-10)
      ++zeros;
    else
      CHECK(l.real() < -1e-3);
  }
  CHECK(zeros == 1);

  CHECK_THROWS_AS(exact_evolve(WalkConfig(kMaxExactN + 1, 1.0), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(exact_evolve(c4, -1.0), std::invalid_argument);
}

TEST_CASE("RK4 matches the exponential oracle") {
  const WalkConfig c(4, 0.5);
  const TimeSeries s = integrate(Model::SLiteral, c, {0.0, 50.0, 1e-3, 500});
  CHECK(max_diag_error(s, c) <= 1e-8);
  CHECK(s.times.back() == 50.0);
  for (std::size_t i = 1; i < s.times.size(); ++i) CHECK(s.times[i] > s.times[i - 1]);
  for (const auto& p : s.dists) CHECK(std::abs(p.sum() - 1.0) < 1e-10);

  for (int n : {5, 8}) {
    const WalkConfig cn(n, 1.0);
    const TimeSeries sn = integrate(Model::SLiteral, cn, {0.0, 20.0, 1e-3, 2000}, true);
    CHECK((sn.s_states.back() - exact_evolve(cn, 20.0)).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("unitary S-literal walk on C_4") {
  // Hopping is 1/4 in the master equation, so the diagonal runs at a
  // quarter of the speed of the bare adjacency walk: P_0 = cos^4(t/4).
  const WalkConfig c(4, 0.0);
  const TimeSeries s = integrate(Model::SLiteral, c, {0.0, 40.0, 1e-3, 400});
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    const double x = std::cos(s.times[i] / 4.0);
    CHECK(std::abs(s.dists[i](0) - std::pow(x, 4)) <= 1e-8);
  }
}

TEST_CASE("step halving shows fourth-order convergence") {
  const WalkConfig c(5, 1.0);
  const double t = 4.0;
  const SMatrix ref = exact_evolve(c, t);
  auto error = [&](double dt) {
    return (advance(initial_state(c), c, t, dt) - ref).cwiseAbs().maxCoeff();
  };
  const double e1 = error(0.1);
  const double e2 = error(0.05);
  CHECK(e1 / e2 >= 8.0);
}

TEST_CASE("stiffness cap") {
  CHECK(stable_step(WalkConfig(5, 0.5), 0.05) == 0.05);
  CHECK(stable_step(WalkConfig(5, 50.0), 0.05) == doctest::Approx(0.002));
}

TEST_CASE("rho model: positivity, hermiticity, trace") {
  for (int n : {5, 6}) {
    const WalkConfig c(n, 0.3);
    const TimeSeries s = integrate(Model::Rho, c, {0.0, 30.0, 1e-2, 10}, true);
    for (std::size_t i = 0; i < s.times.size(); ++i) {
      CHECK(s.dists[i].minCoeff() >= -1e-10);
      CHECK(std::abs(s.dists[i].sum() - 1.0) < 1e-10);
      const RhoMatrix& r = s.rho_states[i];
      CHECK((r - r.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("rho and S-literal diagonals agree when N is a multiple of 4") {
  const WalkConfig c(8, 1.0);
  const TimeGrid g{0.0, 20.0, 1e-2, 20};
  const TimeSeries a = integrate(Model::SLiteral, c, g);
  const TimeSeries b = integrate(Model::Rho, c, g);
  for (std::size_t i = 0; i < a.times.size(); ++i) CHECK((a.dists[i] - b.dists[i]).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("non-zero start time") {
  const WalkConfig c(5, 0.4);
  const TimeSeries s = integrate(Model::SLiteral, c, {3.0, 5.0, 1e-3, 100});
  CHECK(s.times.front() == doctest::Approx(3.0));
  CHECK(max_diag_error(s, c) <= 1e-8);
}

TEST_CASE("mode-block route equals the full exponential") {
  for (int n : {3, 4, 5, 7}) {
    for (double g : {0.0, 0.05, 3.0}) {
      const WalkConfig c(n, g);
      const ModeBlockEvolution blocks(c);
      CHECK(static_cast<int>(blocks.blocks().size()) == n);
      for (double t : {0.0, 0.7, 13.0}) {
        const Distribution ref = diagonal_distribution(exact_evolve(c, t));
        CHECK((blocks.distribution(t) - ref).cwiseAbs().maxCoeff() < 1e-12);
      }
      const auto scanned = blocks.scan(0.5, 8);
      REQUIRE(scanned.size() == 9);
      CHECK((scanned[8] - blocks.distribution(4.0)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}
