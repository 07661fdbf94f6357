#include "ctqw/walk_model.hpp"

#include <cmath>
#include <string>

namespace ctqw {

WalkConfig::WalkConfig(int n, double gamma) : n_(n), gamma_(gamma) {
  if (n < 3) throw std::invalid_argument("cycle size must be >= 3, got " + std::to_string(n));
  if (!std::isfinite(gamma) || gamma < 0.0)
    throw std::invalid_argument("decoherence rate must be finite and >= 0");
}

SMatrix initial_state(const WalkConfig& config) {
  SMatrix s = SMatrix::Zero(config.n(), config.n());
  s(0, 0) = 1.0;
  return s;
}

RhoMatrix initial_rho(const WalkConfig& config) {
  RhoMatrix rho = RhoMatrix::Zero(config.n(), config.n());
  rho(0, 0) = 1.0;
  return rho;
}

namespace {

template <typename Derived>
void check_square(const Eigen::MatrixBase<Derived>& state, const WalkConfig& config) {
  if (state.rows() != config.n() || state.cols() != config.n())
    throw std::invalid_argument("state is " + std::to_string(state.rows()) + "x" +
                                std::to_string(state.cols()) + ", config expects N=" +
                                std::to_string(config.n()));
}

}  // namespace

SMatrix s_rhs(const SMatrix& state, const WalkConfig& config) {
  check_square(state, config);
  const int n = config.n();
  const double gamma = config.gamma();
  SMatrix out(n, n);
  for (int j = 0; j < n; ++j) {
    const int jp = wrap(j + 1, n);
    const int jm = wrap(j - 1, n);
    for (int k = 0; k < n; ++k) {
      const int kp = wrap(k + 1, n);
      const int km = wrap(k - 1, n);
      double v = 0.25 * (state(j, kp) + state(jp, k) - state(jm, k) - state(j, km));
      if (j != k) v -= gamma * state(j, k);
      out(j, k) = v;
    }
  }
  return out;
}

RhoMatrix rho_rhs(const RhoMatrix& state, const WalkConfig& config) {
  check_square(state, config);
  const int n = config.n();
  const double gamma = config.gamma();
  const Complex quarter_i(0.0, 0.25);
  RhoMatrix out(n, n);
  for (int j = 0; j < n; ++j) {
    const int jp = wrap(j + 1, n);
    const int jm = wrap(j - 1, n);
    for (int k = 0; k < n; ++k) {
      const int kp = wrap(k + 1, n);
      const int km = wrap(k - 1, n);
      Complex v = quarter_i * (state(j, kp) - state(jp, k) - state(jm, k) + state(j, km));
      if (j != k) v -= gamma * state(j, k);
      out(j, k) = v;
    }
  }
  return out;
}

Distribution uniform_distribution(int n) { return Distribution::Constant(n, 1.0 / n); }

SMatrix stationary_state(int n) { return SMatrix::Identity(n, n) / static_cast<double>(n); }

}  // namespace ctqw
