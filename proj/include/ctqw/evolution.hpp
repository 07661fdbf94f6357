// Time integration of the two master equations, and exact propagators used
// as oracles.
#ifndef CTQW_EVOLUTION_HPP
#define CTQW_EVOLUTION_HPP

#include <cmath>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "ctqw/walk_model.hpp"

namespace ctqw {

/// Which master equation to integrate.
enum class Model { SLiteral, Rho };

Model parse_model(std::string_view name);
std::string_view to_string(Model model);

struct TimeGrid {
  double t_start = 0.0;
  double t_end = 1.0;
  double dt = 1e-3;
  int sample_stride = 1;

  void validate() const;
};

struct TimeSeries {
  std::vector<double> times;
  std::vector<Distribution> dists;
  // Snapshots, only filled on request and only for the integrated model.
  std::vector<SMatrix> s_states;
  std::vector<RhoMatrix> rho_states;
};

/// Generator L + U acting on row-major vectorized S (index mu*N + nu).
struct FullOperator {
  Eigen::MatrixXd matrix;
  int n = 0;
};

FullOperator build_full_operator(const WalkConfig& config);

Eigen::VectorXd vectorize(const SMatrix& s);
SMatrix unvectorize(const Eigen::VectorXd& v, int n);

inline constexpr int kMaxExactN = 64;

/// S(t) = exp(t (L + U)) S(0) through the dense N^2 x N^2 exponential.
SMatrix exact_evolve(const WalkConfig& config, double t);

/// Classical fourth-order Runge-Kutta step.
template <typename State, typename Rhs>
State rk4_step(const State& y, double dt, Rhs&& f) {
  const State k1 = f(y);
  const State k2 = f(State(y + (0.5 * dt) * k1));
  const State k3 = f(State(y + (0.5 * dt) * k2));
  const State k4 = f(State(y + dt * k3));
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Largest step the integrators accept: min(dt, 0.1 / max(gamma, 1)).
double stable_step(const WalkConfig& config, double dt_requested);

/// Advance a state by `duration` with equal RK4 steps no longer than
/// stable_step(config, dt). Throws std::runtime_error on non-finite values.
SMatrix advance(const SMatrix& state, const WalkConfig& config, double duration, double dt);
RhoMatrix advance(const RhoMatrix& state, const WalkConfig& config, double duration, double dt);

/// Fixed-step RK4 trajectory from the delta initial condition at t = 0.
/// Samples every `sample_stride` steps in [t_start, t_end]; t_end is always
/// sampled.
TimeSeries integrate(Model model, const WalkConfig& config, const TimeGrid& grid,
                     bool keep_matrices = false);

/// Exact evolution of the S-literal model in the torus Fourier basis.
///
/// The generator commutes with the simultaneous shift (j, k) -> (j+1, k+1),
/// so it splits into N blocks labelled by q = m + n mod N. Block q acts on
/// the modes (m, q - m) as diag(lambda) - gamma I + (gamma / N) 1 1^T.
/// Only the sum of each block's coefficients enters the diagonal of S, so
/// the distribution costs N exponentials of N x N matrices.
class ModeBlockEvolution {
 public:
  explicit ModeBlockEvolution(const WalkConfig& config);

  const WalkConfig& config() const { return config_; }
  const std::vector<Eigen::MatrixXcd>& blocks() const { return blocks_; }

  Distribution distribution(double t) const;

  /// Distributions at t = 0, step, ..., count * step.
  std::vector<Distribution> scan(double step, int count) const;

 private:
  Distribution assemble(const Eigen::VectorXcd& block_sums) const;

  WalkConfig config_;
  std::vector<Eigen::MatrixXcd> blocks_;
};

}  // namespace ctqw

#endif  // CTQW_EVOLUTION_HPP
