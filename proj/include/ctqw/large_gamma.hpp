// Strong-decoherence regime: diagonal sums of S, the truncated model on the
// main and first minor diagonals, its slow-mode closed form and the
// mixing-time bounds that follow from it.
#ifndef CTQW_LARGE_GAMMA_HPP
#define CTQW_LARGE_GAMMA_HPP

#include "ctqw/walk_model.hpp"

namespace ctqw {

/// d[k] = sum_j S_{j, j+k mod N}.
struct DiagonalSums {
  Eigen::VectorXd d;
};

DiagonalSums diagonal_sums(const SMatrix& state);

/// a_j = S_{j,j}, d_j = S_{j,j+1} + S_{j+1,j}.
struct TruncatedState {
  Eigen::VectorXd a;
  Eigen::VectorXd d;
};

TruncatedState truncated_initial_state(int n);
TruncatedState truncated_rhs(const TruncatedState& state, const WalkConfig& config);

/// Truncated model valid in its derivation regime (real roots for every k).
inline constexpr double kLargeGammaThreshold = 2.0;
inline bool large_gamma_valid(double gamma) { return gamma >= kLargeGammaThreshold; }

/// Roots gamma0 < gamma1 of x (gamma - x) = sin^2(pi k / N) / 2.
struct ModeRates {
  int k = 0;
  double gamma0 = 0.0;
  double gamma1 = 0.0;
};

ModeRates mode_rates(int k, const WalkConfig& config);

/// Slow-mode solution a_j(t) = (1/N) sum_k exp(-sin^2(pi k/N) t / (2 gamma)) omega^{jk}.
Distribution closed_form_a(const WalkConfig& config, double t);

/// Tri-diagonal S(t) (cyclic): a_j on the diagonal, d_j / 2 on both
/// neighbours, zero elsewhere. d_j keeps both decay branches.
SMatrix full_large_gamma_state(const WalkConfig& config, double t);

/// Exact time derivative of full_large_gamma_state.
SMatrix full_large_gamma_rate(const WalkConfig& config, double t);

struct BoundsReport {
  int n = 0;
  double gamma = 0.0;
  double eps = 0.0;
  double t_lower = 0.0;          // 0 when the bound is vacuous (eps >= 2/N)
  double t_upper = 0.0;
  double t_lower_large_n = 0.0;  // (2 gamma N^2 / pi^2) ln(2 / (N eps))
  double t_lower_conclusions = 0.0;  // the same with gamma N^2 / pi^2
  bool valid = false;            // large_gamma_valid(gamma)
};

BoundsReport large_gamma_bounds(int n, double gamma, double eps);

}  // namespace ctqw

#endif  // CTQW_LARGE_GAMMA_HPP
