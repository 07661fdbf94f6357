// Decoherent continuous-time quantum walk on the N-cycle: problem instance,
// the two state representations and their master-equation right-hand sides.
//
// Units: hbar = 1, time in units of the inverse hopping scale. Indices are
// taken modulo N everywhere (cyclic graph).
#ifndef CTQW_WALK_MODEL_HPP
#define CTQW_WALK_MODEL_HPP

#include <complex>
#include <cstdlib>
#include <stdexcept>

#include <Eigen/Dense>

namespace ctqw {

using Complex = std::complex<double>;

/// Real S-representation state, S_{j,k} = i^{k-j} rho_{j,k}.
using SMatrix = Eigen::MatrixXd;
/// Density matrix in the vertex basis.
using RhoMatrix = Eigen::MatrixXcd;
/// Probability vector over the cycle vertices.
using Distribution = Eigen::VectorXd;

/// Cycle size and decoherence rate. Construction validates both.
class WalkConfig {
 public:
  WalkConfig(int n, double gamma);

  int n() const { return n_; }
  double gamma() const { return gamma_; }

 private:
  int n_;
  double gamma_;
};

inline int wrap(int index, int n) {
  const int r = index % n;
  return r < 0 ? r + n : r;
}

/// delta_{j,0} delta_{k,0}: the walker starts on vertex 0.
SMatrix initial_state(const WalkConfig& config);
RhoMatrix initial_rho(const WalkConfig& config);

/// dS/dt of the real recurrence with literal cyclic indices.
SMatrix s_rhs(const SMatrix& state, const WalkConfig& config);

/// drho/dt of the monitored (dephasing) master equation.
RhoMatrix rho_rhs(const RhoMatrix& state, const WalkConfig& config);

/// i^p for integer p, exact.
inline Complex i_power(int p) {
  switch (wrap(p, 4)) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// S_{j,k} = i^{k-j} rho_{j,k} with j, k the integer representatives
/// 0..N-1 (the phase is not reduced across the cycle seam). The result is
/// complex in general; it is real when rho comes from a walk state and
/// N is a multiple of 4.
template <typename Derived>
Eigen::MatrixXcd rho_to_s(const Eigen::MatrixBase<Derived>& rho) {
  Eigen::MatrixXcd s(rho.rows(), rho.cols());
  for (Eigen::Index j = 0; j < rho.rows(); ++j)
    for (Eigen::Index k = 0; k < rho.cols(); ++k)
      s(j, k) = i_power(static_cast<int>(k - j)) * Complex(rho(j, k));
  return s;
}

/// Inverse of rho_to_s: rho_{j,k} = i^{j-k} S_{j,k}.
template <typename Derived>
RhoMatrix s_to_rho(const Eigen::MatrixBase<Derived>& s) {
  RhoMatrix rho(s.rows(), s.cols());
  for (Eigen::Index j = 0; j < s.rows(); ++j)
    for (Eigen::Index k = 0; k < s.cols(); ++k)
      rho(j, k) = i_power(static_cast<int>(j - k)) * Complex(s(j, k));
  return rho;
}

/// P_j = Re(state_{j,j}).
template <typename Derived>
Distribution diagonal_distribution(const Eigen::MatrixBase<Derived>& state) {
  Distribution p(state.rows());
  for (Eigen::Index j = 0; j < state.rows(); ++j) p(j) = std::real(state(j, j));
  return p;
}

/// Uniform distribution 1/N.
Distribution uniform_distribution(int n);

/// S0 = identity / N, the stationary state of both equations.
SMatrix stationary_state(int n);

}  // namespace ctqw

#endif  // CTQW_WALK_MODEL_HPP
