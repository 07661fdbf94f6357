// Closed-form unitary walk, the torus eigensystem of the hopping operator
// and its first-order perturbation by the dephasing term.
#ifndef CTQW_SPECTRAL_HPP
#define CTQW_SPECTRAL_HPP

#include <string_view>
#include <vector>

#include "ctqw/walk_model.hpp"

namespace ctqw {

enum class DegeneracyClass { Zero, Diagonal, OffDiagonal, Simple };

std::string_view to_string(DegeneracyClass c);

struct TorusMode {
  int m = 0;
  int n = 0;
  Complex lambda;        // purely imaginary
  double lambda_tilde;   // first-order real correction
  DegeneracyClass degeneracy_class;
};

/// Eigenvalues 2 cos(2 pi j / N) of the cycle adjacency matrix.
std::vector<double> cycle_eigenvalues(int n);

/// Amplitudes of the unitary walk exp(-i t A)|0>, global phase dropped.
Eigen::VectorXcd unitary_amplitudes(int n, double t);

/// |psi_j(t)|^2 of unitary_amplitudes.
Distribution unitary_distribution(int n, double t);

/// M_j(t) = (1/N) sum_m exp(i t sin(2 pi m / N)) omega^{m j}.
Complex m_function(int n, int j, double t);

/// lambda_{(m,n)} = i sin(pi (m+n) / N) cos(pi (m-n) / N).
Complex torus_eigenvalue(int m, int n, int size);

/// Fourier mode V^{(m,n)}_{(mu,nu)} = exp(2 pi i (m mu + n nu) / N) / N,
/// row-major vectorized like FullOperator.
Eigen::VectorXcd torus_eigenvector(int m, int n, int size);

/// <V^{(m,n)}, U V^{(mp,np)}>, in closed form.
double u_similarity(int m, int n, int mp, int np, int size, double gamma);

DegeneracyClass classify_degeneracy(int m, int n, int size);

/// Every torus mode with its eigenvalue, correction and class.
std::vector<TorusMode> torus_modes(const WalkConfig& config);

/// lambda_{(m,n)} plus the first-order correction of its class:
/// -gamma (N-2)/N for off-diagonal pairs, -gamma (N-1)/N otherwise.
Complex perturbed_eigenvalue(int m, int n, const WalkConfig& config);

/// First-order small-gamma distribution: 1/N plus the non-zero-class
/// modes, each damped at its corrected rate.
Distribution perturbative_distribution(const WalkConfig& config, double t);

/// (1 / gamma) ln(N / eps) [1 + 2 / (N - 2)].
double small_gamma_mixing_bound(int n, double gamma, double eps);

}  // namespace ctqw

#endif  // CTQW_SPECTRAL_HPP
