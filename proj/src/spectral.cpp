#include "ctqw/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ctqw {

namespace {

constexpr double kPi = std::numbers::pi;

Complex unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

// omega_N^p with the exponent reduced first, so large p keeps full accuracy.
Complex omega_power(long long p, int n) {
  long long r = p % n;
  if (r < 0) r += n;
  return unit_phase(2.0 * kPi * static_cast<double>(r) / n);
}

void check_mode(int m, int n, int size) {
  if (size < 1 || m < 0 || n < 0 || m >= size || n >= size)
    throw std::out_of_range("torus mode index out of range");
}

}  // namespace

std::string_view to_string(DegeneracyClass c) {
  switch (c) {
    case DegeneracyClass::Zero: return "zero";
    case DegeneracyClass::Diagonal: return "diagonal";
    case DegeneracyClass::OffDiagonal: return "off-diagonal";
    case DegeneracyClass::Simple: return "simple";
  }
  return "unknown";
}

std::vector<double> cycle_eigenvalues(int n) {
  if (n < 3) throw std::invalid_argument("cycle size must be >= 3");
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = 2.0 * std::cos(2.0 * kPi * j / n);
  return out;
}

Eigen::VectorXcd unitary_amplitudes(int n, double t) {
  const std::vector<double> lambda = cycle_eigenvalues(n);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
  for (int m = 0; m < n; ++m) {
    const Complex evolve = unit_phase(-t * lambda[m]);
    for (int j = 0; j < n; ++j) psi(j) += evolve * std::conj(omega_power(static_cast<long long>(m) * j, n));
  }
  return psi / static_cast<double>(n);
}

Distribution unitary_distribution(int n, double t) {
  return unitary_amplitudes(n, t).cwiseAbs2();
}

Complex m_function(int n, int j, double t) {
  if (n < 1 || j < 0 || j >= n) throw std::out_of_range("m_function: index out of range");
  Complex acc = 0.0;
  for (int m = 0; m < n; ++m)
    acc += unit_phase(t * std::sin(2.0 * kPi * m / n)) * omega_power(static_cast<long long>(m) * j, n);
  return acc / static_cast<double>(n);
}

Complex torus_eigenvalue(int m, int n, int size) {
  check_mode(m, n, size);
  return {0.0, std::sin(kPi * (m + n) / size) * std::cos(kPi * (m - n) / size)};
}

Eigen::VectorXcd torus_eigenvector(int m, int n, int size) {
  check_mode(m, n, size);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(size) * size);
  for (int mu = 0; mu < size; ++mu)
    for (int nu = 0; nu < size; ++nu)
      v(mu * size + nu) = omega_power(static_cast<long long>(m) * mu + static_cast<long long>(n) * nu, size) /
                          static_cast<double>(size);
  return v;
}

double u_similarity(int m, int n, int mp, int np, int size, double gamma) {
  check_mode(m, n, size);
  check_mode(mp, np, size);
  double u = 0.0;
  if (mp == m && np == n) u -= gamma;
  if (wrap((mp - m) + (np - n), size) == 0) u += gamma / size;
  return u;
}

DegeneracyClass classify_degeneracy(int m, int n, int size) {
  check_mode(m, n, size);
  if (wrap(m + n, size) == 0) return DegeneracyClass::Zero;
  if (m == n) return DegeneracyClass::Diagonal;
  // (n, m) is a distinct mode with the same eigenvalue whenever m != n.
  return DegeneracyClass::OffDiagonal;
}

namespace {

double correction(DegeneracyClass c, const WalkConfig& config) {
  const double n = config.n();
  if (c == DegeneracyClass::OffDiagonal) return -config.gamma() * (n - 2.0) / n;
  return -config.gamma() * (n - 1.0) / n;
}

}  // namespace

std::vector<TorusMode> torus_modes(const WalkConfig& config) {
  const int size = config.n();
  std::vector<TorusMode> modes;
  modes.reserve(static_cast<std::size_t>(size) * size);
  for (int m = 0; m < size; ++m) {
    for (int n = 0; n < size; ++n) {
      const DegeneracyClass c = classify_degeneracy(m, n, size);
      modes.push_back({m, n, torus_eigenvalue(m, n, size), correction(c, config), c});
    }
  }
  return modes;
}

Complex perturbed_eigenvalue(int m, int n, const WalkConfig& config) {
  const DegeneracyClass c = classify_degeneracy(m, n, config.n());
  return torus_eigenvalue(m, n, config.n()) + correction(c, config);
}

Distribution perturbative_distribution(const WalkConfig& config, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("perturbative_distribution: t must be >= 0");
  const int size = config.n();
  // Group modes by q = (m + n) mod N; only q enters the diagonal phase.
  Eigen::VectorXcd weight = Eigen::VectorXcd::Zero(size);
  for (int m = 0; m < size; ++m) {
    for (int n = 0; n < size; ++n) {
      const int q = wrap(m + n, size);
      if (q == 0) continue;
      weight(q) += std::exp(t * perturbed_eigenvalue(m, n, config));
    }
  }
  const double norm = 1.0 / (static_cast<double>(size) * size);
  Distribution p(size);
  for (int j = 0; j < size; ++j) {
    Complex acc = 0.0;
    for (int q = 1; q < size; ++q) acc += weight(q) * omega_power(static_cast<long long>(q) * j, size);
    p(j) = 1.0 / size + norm * acc.real();
  }
  return p;
}

double small_gamma_mixing_bound(int n, double gamma, double eps) {
  if (n <= 2) throw std::invalid_argument("small_gamma_mixing_bound: N must exceed 2");
  if (gamma == 0.0) throw std::domain_error("small_gamma_mixing_bound: undefined at gamma = 0 (unitary walk)");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("small_gamma_mixing_bound: gamma must be > 0");
  if (!(eps > 0.0 && eps < 2.0)) throw std::invalid_argument("small_gamma_mixing_bound: eps must lie in (0, 2)");
  return std::log(n / eps) / gamma * (1.0 + 2.0 / (n - 2.0));
}

}  // namespace ctqw
