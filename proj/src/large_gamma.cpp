#include "ctqw/large_gamma.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctqw {

namespace {

constexpr double kPi = std::numbers::pi;

double sin2(int k, int n) {
  const double s = std::sin(kPi * k / n);
  return s * s;
}

Complex omega_power(long long p, int n) {
  long long r = p % n;
  if (r < 0) r += n;
  const double angle = 2.0 * kPi * static_cast<double>(r) / n;
  return {std::cos(angle), std::sin(angle)};
}

void require_positive_gamma(const WalkConfig& config, const char* what) {
  if (!(config.gamma() > 0.0)) throw std::invalid_argument(std::string(what) + ": gamma must be > 0");
}

// Amplitude of the first-minor-diagonal mode k (leading order in 1/gamma).
Complex minor_amplitude(int k, int n, double gamma) {
  const double angle = kPi * k / n;
  return Complex(0.0, std::sin(angle) / gamma) * Complex(std::cos(angle), std::sin(angle));
}

}  // namespace

DiagonalSums diagonal_sums(const SMatrix& state) {
  const auto n = static_cast<int>(state.rows());
  if (state.cols() != n) throw std::invalid_argument("diagonal_sums: state must be square");
  DiagonalSums out{Eigen::VectorXd::Zero(n)};
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) out.d(k) += state(j, wrap(j + k, n));
  return out;
}

TruncatedState truncated_initial_state(int n) {
  TruncatedState s{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  s.a(0) = 1.0;
  return s;
}

TruncatedState truncated_rhs(const TruncatedState& state, const WalkConfig& config) {
  const int n = config.n();
  if (state.a.size() != n || state.d.size() != n)
    throw std::invalid_argument("truncated_rhs: state length does not match N");
  TruncatedState out{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int j = 0; j < n; ++j) {
    out.a(j) = 0.25 * (state.d(j) - state.d(wrap(j - 1, n)));
    out.d(j) = 0.5 * (state.a(wrap(j + 1, n)) - state.a(j)) - config.gamma() * state.d(j);
  }
  return out;
}

ModeRates mode_rates(int k, const WalkConfig& config) {
  const int n = config.n();
  if (k < 0 || k >= n) throw std::out_of_range("mode_rates: k out of range");
  const double gamma = config.gamma();
  const double half_s = 0.5 * sin2(k, n);
  if (half_s == 0.0) return {k, 0.0, gamma};
  const double disc = gamma * gamma - 4.0 * half_s;
  if (disc < 0.0)
    throw std::domain_error("mode_rates: complex roots for k=" + std::to_string(k) +
                            "; gamma is outside the large-gamma regime");
  const double gamma1 = 0.5 * (gamma + std::sqrt(disc));
  // Product form avoids cancellation in the small root.
  return {k, half_s / gamma1, gamma1};
}

Distribution closed_form_a(const WalkConfig& config, double t) {
  require_positive_gamma(config, "closed_form_a");
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("closed_form_a: t must be >= 0");
  const int n = config.n();
  Eigen::VectorXd decay(n);
  for (int k = 0; k < n; ++k) decay(k) = std::exp(-sin2(k, n) * t / (2.0 * config.gamma()));
  Distribution a(n);
  for (int j = 0; j < n; ++j) {
    Complex acc = 0.0;
    for (int k = 0; k < n; ++k) acc += decay(k) * omega_power(static_cast<long long>(j) * k, n);
    a(j) = acc.real() / n;
  }
  return a;
}

namespace {

// Diagonal and first-minor-diagonal values (and their rates) of the
// large-gamma solution at time t.
struct BandValues {
  Eigen::VectorXd a, d, a_rate, d_rate;
};

BandValues band_values(const WalkConfig& config, double t) {
  require_positive_gamma(config, "full_large_gamma_state");
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("full_large_gamma_state: t must be >= 0");
  const int n = config.n();
  const double gamma = config.gamma();
  BandValues out{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  std::vector<double> slow(n), fast(n), slow_decay(n), fast_decay(n);
  std::vector<Complex> amp(n);
  for (int k = 0; k < n; ++k) {
    slow[k] = sin2(k, n) / (2.0 * gamma);
    fast[k] = gamma - slow[k];
    slow_decay[k] = std::exp(-slow[k] * t);
    fast_decay[k] = std::exp(-fast[k] * t);
    amp[k] = minor_amplitude(k, n, gamma);
  }
  for (int j = 0; j < n; ++j) {
    Complex a = 0.0, d = 0.0, a_rate = 0.0, d_rate = 0.0;
    for (int k = 0; k < n; ++k) {
      const Complex w = omega_power(static_cast<long long>(j) * k, n);
      a += slow_decay[k] * w;
      a_rate += -slow[k] * slow_decay[k] * w;
      // D_{k,1} = -D_{k,0} so that d(0) = 0.
      d += amp[k] * (slow_decay[k] - fast_decay[k]) * w;
      d_rate += amp[k] * (-slow[k] * slow_decay[k] + fast[k] * fast_decay[k]) * w;
    }
    out.a(j) = a.real() / n;
    out.d(j) = d.real() / n;
    out.a_rate(j) = a_rate.real() / n;
    out.d_rate(j) = d_rate.real() / n;
  }
  return out;
}

SMatrix tridiagonal(const Eigen::VectorXd& diag, const Eigen::VectorXd& minor) {
  const auto n = static_cast<int>(diag.size());
  SMatrix s = SMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    s(j, j) = diag(j);
    s(j, wrap(j + 1, n)) = 0.5 * minor(j);
    s(wrap(j + 1, n), j) = 0.5 * minor(j);
  }
  return s;
}

}  // namespace

SMatrix full_large_gamma_state(const WalkConfig& config, double t) {
  const BandValues v = band_values(config, t);
  return tridiagonal(v.a, v.d);
}

SMatrix full_large_gamma_rate(const WalkConfig& config, double t) {
  const BandValues v = band_values(config, t);
  return tridiagonal(v.a_rate, v.d_rate);
}

BoundsReport large_gamma_bounds(int n, double gamma, double eps) {
  if (n < 3) throw std::invalid_argument("large_gamma_bounds: N must be >= 3");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("large_gamma_bounds: gamma must be > 0");
  if (!(eps > 0.0)) throw std::invalid_argument("large_gamma_bounds: eps must be > 0");
  if (eps >= 2.0) throw std::invalid_argument("large_gamma_bounds: eps >= 2 is vacuous (total variation never exceeds 2)");
  BoundsReport r;
  r.n = n;
  r.gamma = gamma;
  r.eps = eps;
  r.valid = large_gamma_valid(gamma);
  const double log_lower = std::log(2.0 / (n * eps));
  if (log_lower > 0.0) {
    r.t_lower = 2.0 * gamma / sin2(1, n) * log_lower;
    r.t_lower_large_n = 2.0 * gamma * n * n / (kPi * kPi) * log_lower;
    r.t_lower_conclusions = gamma * n * n / (kPi * kPi) * log_lower;
  }
  r.t_upper = 0.5 * gamma * n * n * std::log((2.0 + eps) / eps);
  return r;
}

}  // namespace ctqw
