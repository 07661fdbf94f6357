#include "ctqw/evolution.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "ctqw/expm.hpp"

namespace ctqw {

Model parse_model(std::string_view name) {
  if (name == "s-literal") return Model::SLiteral;
  if (name == "rho") return Model::Rho;
  throw std::invalid_argument("unknown model '" + std::string(name) + "' (expected s-literal or rho)");
}

std::string_view to_string(Model model) {
  return model == Model::SLiteral ? "s-literal" : "rho";
}

void TimeGrid::validate() const {
  if (!(t_start >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("time grid: bad bounds");
  if (!(t_end > t_start)) throw std::invalid_argument("time grid: t_end must exceed t_start");
  if (!(dt > 0.0)) throw std::invalid_argument("time grid: dt must be positive");
  if (dt > t_end - t_start) throw std::invalid_argument("time grid: dt exceeds the interval");
  if (sample_stride < 1) throw std::invalid_argument("time grid: sample_stride must be >= 1");
}

FullOperator build_full_operator(const WalkConfig& config) {
  const int n = config.n();
  const int dim = n * n;
  FullOperator op{Eigen::MatrixXd::Zero(dim, dim), n};
  auto idx = [n](int a, int b) { return wrap(a, n) * n + wrap(b, n); };
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      const int row = idx(mu, nu);
      op.matrix(row, idx(mu, nu + 1)) += 0.25;
      op.matrix(row, idx(mu + 1, nu)) += 0.25;
      op.matrix(row, idx(mu - 1, nu)) -= 0.25;
      op.matrix(row, idx(mu, nu - 1)) -= 0.25;
      if (mu != nu) op.matrix(row, row) -= config.gamma();
    }
  }
  return op;
}

Eigen::VectorXd vectorize(const SMatrix& s) {
  Eigen::VectorXd v(s.size());
  for (Eigen::Index j = 0; j < s.rows(); ++j)
    for (Eigen::Index k = 0; k < s.cols(); ++k) v(j * s.cols() + k) = s(j, k);
  return v;
}

SMatrix unvectorize(const Eigen::VectorXd& v, int n) {
  if (v.size() != static_cast<Eigen::Index>(n) * n)
    throw std::invalid_argument("unvectorize: length is not N^2");
  SMatrix s(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) s(j, k) = v(j * n + k);
  return s;
}

SMatrix exact_evolve(const WalkConfig& config, double t) {
  if (config.n() > kMaxExactN)
    throw std::invalid_argument("exact_evolve: N=" + std::to_string(config.n()) +
                                " exceeds the dense-operator limit " + std::to_string(kMaxExactN));
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("exact_evolve: t must be >= 0");
  const SMatrix s0 = initial_state(config);
  if (t == 0.0) return s0;
  const FullOperator op = build_full_operator(config);
  const Eigen::MatrixXd propagator = expm(t * op.matrix);
  // S(0) is the first unit vector, so S(t) is the first column.
  return unvectorize(propagator.col(0), config.n());
}

double stable_step(const WalkConfig& config, double dt_requested) {
  return std::min(dt_requested, 0.1 / std::max(config.gamma(), 1.0));
}

namespace {

template <typename State, typename Rhs>
State advance_impl(State y, double duration, double dt_cap, Rhs&& f) {
  if (!(duration >= 0.0)) throw std::invalid_argument("advance: negative duration");
  if (duration == 0.0) return y;
  const auto steps = static_cast<long long>(std::ceil(duration / dt_cap));
  const double h = duration / static_cast<double>(steps);
  for (long long s = 0; s < steps; ++s) y = rk4_step(y, h, f);
  if (!y.allFinite()) throw std::runtime_error("integration produced non-finite values; step too large");
  return y;
}

}  // namespace

SMatrix advance(const SMatrix& state, const WalkConfig& config, double duration, double dt) {
  return advance_impl(state, duration, stable_step(config, dt),
                      [&config](const SMatrix& s) { return s_rhs(s, config); });
}

RhoMatrix advance(const RhoMatrix& state, const WalkConfig& config, double duration, double dt) {
  return advance_impl(state, duration, stable_step(config, dt),
                      [&config](const RhoMatrix& r) { return rho_rhs(r, config); });
}

namespace {

template <typename State, typename Rhs>
TimeSeries integrate_impl(State y, const TimeGrid& grid, double dt_cap, bool keep,
                          std::vector<State> TimeSeries::*snapshots, Rhs&& f) {
  // Reach t_start first; the initial condition is defined at t = 0.
  if (grid.t_start > 0.0) y = advance_impl(y, grid.t_start, dt_cap, f);

  const double span = grid.t_end - grid.t_start;
  const auto steps = static_cast<long long>(std::ceil(span / dt_cap - 1e-12));
  const double h = span / static_cast<double>(steps);

  TimeSeries series;
  auto record = [&](double t) {
    if (!y.allFinite()) throw std::runtime_error("integration produced non-finite values; step too large");
    series.times.push_back(t);
    series.dists.push_back(diagonal_distribution(y));
    if (keep) (series.*snapshots).push_back(y);
  };
  record(grid.t_start);
  for (long long s = 1; s <= steps; ++s) {
    y = rk4_step(y, h, f);
    if (s % grid.sample_stride == 0 || s == steps) {
      record(s == steps ? grid.t_end : grid.t_start + static_cast<double>(s) * h);
    }
  }
  return series;
}

}  // namespace

TimeSeries integrate(Model model, const WalkConfig& config, const TimeGrid& grid, bool keep_matrices) {
  grid.validate();
  const double dt_cap = stable_step(config, grid.dt);
  if (model == Model::SLiteral) {
    return integrate_impl(initial_state(config), grid, dt_cap, keep_matrices, &TimeSeries::s_states,
                          [&config](const SMatrix& s) { return s_rhs(s, config); });
  }
  return integrate_impl(initial_rho(config), grid, dt_cap, keep_matrices, &TimeSeries::rho_states,
                        [&config](const RhoMatrix& r) { return rho_rhs(r, config); });
}

ModeBlockEvolution::ModeBlockEvolution(const WalkConfig& config) : config_(config) {
  const int n = config.n();
  const double gamma = config.gamma();
  const double pi = std::numbers::pi;
  blocks_.reserve(n);
  for (int q = 0; q < n; ++q) {
    Eigen::MatrixXcd block =
        Eigen::MatrixXcd::Constant(n, n, Complex(gamma / n, 0.0)) -
        gamma * Eigen::MatrixXcd::Identity(n, n);
    for (int m = 0; m < n; ++m) {
      const int partner = wrap(q - m, n);
      block(m, m) += Complex(0.0, std::sin(pi * (m + partner) / n) * std::cos(pi * (m - partner) / n));
    }
    blocks_.push_back(std::move(block));
  }
}

Distribution ModeBlockEvolution::assemble(const Eigen::VectorXcd& block_sums) const {
  // P_j = (1/N) sum_q w_q omega^{q j}, w_q the sum of block q's coefficients.
  const int n = config_.n();
  Distribution p(n);
  for (int j = 0; j < n; ++j) {
    Complex acc = 0.0;
    for (int q = 0; q < n; ++q) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(wrap(q * j, n)) / n;
      acc += block_sums(q) * Complex(std::cos(phase), std::sin(phase));
    }
    p(j) = acc.real() / n;
  }
  return p;
}

Distribution ModeBlockEvolution::distribution(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("distribution: t must be >= 0");
  const int n = config_.n();
  const Eigen::VectorXcd start = Eigen::VectorXcd::Constant(n, Complex(1.0 / n, 0.0));
  Eigen::VectorXcd sums(n);
  for (int q = 0; q < n; ++q) sums(q) = (expm(t * blocks_[q]) * start).sum();
  return assemble(sums);
}

std::vector<Distribution> ModeBlockEvolution::scan(double step, int count) const {
  if (!(step > 0.0) || count < 0) throw std::invalid_argument("scan: need step > 0 and count >= 0");
  const int n = config_.n();
  std::vector<Eigen::MatrixXcd> propagators;
  propagators.reserve(n);
  for (const auto& b : blocks_) propagators.push_back(expm(step * b));
  std::vector<Eigen::VectorXcd> coeffs(n, Eigen::VectorXcd::Constant(n, Complex(1.0 / n, 0.0)));
  std::vector<Distribution> out;
  out.reserve(count + 1);
  Eigen::VectorXcd sums(n);
  for (int i = 0; i <= count; ++i) {
    for (int q = 0; q < n; ++q) sums(q) = coeffs[q].sum();
    out.push_back(assemble(sums));
    if (i < count)
      for (int q = 0; q < n; ++q) coeffs[q] = propagators[q] * coeffs[q];
  }
  return out;
}

}  // namespace ctqw
