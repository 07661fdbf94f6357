#include "ctqw/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ctqw/large_gamma.hpp"
#include "ctqw/spectral.hpp"

namespace ctqw {

Method parse_method(std::string_view name) {
  if (name == "exact") return Method::Exact;
  if (name == "s-literal") return Method::SLiteral;
  if (name == "rho") return Method::Rho;
  if (name == "perturbative") return Method::Perturbative;
  if (name == "large-gamma-closed-form") return Method::LargeGammaClosedForm;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Exact: return "exact";
    case Method::SLiteral: return "s-literal";
    case Method::Rho: return "rho";
    case Method::Perturbative: return "perturbative";
    case Method::LargeGammaClosedForm: return "large-gamma-closed-form";
  }
  return "unknown";
}

MixingMode parse_mixing_mode(std::string_view name) {
  if (name == "first-crossing") return MixingMode::FirstCrossing;
  if (name == "sustained") return MixingMode::Sustained;
  throw std::invalid_argument("unknown mixing mode '" + std::string(name) + "'");
}

std::string_view to_string(MixingMode mode) {
  return mode == MixingMode::FirstCrossing ? "first-crossing" : "sustained";
}

double total_variation(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("total_variation: lengths " + std::to_string(p.size()) + " and " +
                                std::to_string(q.size()) + " differ");
  return (p - q).cwiseAbs().sum();
}

double distance_to_uniform(const Distribution& p) {
  return (p.array() - 1.0 / static_cast<double>(p.size())).abs().sum();
}

Distribution average_distribution(const TimeSeries& series, double t_final) {
  const auto& times = series.times;
  if (times.size() < 2 || series.dists.size() != times.size())
    throw std::invalid_argument("average_distribution: need at least two samples");
  if (!(t_final > times.front()) || t_final > times.back())
    throw std::out_of_range("average_distribution: t_final outside the sampled range");
  Distribution integral = Distribution::Zero(series.dists.front().size());
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double t0 = times[i - 1];
    if (t0 >= t_final) break;
    const double t1 = std::min(times[i], t_final);
    const double frac = (t1 - t0) / (times[i] - t0);
    const Distribution end = series.dists[i - 1] + frac * (series.dists[i] - series.dists[i - 1]);
    integral += 0.5 * (t1 - t0) * (series.dists[i - 1] + end);
  }
  return integral / (t_final - times.front());
}

std::vector<Distribution> DistributionSource::scan(double step, int count) {
  std::vector<Distribution> out;
  out.reserve(count + 1);
  for (int i = 0; i <= count; ++i) out.push_back(at(i * step));
  return out;
}

namespace {

class ExactSource : public DistributionSource {
 public:
  explicit ExactSource(const WalkConfig& config) : evolution_(config) {}
  Distribution at(double t) override { return evolution_.distribution(t); }
  std::vector<Distribution> scan(double step, int count) override { return evolution_.scan(step, count); }

 private:
  ModeBlockEvolution evolution_;
};

class PerturbativeSource : public DistributionSource {
 public:
  explicit PerturbativeSource(const WalkConfig& config) : config_(config) {}
  Distribution at(double t) override { return perturbative_distribution(config_, t); }

 private:
  WalkConfig config_;
};

class LargeGammaSource : public DistributionSource {
 public:
  explicit LargeGammaSource(const WalkConfig& config) : config_(config) {
    if (!(config.gamma() > 0.0)) throw std::invalid_argument("large-gamma-closed-form needs gamma > 0");
  }
  Distribution at(double t) override { return closed_form_a(config_, t); }

 private:
  WalkConfig config_;
};

// RK4 trajectory; scan() keeps the state at every grid point so that later
// evaluations restart from the nearest earlier snapshot.
template <typename State>
class IntegratedSource : public DistributionSource {
 public:
  IntegratedSource(const WalkConfig& config, State initial, double dt)
      : config_(config), initial_(std::move(initial)), dt_(dt) {}

  Distribution at(double t) override {
    if (!(t >= 0.0)) throw std::invalid_argument("distribution requested at negative time");
    if (snapshots_.empty()) return diagonal_distribution(advance(initial_, config_, t, dt_));
    auto idx = static_cast<std::size_t>(std::floor(t / step_));
    idx = std::min(idx, snapshots_.size() - 1);
    while (idx > 0 && static_cast<double>(idx) * step_ > t) --idx;
    const double remaining = std::max(0.0, t - static_cast<double>(idx) * step_);
    return diagonal_distribution(advance(snapshots_[idx], config_, remaining, dt_));
  }

  std::vector<Distribution> scan(double step, int count) override {
    step_ = step;
    snapshots_.clear();
    snapshots_.reserve(count + 1);
    std::vector<Distribution> out;
    out.reserve(count + 1);
    State y = initial_;
    for (int i = 0; i <= count; ++i) {
      out.push_back(diagonal_distribution(y));
      snapshots_.push_back(y);
      if (i < count) y = advance(y, config_, step, dt_);
    }
    return out;
  }

 private:
  WalkConfig config_;
  State initial_;
  double dt_;
  double step_ = 0.0;
  std::vector<State> snapshots_;
};

}  // namespace

std::unique_ptr<DistributionSource> make_source(Method method, const WalkConfig& config, double dt) {
  switch (method) {
    case Method::Exact: return std::make_unique<ExactSource>(config);
    case Method::SLiteral: return std::make_unique<IntegratedSource<SMatrix>>(config, initial_state(config), dt);
    case Method::Rho: return std::make_unique<IntegratedSource<RhoMatrix>>(config, initial_rho(config), dt);
    case Method::Perturbative: return std::make_unique<PerturbativeSource>(config);
    case Method::LargeGammaClosedForm: return std::make_unique<LargeGammaSource>(config);
  }
  throw std::invalid_argument("unknown method");
}

double default_horizon(const WalkConfig& config, double eps) {
  if (config.gamma() == 0.0) return 1e4;
  const double e = std::min(eps, 1.9);
  const double small = small_gamma_mixing_bound(config.n(), config.gamma(), e);
  const double upper = large_gamma_bounds(config.n(), config.gamma(), e).t_upper;
  return 10.0 * std::max(small, upper);
}

MixingResult mixing_time(const WalkConfig& config, double eps, Method method, MixingMode mode,
                         const MixingOptions& options) {
  if (!(eps > 0.0 && eps <= 2.0)) throw std::invalid_argument("mixing_time: eps must lie in (0, 2]");
  if (options.grid_intervals < 1) throw std::invalid_argument("mixing_time: grid_intervals must be >= 1");
  if (!(options.relative_width > 0.0)) throw std::invalid_argument("mixing_time: relative_width must be > 0");

  MixingResult result;
  result.mode = mode;
  result.method = method;
  result.eps = eps;
  result.horizon = options.horizon > 0.0 ? options.horizon : default_horizon(config, eps);
  if (!std::isfinite(result.horizon)) throw std::invalid_argument("mixing_time: horizon must be finite");

  auto source = make_source(method, config, options.dt);
  const double step = result.horizon / options.grid_intervals;
  const std::vector<Distribution> samples = source->scan(step, options.grid_intervals);
  std::vector<double> distance(samples.size());
  std::transform(samples.begin(), samples.end(), distance.begin(), distance_to_uniform);

  // Index of the first sample at or below eps after the bracketing sample.
  long long below = -1;
  if (mode == MixingMode::FirstCrossing) {
    for (std::size_t i = 0; i < distance.size(); ++i) {
      if (distance[i] <= eps) {
        below = static_cast<long long>(i);
        break;
      }
    }
  } else {
    long long last_above = -1;
    for (std::size_t i = 0; i < distance.size(); ++i)
      if (distance[i] > eps) last_above = static_cast<long long>(i);
    if (last_above + 1 < static_cast<long long>(distance.size())) below = last_above + 1;
  }

  if (below < 0) {
    result.t_mix = result.horizon;
    result.converged = false;
    result.distance = distance.back();
    return result;
  }
  result.converged = true;
  if (below == 0) {
    result.t_mix = 0.0;
    result.distance = distance.front();
    return result;
  }

  double lo = static_cast<double>(below - 1) * step;
  double hi = static_cast<double>(below) * step;
  double hi_distance = distance[below];
  while (hi - lo > options.relative_width * hi) {
    const double mid = 0.5 * (lo + hi);
    const double d = distance_to_uniform(source->at(mid));
    if (d > eps) {
      lo = mid;
    } else {
      hi = mid;
      hi_distance = d;
    }
  }
  result.t_mix = hi;
  result.distance = hi_distance;
  return result;
}

}  // namespace ctqw
