// Total variation, time-averaged distributions and epsilon-mixing times.
#ifndef CTQW_MIXING_HPP
#define CTQW_MIXING_HPP

#include <memory>
#include <string_view>
#include <vector>

#include "ctqw/evolution.hpp"
#include "ctqw/walk_model.hpp"

namespace ctqw {

enum class Method { Exact, SLiteral, Rho, Perturbative, LargeGammaClosedForm };
enum class MixingMode { FirstCrossing, Sustained };

Method parse_method(std::string_view name);
std::string_view to_string(Method method);
MixingMode parse_mixing_mode(std::string_view name);
std::string_view to_string(MixingMode mode);

/// sum_j |p_j - q_j|, in [0, 2].
double total_variation(const Distribution& p, const Distribution& q);

/// Total variation from the uniform distribution.
double distance_to_uniform(const Distribution& p);

/// Trapezoidal time average of the series over [times.front(), t_final];
/// t_final may fall between samples (linear interpolation).
Distribution average_distribution(const TimeSeries& series, double t_final);

/// Distribution of the walk at arbitrary times for one evolution method.
class DistributionSource {
 public:
  virtual ~DistributionSource() = default;
  virtual Distribution at(double t) = 0;
  /// Distributions at t = 0, step, ..., count * step.
  virtual std::vector<Distribution> scan(double step, int count);
};

/// `dt` is the requested RK4 step for the integrated methods.
std::unique_ptr<DistributionSource> make_source(Method method, const WalkConfig& config, double dt = 0.01);

struct MixingOptions {
  double horizon = 0.0;       // <= 0 selects default_horizon
  int grid_intervals = 2048;
  double relative_width = 1e-4;
  double dt = 0.01;           // RK4 step for s-literal / rho
};

struct MixingResult {
  double t_mix = 0.0;
  MixingMode mode = MixingMode::Sustained;
  Method method = Method::Exact;
  double eps = 0.0;
  double horizon = 0.0;
  bool converged = false;
  double distance = 0.0;  // distance to uniform at t_mix
};

/// 10 max(small-gamma bound, large-gamma upper bound); 1e4 at gamma = 0.
double default_horizon(const WalkConfig& config, double eps);

/// Coarse scan on horizon / grid_intervals, then bisection on the
/// bracketing interval down to relative width `relative_width`.
/// FirstCrossing: first time the distance drops to eps.
/// Sustained: earliest time after which every sample stays <= eps.
MixingResult mixing_time(const WalkConfig& config, double eps, Method method,
                         MixingMode mode = MixingMode::Sustained, const MixingOptions& options = {});

}  // namespace ctqw

#endif  // CTQW_MIXING_HPP
