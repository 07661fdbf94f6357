// Decoherence-rate sweeps of the mixing time and the location of the
// optimal rate.
#ifndef CTQW_SWEEP_HPP
#define CTQW_SWEEP_HPP

#include <string>
#include <vector>

#include "ctqw/mixing.hpp"

namespace ctqw {

inline constexpr double kDefaultGammaMin = 1e-3;
inline constexpr double kDefaultGammaMax = 1e2;
inline constexpr int kDefaultGammaCount = 25;
inline constexpr double kDefaultEps = 0.01;

/// count points, log-spaced over [lo, hi], both ends included.
std::vector<double> log_spaced(double lo, double hi, int count);
std::vector<double> default_gamma_grid();

struct SweepPoint {
  double gamma = 0.0;
  double t_mix = 0.0;
  bool converged = false;
  std::string error;  // non-empty when the evaluation threw
};

struct SweepResult {
  int n = 0;
  double eps = 0.0;
  Method method = Method::Exact;
  std::vector<SweepPoint> points;  // strictly increasing gamma
  double gamma_opt = 0.0;          // argmin over converged points, NaN if none
  double t_opt = 0.0;
};

/// Sustained-mode mixing time for every rate. Points are independent and
/// run on up to `jobs` threads; results are collected by index, so the
/// output does not depend on scheduling.
SweepResult sweep_gamma(int n, double eps, const std::vector<double>& gammas, Method method, int jobs = 1,
                        const MixingOptions& options = {});

/// Sign changes of the discrete difference of t_mix over converged points.
int sign_changes(const SweepResult& result);

struct Optimum {
  double gamma = 0.0;
  double t_mix = 0.0;
  bool refined = false;
};

/// Grid argmin, optionally refined by golden-section search (in log gamma)
/// between the argmin's neighbours down to relative width 1e-2. Throws
/// std::domain_error when the minimum sits on the grid boundary, and
/// refuses refinement unless the grid is unimodal.
Optimum optimal_gamma(const SweepResult& result, bool refine, const MixingOptions& options = {});

/// Least-squares slope of ln t_mix against ln gamma over `count` converged
/// points from the low (`from_low`) or high end of the grid.
double loglog_slope(const SweepResult& result, int count, bool from_low);

struct TransitionRow {
  SweepResult sweep;
  Optimum optimum;      // grid argmin (unrefined)
  bool interior = false;
  int sign_changes = 0;
  double slope_small = 0.0;
  double slope_large = 0.0;
};

/// Sweep per cycle size on a shared grid (the quantum-to-classical curves).
std::vector<TransitionRow> transition_report(const std::vector<int>& ns, double eps, const std::vector<double>& gammas,
                                             Method method = Method::Exact, int jobs = 1);

}  // namespace ctqw

#endif  // CTQW_SWEEP_HPP
