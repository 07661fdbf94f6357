#include "ctqw/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace ctqw {

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw std::invalid_argument("log_spaced: need 0 < lo < hi, count >= 2");
  std::vector<double> out(count);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < count; ++i) out[i] = std::pow(10.0, a + (b - a) * i / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> default_gamma_grid() { return log_spaced(kDefaultGammaMin, kDefaultGammaMax, kDefaultGammaCount); }

namespace {

template <typename Task>
void run_indexed(std::size_t count, int jobs, Task&& task) {
  const auto workers = static_cast<std::size_t>(std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(count, 1))));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  }
  for (auto& t : pool) t.join();
}

void locate_optimum(SweepResult& result) {
  result.gamma_opt = std::numeric_limits<double>::quiet_NaN();
  result.t_opt = std::numeric_limits<double>::quiet_NaN();
  for (const auto& p : result.points) {
    if (!p.converged) continue;
    if (std::isnan(result.t_opt) || p.t_mix < result.t_opt) {
      result.gamma_opt = p.gamma;
      result.t_opt = p.t_mix;
    }
  }
}

std::vector<const SweepPoint*> converged_points(const SweepResult& result) {
  std::vector<const SweepPoint*> out;
  for (const auto& p : result.points)
    if (p.converged) out.push_back(&p);
  return out;
}

}  // namespace

SweepResult sweep_gamma(int n, double eps, const std::vector<double>& gammas, Method method, int jobs,
                        const MixingOptions& options) {
  if (gammas.empty()) throw std::invalid_argument("sweep_gamma: empty gamma list");
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] > 0.0)) throw std::invalid_argument("sweep_gamma: rates must be positive");
    if (i > 0 && !(gammas[i] > gammas[i - 1])) throw std::invalid_argument("sweep_gamma: rates must be strictly increasing");
  }
  if (!(eps > 0.0 && eps <= 2.0)) throw std::invalid_argument("sweep_gamma: eps must lie in (0, 2]");
  (void)WalkConfig(n, gammas.front());  // validates n

  SweepResult result;
  result.n = n;
  result.eps = eps;
  result.method = method;
  result.points.resize(gammas.size());
  run_indexed(gammas.size(), jobs, [&](std::size_t i) {
    SweepPoint& p = result.points[i];
    p.gamma = gammas[i];
    try {
      const MixingResult r = mixing_time(WalkConfig(n, gammas[i]), eps, method, MixingMode::Sustained, options);
      p.t_mix = r.t_mix;
      p.converged = r.converged;
    } catch (const std::exception& e) {
      p.t_mix = std::numeric_limits<double>::quiet_NaN();
      p.converged = false;
      p.error = e.what();
    }
  });
  locate_optimum(result);
  return result;
}

int sign_changes(const SweepResult& result) {
  const auto pts = converged_points(result);
  int changes = 0;
  int previous = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double diff = pts[i]->t_mix - pts[i - 1]->t_mix;
    const int sign = diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (previous != 0 && sign != previous) ++changes;
    previous = sign;
  }
  return changes;
}

Optimum optimal_gamma(const SweepResult& result, bool refine, const MixingOptions& options) {
  const auto pts = converged_points(result);
  if (pts.size() < 3) throw std::invalid_argument("optimal_gamma: need at least 3 converged points");
  std::size_t best = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i]->t_mix < pts[best]->t_mix) best = i;
  if (best == 0 || best + 1 == pts.size())
    throw std::domain_error("optimal_gamma: minimum at the grid boundary; widen the gamma range");

  Optimum opt{pts[best]->gamma, pts[best]->t_mix, false};
  if (!refine) return opt;
  if (sign_changes(result) != 1)
    throw std::domain_error("optimal_gamma: grid is not unimodal; refinement refused");

  auto evaluate = [&](double log_gamma) {
    const double g = std::exp(log_gamma);
    const MixingResult r = mixing_time(WalkConfig(result.n, g), result.eps, result.method, MixingMode::Sustained, options);
    if (r.converged && r.t_mix < opt.t_mix) {
      opt.gamma = g;
      opt.t_mix = r.t_mix;
    }
    return r.converged ? r.t_mix : std::numeric_limits<double>::infinity();
  };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(pts[best - 1]->gamma);
  double b = std::log(pts[best + 1]->gamma);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = evaluate(c);
  double fd = evaluate(d);
  const double target = std::log1p(1e-2);
  while (b - a > target) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = evaluate(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = evaluate(d);
    }
  }
  opt.refined = true;
  return opt;
}

double loglog_slope(const SweepResult& result, int count, bool from_low) {
  auto pts = converged_points(result);
  if (count < 2 || static_cast<int>(pts.size()) < count)
    throw std::invalid_argument("loglog_slope: not enough converged points");
  if (!from_low) std::reverse(pts.begin(), pts.end());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < count; ++i) {
    if (!(pts[i]->t_mix > 0.0)) throw std::domain_error("loglog_slope: non-positive mixing time");
    const double x = std::log(pts[i]->gamma);
    const double y = std::log(pts[i]->t_mix);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = count;
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::vector<TransitionRow> transition_report(const std::vector<int>& ns, double eps, const std::vector<double>& gammas,
                                             Method method, int jobs) {
  if (ns.empty()) throw std::invalid_argument("transition_report: no cycle sizes");
  std::vector<TransitionRow> rows;
  rows.reserve(ns.size());
  for (int n : ns) {
    TransitionRow row;
    row.sweep = sweep_gamma(n, eps, gammas, method, jobs);
    row.sign_changes = sign_changes(row.sweep);
    try {
      row.optimum = optimal_gamma(row.sweep, false);
      row.interior = true;
    } catch (const std::logic_error&) {
      row.optimum = {row.sweep.gamma_opt, row.sweep.t_opt, false};
      row.interior = false;
    }
    const int tail = std::min<int>(5, static_cast<int>(converged_points(row.sweep).size()));
    if (tail >= 2) {
      row.slope_small = loglog_slope(row.sweep, tail, true);
      row.slope_large = loglog_slope(row.sweep, tail, false);
    } else {
      row.slope_small = row.slope_large = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ctqw
