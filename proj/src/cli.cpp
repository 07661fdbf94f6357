#include "ctqw/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctqw/evolution.hpp"
#include "ctqw/large_gamma.hpp"
#include "ctqw/mixing.hpp"
#include "ctqw/spectral.hpp"
#include "ctqw/sweep.hpp"
#include "ctqw/verify.hpp"

namespace ctqw::cli {

using nlohmann::ordered_json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// Bad flag values found after parsing; reported like parse errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

WalkConfig make_config(int n, double gamma) {
  try {
    return WalkConfig(n, gamma);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

template <typename T, typename Parse>
T parse_flag(const std::string& value, Parse&& parse) {
  try {
    return parse(value);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

ordered_json json_number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

// Defaults echoed into every output for provenance.
ordered_json defaults_json() {
  return {{"eps", kDefaultEps},
          {"gamma_grid", {{"min", kDefaultGammaMin}, {"max", kDefaultGammaMax}, {"count", kDefaultGammaCount}, {"spacing", "log"}}},
          {"mode", "sustained"}};
}

void write_defaults_csv(std::ostream& os) {
  os << "# defaults: eps=" << format_number(kDefaultEps) << " gamma_grid=log(" << format_number(kDefaultGammaMin)
     << "," << format_number(kDefaultGammaMax) << "," << kDefaultGammaCount << ") mode=sustained\n";
}

class Emitter {
 public:
  Emitter(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::runtime_error("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? static_cast<std::ostream&>(*file_) : fallback_; }

 private:
  std::ostream& fallback_;
  std::unique_ptr<std::ofstream> file_;
};

void write_distribution_csv(std::ostream& os, const std::vector<double>& times, const std::vector<Distribution>& dists) {
  const auto n = dists.empty() ? 0 : dists.front().size();
  os << "time";
  for (Eigen::Index j = 0; j < n; ++j) os << ",p_" << j;
  os << '\n';
  for (std::size_t i = 0; i < times.size(); ++i) {
    os << format_number(times[i]);
    for (Eigen::Index j = 0; j < n; ++j) os << ',' << format_number(dists[i](j));
    os << '\n';
  }
}

struct GridFlags {
  double gamma_min = kDefaultGammaMin;
  double gamma_max = kDefaultGammaMax;
  int count = kDefaultGammaCount;

  std::vector<double> grid() const {
    try {
      return log_spaced(gamma_min, gamma_max, count);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
};

void add_grid_flags(CLI::App* cmd, GridFlags& g) {
  cmd->add_option("--gamma-min", g.gamma_min, "Smallest decoherence rate")->capture_default_str();
  cmd->add_option("--gamma-max", g.gamma_max, "Largest decoherence rate")->capture_default_str();
  cmd->add_option("--count", g.count, "Number of log-spaced rates")->capture_default_str();
}

const auto kCycleSize = CLI::Range(3, 4096);
const auto kNonNegative = CLI::Range(0.0, std::numeric_limits<double>::max());

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decoherent continuous-time quantum walk on the N-cycle"};
  app.require_subcommand(1);

  std::string output;
  int n = 0;
  double gamma = 0.0;
  double eps = kDefaultEps;
  double t_max = 50.0;
  double dt = 0.01;
  double t = 1.0;
  double horizon = 0.0;
  int stride = 10;
  int jobs = 1;
  bool refine = false;
  std::string model_name = "s-literal";
  std::string method_name = "exact";
  std::string mode_name = "sustained";
  std::vector<int> ns{5, 10, 15, 20, 25, 30, 35};
  GridFlags grid;

  auto add_output = [&](CLI::App* cmd) { cmd->add_option("-o,--output", output, "Output file (default: stdout)"); };
  auto add_n = [&](CLI::App* cmd) { cmd->add_option("--n", n, "Cycle size")->required()->check(kCycleSize); };
  auto add_gamma = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--gamma", gamma, "Decoherence rate")->check(kNonNegative);
    if (required) opt->required();
  };
  auto add_eps = [&](CLI::App* cmd) {
    cmd->add_option("--eps", eps, "Total-variation threshold")->capture_default_str()->check(CLI::Range(0.0, 2.0));
  };

  auto* evolve = app.add_subcommand("evolve", "Integrate the master equation; CSV of P_j(t)");
  add_n(evolve);
  add_gamma(evolve, false);
  evolve->add_option("--t-max", t_max, "End time")->capture_default_str()->check(CLI::PositiveNumber);
  evolve->add_option("--dt", dt, "Requested RK4 step")->capture_default_str()->check(CLI::PositiveNumber);
  evolve->add_option("--stride", stride, "Steps between samples")->capture_default_str()->check(CLI::PositiveNumber);
  evolve->add_option("--model", model_name, "s-literal or rho")->capture_default_str();
  add_output(evolve);

  auto* unitary = app.add_subcommand("unitary", "Closed-form unitary walk (gamma = 0); CSV of P_j(t)");
  add_n(unitary);
  unitary->add_option("--t-max", t_max, "End time")->capture_default_str()->check(CLI::PositiveNumber);
  unitary->add_option("--dt", dt, "Sample spacing")->capture_default_str()->check(CLI::PositiveNumber);
  add_output(unitary);

  auto* mixing = app.add_subcommand("mixing", "Single mixing-time measurement; JSON");
  add_n(mixing);
  add_gamma(mixing, true);
  add_eps(mixing);
  mixing->add_option("--method", method_name, "exact, s-literal, rho, perturbative, large-gamma-closed-form")
      ->capture_default_str();
  mixing->add_option("--mode", mode_name, "sustained or first-crossing")->capture_default_str();
  mixing->add_option("--horizon", horizon, "Search horizon (0: automatic)")->check(kNonNegative);
  mixing->add_option("--dt", dt, "RK4 step for integrated methods")->capture_default_str()->check(CLI::PositiveNumber);
  add_output(mixing);

  auto* bounds = app.add_subcommand("bounds", "Analytic mixing-time bounds; JSON");
  add_n(bounds);
  add_gamma(bounds, true);
  add_eps(bounds);
  add_output(bounds);

  auto* sweep = app.add_subcommand("sweep", "Mixing time across decoherence rates; CSV");
  add_n(sweep);
  add_eps(sweep);
  add_grid_flags(sweep, grid);
  sweep->add_option("--method", method_name, "Evolution method")->capture_default_str();
  sweep->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  sweep->add_flag("--refine", refine, "Golden-section refinement of the optimum");
  add_output(sweep);

  auto* transition = app.add_subcommand("transition", "Sweeps for several cycle sizes in one table; CSV");
  transition->add_option("--ns", ns, "Cycle sizes")->delimiter(',')->capture_default_str()->check(kCycleSize);
  add_eps(transition);
  add_grid_flags(transition, grid);
  transition->add_option("--method", method_name, "Evolution method")->capture_default_str();
  transition->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  add_output(transition);

  auto* compare = app.add_subcommand("compare", "Exact vs perturbative vs large-gamma distributions at one time; CSV");
  add_n(compare);
  add_gamma(compare, true);
  compare->add_option("--t", t, "Time")->required()->check(kNonNegative);
  add_output(compare);

  auto* verify = app.add_subcommand("verify", "Run the verification suite; nonzero exit on failure");
  verify->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  add_output(verify);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (evolve->parsed()) {
      const WalkConfig config = make_config(n, gamma);
      const Model model = parse_flag<Model>(model_name, parse_model);
      const TimeGrid tg{0.0, t_max, dt, stride};
      try {
        tg.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const TimeSeries series = integrate(model, config, tg);
      Emitter emit(output, out);
      auto& os = emit.stream();
      os << "# command=evolve n=" << n << " gamma=" << format_number(gamma) << " model=" << to_string(model)
         << " t_max=" << format_number(t_max) << " dt=" << format_number(stable_step(config, dt))
         << " stride=" << stride << '\n';
      write_defaults_csv(os);
      write_distribution_csv(os, series.times, series.dists);
    } else if (unitary->parsed()) {
      (void)make_config(n, 0.0);
      if (dt > t_max) throw UsageError("--dt exceeds --t-max");
      const auto samples = static_cast<long long>(std::floor(t_max / dt + 1e-9));
      std::vector<double> times;
      std::vector<Distribution> dists;
      for (long long k = 0; k <= samples; ++k) {
        times.push_back(static_cast<double>(k) * dt);
        dists.push_back(unitary_distribution(n, times.back()));
      }
      Emitter emit(output, out);
      auto& os = emit.stream();
      os << "# command=unitary n=" << n << " t_max=" << format_number(t_max) << " dt=" << format_number(dt) << '\n';
      write_defaults_csv(os);
      write_distribution_csv(os, times, dists);
    } else if (mixing->parsed()) {
      const WalkConfig config = make_config(n, gamma);
      const Method method = parse_flag<Method>(method_name, parse_method);
      const MixingMode mode = parse_flag<MixingMode>(mode_name, parse_mixing_mode);
      if (!(eps > 0.0)) throw UsageError("--eps must be > 0");
      MixingOptions options;
      options.horizon = horizon;
      options.dt = dt;
      const MixingResult r = mixing_time(config, eps, method, mode, options);
      ordered_json j = {{"command", "mixing"},
                        {"n", n},
                        {"gamma", gamma},
                        {"eps", eps},
                        {"method", to_string(r.method)},
                        {"mode", to_string(r.mode)},
                        {"horizon", r.horizon},
                        {"t_mix", r.t_mix},
                        {"converged", r.converged},
                        {"distance", r.distance},
                        {"defaults", defaults_json()}};
      Emitter emit(output, out);
      emit.stream() << j.dump(2) << '\n';
    } else if (bounds->parsed()) {
      (void)make_config(n, gamma);
      if (!(eps > 0.0 && eps < 2.0)) throw UsageError("--eps must lie in (0, 2) for bounds");
      ordered_json small = {{"t_mix_bound", nullptr}, {"regime", "gamma * N << 1"}, {"gamma_n", gamma * n}};
      if (gamma > 0.0) small["t_mix_bound"] = small_gamma_mixing_bound(n, gamma, eps);
      ordered_json large = {{"t_lower", nullptr}, {"t_upper", nullptr}, {"t_lower_large_n", nullptr},
                            {"t_lower_conclusions", nullptr}, {"valid", false}};
      if (gamma > 0.0) {
        const BoundsReport b = large_gamma_bounds(n, gamma, eps);
        large = {{"t_lower", b.t_lower},
                 {"t_upper", b.t_upper},
                 {"t_lower_large_n", b.t_lower_large_n},
                 {"t_lower_conclusions", b.t_lower_conclusions},
                 {"valid", b.valid}};
      }
      ordered_json j = {{"command", "bounds"}, {"n", n},          {"gamma", gamma},
                        {"eps", eps},          {"small_gamma", small}, {"large_gamma", large},
                        {"t_lower", large["t_lower"]}, {"t_upper", large["t_upper"]}, {"defaults", defaults_json()}};
      Emitter emit(output, out);
      emit.stream() << j.dump(2) << '\n';
    } else if (sweep->parsed()) {
      (void)make_config(n, 1.0);
      const Method method = parse_flag<Method>(method_name, parse_method);
      if (!(eps > 0.0)) throw UsageError("--eps must be > 0");
      const auto gammas = grid.grid();
      const SweepResult result = sweep_gamma(n, eps, gammas, method, jobs);
      Emitter emit(output, out);
      auto& os = emit.stream();
      os << "# command=sweep n=" << n << " eps=" << format_number(eps) << " method=" << to_string(method)
         << " mode=sustained grid=log(" << format_number(grid.gamma_min) << ',' << format_number(grid.gamma_max)
         << ',' << grid.count << ")\n";
      write_defaults_csv(os);
      os << "# gamma_opt=" << format_number(result.gamma_opt) << " t_opt=" << format_number(result.t_opt) << '\n';
      if (refine) {
        try {
          const Optimum opt = optimal_gamma(result, true);
          os << "# refined gamma_opt=" << format_number(opt.gamma) << " t_opt=" << format_number(opt.t_mix) << '\n';
        } catch (const std::logic_error& e) {
          os << "# refinement unavailable: " << e.what() << '\n';
        }
      }
      os << "gamma,t_mix,converged\n";
      for (const auto& p : result.points)
        os << format_number(p.gamma) << ',' << format_number(p.t_mix) << ',' << (p.converged ? "true" : "false") << '\n';
    } else if (transition->parsed()) {
      for (int size : ns) (void)make_config(size, 1.0);
      const Method method = parse_flag<Method>(method_name, parse_method);
      if (!(eps > 0.0)) throw UsageError("--eps must be > 0");
      const auto rows = transition_report(ns, eps, grid.grid(), method, jobs);
      Emitter emit(output, out);
      auto& os = emit.stream();
      os << "# command=transition eps=" << format_number(eps) << " method=" << to_string(method)
         << " mode=sustained grid=log(" << format_number(grid.gamma_min) << ',' << format_number(grid.gamma_max)
         << ',' << grid.count << ")\n";
      write_defaults_csv(os);
      for (const auto& row : rows) {
        os << "# n=" << row.sweep.n << " gamma_opt=" << format_number(row.optimum.gamma)
           << " t_opt=" << format_number(row.optimum.t_mix) << " interior=" << (row.interior ? "true" : "false")
           << " sign_changes=" << row.sign_changes << " slope_small=" << format_number(row.slope_small)
           << " slope_large=" << format_number(row.slope_large) << '\n';
      }
      os << "n,gamma,t_mix,converged\n";
      for (const auto& row : rows)
        for (const auto& p : row.sweep.points)
          os << row.sweep.n << ',' << format_number(p.gamma) << ',' << format_number(p.t_mix) << ','
             << (p.converged ? "true" : "false") << '\n';
    } else if (compare->parsed()) {
      const WalkConfig config = make_config(n, gamma);
      const Distribution exact = ModeBlockEvolution(config).distribution(t);
      const Distribution pert = perturbative_distribution(config, t);
      Distribution large = Distribution::Constant(n, std::numeric_limits<double>::quiet_NaN());
      if (gamma > 0.0) large = closed_form_a(config, t);
      Emitter emit(output, out);
      auto& os = emit.stream();
      os << "# command=compare n=" << n << " gamma=" << format_number(gamma) << " t=" << format_number(t) << '\n';
      write_defaults_csv(os);
      os << "# sup_err_perturbative=" << format_number((pert - exact).cwiseAbs().maxCoeff())
         << " sup_err_large_gamma=" << format_number((large - exact).cwiseAbs().maxCoeff()) << '\n';
      os << "vertex,exact,perturbative,large_gamma,err_perturbative,err_large_gamma\n";
      for (int j = 0; j < n; ++j) {
        os << j << ',' << format_number(exact(j)) << ',' << format_number(pert(j)) << ',' << format_number(large(j))
           << ',' << format_number(pert(j) - exact(j)) << ',' << format_number(large(j) - exact(j)) << '\n';
      }
    } else if (verify->parsed()) {
      const VerificationReport report = run_verification(jobs, [&](const CheckResult& c) {
        out << (c.asserted ? (c.passed ? "PASS " : "FAIL ") : "INFO ") << c.id << "  " << c.description << "  ["
            << c.detail << "]\n"
            << std::flush;
      });
      if (!output.empty()) {
        ordered_json checks = ordered_json::array();
        for (const auto& c : report.checks)
          checks.push_back({{"id", c.id}, {"description", c.description}, {"asserted", c.asserted},
                            {"passed", c.passed}, {"detail", c.detail}});
        ordered_json j = {{"command", "verify"}, {"all_passed", report.all_passed()}, {"checks", checks},
                          {"defaults", defaults_json()}};
        Emitter emit(output, out);
        emit.stream() << j.dump(2) << '\n';
      }
      return report.all_passed() ? kExitOk : kExitFailure;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace ctqw::cli
