// schlab: numerical laboratory for a stochastic Cahn-Hilliard equation on
// (0, pi) with Dirichlet conditions and space-time white noise. Spatial
// finite differences diagonalized by a discrete sine transform, exponential
// Euler time stepping, coupled-noise Monte Carlo rate studies, tangent
// (Malliavin-derivative) propagation, and KDE density comparison.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "schlab/config.hpp"
#include "schlab/experiments.hpp"
#include "schlab/greens.hpp"
#include "schlab/kde.hpp"
#include "schlab/malliavin.hpp"
#include "schlab/parallel.hpp"
#include "schlab/reporting.hpp"
#include "schlab/stats.hpp"
#include "schlab/version.hpp"
#include "schlab/windows.hpp"

using namespace schlab;
using nlohmann::json;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  long long seed = -1;
  int samples = -1;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("config", args.config_path, "path to a config file");
  cmd->add_option("--out", args.out_dir, "output directory (overrides config and SCHLAB_OUT_DIR)");
  cmd->add_option("--seed", args.seed, "master seed override");
  cmd->add_option("--samples", args.samples, "Monte Carlo sample count override");
  cmd->add_option("--threads", args.threads, "worker pool size (0 = hardware)");
}

RunConfig load_config(const CommonArgs& args, Command command) {
  RunConfig cfg = args.config_path.empty() ? default_config(command)
                                           : parse_config_file(args.config_path, command);
  if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
  if (args.samples > 0) {
    cfg.study.samples = args.samples;
    cfg.study.hnorm_samples = args.samples;
  }
  if (const char* env = std::getenv("SCHLAB_OUT_DIR"); env && *env) cfg.output_dir = env;
  if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
  return cfg;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::filesystem::path prepare_out_dir(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text_file(path.string(), j.dump(2) + "\n");
}

StudyPlan plan_from(const RunConfig& cfg, StudyKind kind, int threads) {
  StudyPlan plan;
  plan.kind = kind;
  plan.levels = cfg.study.levels;
  plan.reference = cfg.study.reference;
  plan.samples = cfg.study.samples;
  plan.moment_p = cfg.study.moment_p;
  plan.eval_x = cfg.study.eval_x;
  plan.base = cfg.problem;
  plan.master_seed = cfg.seed;
  plan.threads = threads;
  return plan;
}

bool slope_pass(const RateReport& r, const windows::SlopeWindow& w) {
  return !r.exact && r.slope >= w.lo && r.slope <= w.hi && r.r2 >= w.min_r2 &&
         r.self_check_passed && !r.insufficient && r.total_discards == 0;
}

json window_json(const windows::SlopeWindow& w) {
  return json{{"lo", w.lo}, {"hi", w.hi}, {"min_r2", w.min_r2}};
}

int run_simulate(const CommonArgs& args) {
  RunConfig cfg = load_config(args, Command::simulate);
  const auto dir = prepare_out_dir(cfg);
  const SpectralBasis basis(cfg.problem.n);
  const auto sheet = generate_sheet(cfg.seed, 0, cfg.problem.m, cfg.problem.n, cfg.problem.T);
  const Trajectory traj = simulate(cfg.problem, basis, sheet);

  std::string csv = "t,x,value\n";
  char line[96];
  const double tau = cfg.problem.tau();
  for (std::size_t si = 0; si < traj.steps.size(); ++si) {
    const double t = traj.steps[si] * tau;
    const Field& f = traj.states[si];
    for (int k = 0; k <= cfg.problem.n; ++k) {
      const double v = (k == 0 || k == cfg.problem.n) ? 0.0 : f.at(k);
      std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", t, basis.mesh().x(k), v);
      csv += line;
    }
  }
  write_text_file((dir / "fields.csv").string(), csv);

  json j = make_artifact(Command::simulate, cfg);
  j["recorded_steps"] = traj.steps;
  j["blew_up"] = traj.blew_up;
  j["discarded"] = traj.blew_up ? 1 : 0;
  write_json(dir / "run.json", j);
  std::printf("simulate: %zu states recorded to %s (discarded=%d)\n", traj.states.size(),
              dir.string().c_str(), traj.blew_up ? 1 : 0);
  return 0;
}

int run_rates(const CommonArgs& args, Command command) {
  RunConfig cfg = load_config(args, command);
  const auto dir = prepare_out_dir(cfg);
  const int threads = resolve_threads(args.threads);
  const bool spatial = command == Command::rates_space;
  const StudyPlan plan =
      plan_from(cfg, spatial ? StudyKind::spatial_rate : StudyKind::temporal_rate, threads);
  const RateReport report = spatial ? spatial_rate_study(plan) : temporal_rate_study(plan);
  const auto window = spatial ? windows::kSpatialRate : windows::kTemporalRate;
  const bool pass = slope_pass(report, window);

  const std::string stem = spatial ? "rates_space" : "rates_time";
  write_text_file((dir / (stem + ".csv")).string(),
                  rate_report_csv(report, spatial ? "n" : "m"));
  json j = make_artifact(command, cfg);
  j["report"] = rate_report_to_json(report);
  j["window"] = window_json(window);
  j["pass"] = pass;
  write_json(dir / (stem + ".json"), j);

  std::printf("%s: slope=%.4f r2=%.4f window=[%.2f,%.2f] %s\n", command_name(command),
              report.slope, report.r2, window.lo, window.hi, pass ? "pass" : "FAIL");
  return pass ? 0 : 2;
}

int run_kernel_errors(const CommonArgs& args) {
  RunConfig cfg = load_config(args, Command::kernel_errors);
  const auto dir = prepare_out_dir(cfg);
  const auto& ks = cfg.kernel;
  ks.quadrature.validate();

  std::string csv = "x,n,l2_error,l1_laplacian_error,l2_refined,l1_refined\n";
  char line[160];
  json per_x = json::array();
  bool pass = true;
  double worst_self = 0.0;
  for (double x : ks.x_points) {
    std::vector<double> l2s, l1s, lv;
    for (int n : ks.levels) {
      const double l2 = kernel_error_l2(n, ks.horizon, x, ks.quadrature);
      const double l1 = kernel_error_l1_laplacian(n, ks.horizon, x, ks.quadrature);
      const double l2r = kernel_error_l2(n, ks.horizon, x, ks.quadrature.refined());
      const double l1r = kernel_error_l1_laplacian(n, ks.horizon, x, ks.quadrature.refined());
      worst_self = std::max({worst_self, std::fabs(l2r - l2) / l2, std::fabs(l1r - l1) / l1});
      l2s.push_back(l2);
      l1s.push_back(l1);
      lv.push_back(n);
      std::snprintf(line, sizeof(line), "%.17g,%d,%.17g,%.17g,%.17g,%.17g\n", x, n, l2, l1, l2r,
                    l1r);
      csv += line;
    }
    json ratios_l2 = json::array(), ratios_l1 = json::array();
    for (std::size_t i = 0; i + 1 < l2s.size(); ++i) {
      const double r2 = l2s[i] / l2s[i + 1];
      const double r1 = l1s[i] / l1s[i + 1];
      ratios_l2.push_back(r2);
      ratios_l1.push_back(r1);
      if (r2 < windows::kKernelL2RatioLo || r2 > windows::kKernelL2RatioHi) pass = false;
      if (r1 < windows::kKernelL1RatioLo || r1 > windows::kKernelL1RatioHi) pass = false;
    }
    per_x.push_back(json{
        {"x", x},
        {"l2", l2s},
        {"l1_laplacian", l1s},
        {"l2_ratios", ratios_l2},
        {"l1_ratios", ratios_l1},
        {"l2_slope", fit_rate(lv, l2s).slope},
        {"l1_slope", fit_rate(lv, l1s).slope},
    });
  }
  if (worst_self > windows::kKernelSelfConvergence) pass = false;

  write_text_file((dir / "kernel_errors.csv").string(), csv);
  json j = make_artifact(Command::kernel_errors, cfg);
  j["per_x"] = per_x;
  j["worst_self_convergence"] = worst_self;
  j["ratio_windows"] = {{"l2", {windows::kKernelL2RatioLo, windows::kKernelL2RatioHi}},
                        {"l1", {windows::kKernelL1RatioLo, windows::kKernelL1RatioHi}}};
  j["pass"] = pass;
  write_json(dir / "kernel_errors.json", j);
  std::printf("kernel-errors: worst self-convergence %.2f%% %s\n", 100.0 * worst_self,
              pass ? "pass" : "FAIL");
  return pass ? 0 : 2;
}

int run_holder(const CommonArgs& args) {
  RunConfig cfg = load_config(args, Command::holder);
  const auto dir = prepare_out_dir(cfg);
  const int threads = resolve_threads(args.threads);

  StudyPlan tplan = plan_from(cfg, StudyKind::holder_time, threads);
  tplan.levels = cfg.study.time_gaps;
  const RateReport tr = holder_study(tplan);

  StudyPlan splan = plan_from(cfg, StudyKind::holder_space, threads);
  splan.levels = cfg.study.space_gaps;
  const RateReport sr = holder_study(splan);

  const bool tpass = tr.slope >= windows::kHolderTime.lo && tr.slope <= windows::kHolderTime.hi;
  const bool spass = sr.slope >= windows::kHolderSpace.lo && sr.slope <= windows::kHolderSpace.hi;
  const bool pass = tpass && spass && tr.total_discards == 0 && sr.total_discards == 0;

  std::string csv = "kind,gap,mean_square,standard_error,samples\n";
  char line[128];
  for (const auto& lv : tr.levels) {
    std::snprintf(line, sizeof(line), "time,%d,%.17g,%.17g,%d\n", lv.level, lv.error,
                  lv.standard_error, lv.samples);
    csv += line;
  }
  for (const auto& lv : sr.levels) {
    std::snprintf(line, sizeof(line), "space,%d,%.17g,%.17g,%d\n", lv.level, lv.error,
                  lv.standard_error, lv.samples);
    csv += line;
  }
  write_text_file((dir / "holder.csv").string(), csv);

  json j = make_artifact(Command::holder, cfg);
  j["time"] = {{"report", rate_report_to_json(tr)},
               {"window", window_json(windows::kHolderTime)},
               {"pass", tpass}};
  j["space"] = {{"report", rate_report_to_json(sr)},
                {"window", window_json(windows::kHolderSpace)},
                {"pass", spass}};
  j["pass"] = pass;
  write_json(dir / "holder.json", j);
  std::printf("holder: time slope=%.4f space slope=%.4f %s\n", tr.slope, sr.slope,
              pass ? "pass" : "FAIL");
  return pass ? 0 : 2;
}

int run_density(const CommonArgs& args) {
  RunConfig cfg = load_config(args, Command::density);
  const auto dir = prepare_out_dir(cfg);
  const int threads = resolve_threads(args.threads);
  StudyPlan plan = plan_from(cfg, StudyKind::density, threads);
  const DensityReport report = density_study(plan);
  const bool pass = report.decreasing_ok;

  write_text_file((dir / "density.csv").string(), density_report_csv(report));
  json j = make_artifact(Command::density, cfg);
  j["report"] = density_report_to_json(report);
  j["pass"] = pass;
  write_json(dir / "density.json", j);
  std::printf("density: distances");
  for (double d : report.distances) std::printf(" %.4f", d);
  std::printf(" %s\n", pass ? "pass" : "FAIL");
  return pass ? 0 : 2;
}

int run_malliavin(const CommonArgs& args) {
  RunConfig cfg = load_config(args, Command::malliavin);
  const auto dir = prepare_out_dir(cfg);
  const int threads = resolve_threads(args.threads);

  // Tangent tables: hnorm2 per sample plus the negative-moment estimate.
  SolverConfig hcfg = cfg.problem;
  hcfg.n = cfg.study.hnorm_n;
  hcfg.m = cfg.study.hnorm_m;
  const SpectralBasis hbasis(hcfg.n);
  const int M = cfg.study.hnorm_samples;
  std::vector<MalliavinRecord> records(static_cast<std::size_t>(M));
  parallel_for(M, threads, [&](int s) {
    const auto sheet =
        generate_sheet(cfg.seed, static_cast<std::uint64_t>(s), hcfg.m, hcfg.n, hcfg.T);
    records[static_cast<std::size_t>(s)] = hnorm2_at(hcfg, hbasis, sheet, cfg.study.eval_x);
  });
  double min_h = records.front().hnorm2;
  for (const auto& r : records) min_h = std::min(min_h, r.hnorm2);
  const auto est = negative_moment_estimate(records, cfg.study.rho);

  std::string csv = "sample,hnorm2\n";
  char line[96];
  for (int s = 0; s < M; ++s) {
    std::snprintf(line, sizeof(line), "%d,%.17g\n", s, records[static_cast<std::size_t>(s)].hnorm2);
    csv += line;
  }
  write_text_file((dir / "malliavin_hnorm2.csv").string(), csv);

  // Tangent convergence ladder.
  StudyPlan plan = plan_from(cfg, StudyKind::malliavin_rate, threads);
  const RateReport rate = malliavin_rate_study(plan);
  write_text_file((dir / "malliavin_errors.csv").string(), rate_report_csv(rate, "n"));

  const bool nondegenerate = min_h > 0.0;
  const bool se_ok = std::isfinite(est.mean) &&
                     est.standard_error < windows::kNegativeMomentSeFraction * est.mean;
  const bool rate_ok = rate.slope <= windows::kMalliavinRateSlopeMax && rate.self_check_passed;
  const bool pass = nondegenerate && se_ok && rate_ok;

  json j = make_artifact(Command::malliavin, cfg);
  j["hnorm2"] = {{"samples", M}, {"min", min_h}, {"eval_x", cfg.study.eval_x}};
  j["negative_moment"] = {{"rho", est.rho},
                          {"mean", est.mean},
                          {"standard_error", est.standard_error},
                          {"samples", est.samples}};
  j["rate"] = rate_report_to_json(rate);
  j["rate_slope_max"] = windows::kMalliavinRateSlopeMax;
  j["pass"] = pass;
  write_json(dir / "malliavin.json", j);
  std::printf("malliavin: min hnorm2=%.3e neg-moment=%.4f (se %.2f%%) rate slope=%.3f %s\n", min_h,
              est.mean, est.mean > 0 ? 100.0 * est.standard_error / est.mean : 0.0, rate.slope,
              pass ? "pass" : "FAIL");
  return pass ? 0 : 2;
}

int run_validate(const CommonArgs& args) {
  RunConfig cfg = load_config(args, Command::validate);
  const auto dir = prepare_out_dir(cfg);
  json checks = json::array();
  bool all = true;
  auto record = [&](const std::string& name, bool ok, const std::string& detail) {
    checks.push_back(json{{"name", name}, {"pass", ok}, {"detail", detail}});
    all = all && ok;
    std::printf("  %-34s %s (%s)\n", name.c_str(), ok ? "ok" : "FAIL", detail.c_str());
  };
  char detail[128];

  {
    const SpectralBasis basis(64);
    Field f{basis.mesh()};
    for (int k = 1; k <= 63; ++k) f.at(k) = std::sin(3.7 * k) * 0.5;
    const auto fast = basis.forward(f);
    const auto naive = basis.forward_naive(f.v);
    double worst = 0.0;
    for (std::size_t i = 0; i < fast.size(); ++i)
      worst = std::max(worst, std::fabs(fast[i] - naive[i]));
    const Field back = basis.inverse(fast);
    double rt = 0.0;
    for (int k = 1; k <= 63; ++k) rt = std::max(rt, std::fabs(back.at(k) - f.at(k)));
    std::snprintf(detail, sizeof(detail), "fast-vs-naive %.2e, round-trip %.2e", worst, rt);
    record("transform fast path and inverse", worst <= 1e-10 && rt <= 1e-12, detail);
  }
  {
    const int n = 256;
    const SpectralBasis basis(n);
    double worst = 0.0;
    for (int i = 1; i <= n - 1; ++i) {
      Field f{basis.mesh()};
      for (int k = 1; k <= n - 1; ++k) f.at(k) = basis.e(i, k);
      const auto row = basis.forward(f);
      for (int j = 1; j <= n - 1; ++j)
        worst = std::max(worst, std::fabs(row[j - 1] - (i == j ? 1.0 : 0.0)));
    }
    std::snprintf(detail, sizeof(detail), "max Gram deviation %.2e at n=%d", worst, n);
    record("basis orthonormality", worst <= 1e-12, detail);
  }
  {
    const int n = 64;
    const SpectralBasis basis(n);
    double worst = 0.0;
    for (int j = 1; j <= n - 1; ++j) {
      Field f{basis.mesh()};
      for (int k = 1; k <= n - 1; ++k) f.at(k) = basis.e(j, k);
      const Field lap = apply_laplacian(f);
      for (int k = 1; k <= n - 1; ++k)
        worst = std::max(worst, std::fabs(lap.at(k) - basis.lambda_j(j) * f.at(k)));
    }
    std::snprintf(detail, sizeof(detail), "max eigen-residual %.2e at n=%d", worst, n);
    record("discrete eigenpairs", worst <= 1e-10, detail);
  }
  {
    const Cutoff K(2.0);
    double sup = 0.0;
    for (int i = 0; i <= 20000; ++i)
      sup = std::max(sup, std::fabs(K.derivative(2.0 + i / 20000.0)));
    const bool ok = K(1.999) == 1.0 && K(3.0) == 0.0 && sup <= 2.0;
    std::snprintf(detail, sizeof(detail), "plateau 1, support edge 0, max |K'| %.4f", sup);
    record("cutoff profile", ok, detail);
  }
  {
    SolverConfig scfg;
    scfg.n = 8;
    scfg.m = 8;
    scfg.T = 0.05;
    const SpectralBasis basis(scfg.n);
    const auto sheet = generate_sheet(cfg.seed, 0, scfg.m, scfg.n, scfg.T);
    const MalliavinRecord rec = hnorm2_at(scfg, basis, sheet, kPi / 2.0);
    auto terminal_at = [&](const SheetIncrements& s) {
      return simulate(scfg, basis, s).terminal().interpolate(kPi / 2.0);
    };
    const double base = terminal_at(sheet);
    const double eps_beta = 1e-6;
    double worst = 0.0;
    for (const auto& [i, k] : std::vector<std::pair<int, int>>{{0, 4}, {3, 2}, {7, 6}}) {
      std::vector<double> dw(sheet.raw().begin(), sheet.raw().end());
      dw[static_cast<std::size_t>(i) * scfg.n + k] += eps_beta * std::sqrt(kPi / scfg.n);
      const double bumped =
          terminal_at(SheetIncrements(scfg.m, scfg.n, scfg.T, 0, 0, std::move(dw)));
      const double fd = (bumped - base) / eps_beta;
      const double want = rec.entry(i, k);
      worst = std::max(worst, std::fabs(fd - want) / std::max(1e-12, std::fabs(want)));
    }
    std::snprintf(detail, sizeof(detail), "worst relative gap %.2e", worst);
    record("tangent finite-difference check", worst <= windows::kTangentFdRelTol, detail);
  }
  {
    SolverConfig scfg;
    scfg.n = 32;
    scfg.m = 16;
    scfg.T = 0.1;
    scfg.drift = Drift::zero();
    scfg.diffusion = Diffusion::constant(0.0);
    const SpectralBasis basis(scfg.n);
    const SheetIncrements zero(scfg.m, scfg.n, scfg.T, 0, 0,
                               std::vector<double>(static_cast<std::size_t>(scfg.m) * scfg.n, 0.0));
    const Trajectory traj = simulate(scfg, basis, zero);
    const double lam = basis.lambda_j(1);
    double worst = 0.0;
    for (int k = 1; k <= scfg.n - 1; ++k)
      worst = std::max(worst, std::fabs(traj.terminal().at(k) -
                                        std::exp(-lam * lam * scfg.T) *
                                            std::sin(basis.mesh().x(k))));
    std::snprintf(detail, sizeof(detail), "max-norm gap %.2e", worst);
    record("linear semigroup exactness", worst <= windows::kLinearExactnessTol, detail);
  }
  {
    const auto a = generate_sheet(cfg.seed, 3, 32, 16, 0.25);
    const auto b = generate_sheet(cfg.seed, 3, 32, 16, 0.25);
    bool identical = true;
    for (std::size_t i = 0; i < a.raw().size(); ++i)
      if (a.raw()[i] != b.raw()[i]) identical = false;
    const auto c = coarsen(a, 4, 4);
    double fine = 0.0, coarse = 0.0;
    for (double v : a.raw()) fine += v;
    for (double v : c.raw()) coarse += v;
    const bool telescopes = std::fabs(fine - coarse) <= 1e-10 * (std::fabs(fine) + 1.0);
    std::snprintf(detail, sizeof(detail), "bitwise regen %s, aggregation gap %.2e",
                  identical ? "yes" : "no", std::fabs(fine - coarse));
    record("noise determinism and aggregation", identical && telescopes, detail);
  }

  json j = make_artifact(Command::validate, cfg);
  j["checks"] = checks;
  j["pass"] = all;
  write_json(dir / "validate.json", j);
  std::printf("validate: %s\n", all ? "pass" : "FAIL");
  return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic Cahn-Hilliard laboratory"};
  app.set_version_flag("--version", std::string("schlab ") + kVersion);
  app.require_subcommand(1);

  struct Entry {
    CLI::App* cmd = nullptr;
    CommonArgs args;
    Command command = Command::validate;
  };
  std::vector<Entry> entries(8);
  const std::pair<const char*, Command> specs[] = {
      {"simulate", Command::simulate},
      {"rates-space", Command::rates_space},
      {"rates-time", Command::rates_time},
      {"kernel-errors", Command::kernel_errors},
      {"holder", Command::holder},
      {"density", Command::density},
      {"malliavin", Command::malliavin},
      {"validate", Command::validate},
  };
  const char* helps[] = {
      "run one trajectory and dump the recorded fields",
      "strong spatial convergence study",
      "strong temporal convergence study",
      "discrete-vs-exact kernel error decay",
      "mean-square increment exponents in time and space",
      "KDE L1 distance of terminal laws across levels",
      "tangent tables: nondegeneracy, negative moments, convergence",
      "fast invariant suite",
  };
  for (std::size_t i = 0; i < 8; ++i) {
    entries[i].cmd = app.add_subcommand(specs[i].first, helps[i]);
    entries[i].command = specs[i].second;
    add_common(entries[i].cmd, entries[i].args);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto& e : entries) {
      if (!e.cmd->parsed()) continue;
      switch (e.command) {
        case Command::simulate: return run_simulate(e.args);
        case Command::rates_space: return run_rates(e.args, Command::rates_space);
        case Command::rates_time: return run_rates(e.args, Command::rates_time);
        case Command::kernel_errors: return run_kernel_errors(e.args);
        case Command::holder: return run_holder(e.args);
        case Command::density: return run_density(e.args);
        case Command::malliavin: return run_malliavin(e.args);
        case Command::validate: return run_validate(e.args);
      }
    }
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 1;
}
