#include "schlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "schlab/kde.hpp"
#include "schlab/malliavin.hpp"
#include "schlab/parallel.hpp"

namespace schlab {

namespace {

constexpr double kMachineZero = 1e-12;

bool divides(int a, int b) { return a >= 1 && b % a == 0; }

double checked_sum(std::span<const double> raw) { return pairwise_sum(raw); }

bool checksum_matches(double coarse_sum, double master_sum) {
  return std::fabs(coarse_sum - master_sum) <= 1e-9 * (std::fabs(master_sum) + 1.0);
}

// (mean |d|^p)^(1/p) with a delta-method standard error.
LevelEstimate reduce_level(int level, std::span<const double> pow_p, double p, int discards) {
  LevelEstimate est;
  est.level = level;
  est.samples = static_cast<int>(pow_p.size());
  est.discards = discards;
  const double mp = mean(pow_p);
  if (mp <= 0.0) {
    est.error = 0.0;
    est.standard_error = 0.0;
    return est;
  }
  est.error = std::pow(mp, 1.0 / p);
  if (pow_p.size() >= 2) {
    const double se_mp = standard_error(pow_p);
    est.standard_error = se_mp * (1.0 / p) * std::pow(mp, 1.0 / p - 1.0);
  }
  return est;
}

void finish_rate_report(RateReport& report) {
  bool all_zero = true;
  for (const auto& lv : report.levels)
    if (lv.error > kMachineZero) all_zero = false;
  if (all_zero) {
    report.exact = true;
    report.slope = 0.0;
    report.r2 = 1.0;
    return;
  }
  for (const auto& lv : report.levels)
    if (lv.error > 0.0 && lv.standard_error > 0.25 * lv.error) report.insufficient = true;
  std::vector<double> xs, ys;
  for (const auto& lv : report.levels) {
    xs.push_back(static_cast<double>(lv.level));
    ys.push_back(lv.error);
  }
  const LineFit fit = fit_rate(xs, ys);
  report.slope = fit.slope;
  report.r2 = fit.r2;
}

}  // namespace

const char* study_kind_name(StudyKind kind) {
  switch (kind) {
    case StudyKind::spatial_rate: return "spatial_rate";
    case StudyKind::temporal_rate: return "temporal_rate";
    case StudyKind::holder_time: return "holder_time";
    case StudyKind::holder_space: return "holder_space";
    case StudyKind::density: return "density";
    case StudyKind::malliavin_rate: return "malliavin_rate";
  }
  return "unknown";
}

void StudyPlan::validate() const {
  if (levels.empty()) throw std::invalid_argument("StudyPlan: empty level ladder");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1])
      throw std::invalid_argument("StudyPlan: ladder must be strictly increasing");
  if (samples < 50) throw std::invalid_argument("StudyPlan: samples must be >= 50");
  if (!(moment_p >= 1.0)) throw std::invalid_argument("StudyPlan: moment_p must be >= 1");
  if (!(eval_x >= 0.0 && eval_x <= kPi))
    throw std::invalid_argument("StudyPlan: eval_x outside [0, pi]");
  const bool needs_reference = kind == StudyKind::spatial_rate ||
                               kind == StudyKind::temporal_rate ||
                               kind == StudyKind::density || kind == StudyKind::malliavin_rate;
  if (needs_reference) {
    for (int lv : levels)
      if (!divides(lv, reference))
        throw std::invalid_argument("StudyPlan: every level must divide the reference");
    if (reference <= levels.back())
      throw std::invalid_argument("StudyPlan: reference must exceed the ladder");
  }
  // Spatial levels must nest, so the harness insists on powers of two >= 4
  // wherever a value is a grid size (the library itself takes any n >= 2).
  const auto grid_ok = [](int v) { return v >= 4 && (v & (v - 1)) == 0; };
  const bool levels_are_grids = kind == StudyKind::spatial_rate ||
                                kind == StudyKind::density ||
                                kind == StudyKind::malliavin_rate;
  if (levels_are_grids) {
    for (int lv : levels)
      if (!grid_ok(lv))
        throw std::invalid_argument("StudyPlan: grid levels must be powers of two >= 4");
    if (!grid_ok(reference))
      throw std::invalid_argument("StudyPlan: reference grid must be a power of two >= 4");
  } else if (!grid_ok(base.n)) {
    throw std::invalid_argument("StudyPlan: base n must be a power of two >= 4");
  }
  base.validate();
}

LineFit fit_rate(std::span<const double> levels, std::span<const double> errors) {
  if (levels.size() < 3) throw std::invalid_argument("fit_rate: need >= 3 levels");
  if (levels.size() != errors.size()) throw std::invalid_argument("fit_rate: size mismatch");
  std::vector<double> lx(levels.size()), ly(errors.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] > 0.0 && errors[i] > 0.0))
      throw std::invalid_argument("fit_rate: levels and errors must be positive");
    lx[i] = std::log2(levels[i]);
    ly[i] = std::log2(errors[i]);
  }
  return least_squares(lx, ly);
}

RateReport spatial_rate_study(const StudyPlan& plan) {
  plan.validate();
  if (plan.kind != StudyKind::spatial_rate)
    throw std::invalid_argument("spatial_rate_study: wrong study kind");

  const int n_ref = plan.reference;
  const std::size_t level_count = plan.levels.size();
  const SpectralBasis ref_basis(n_ref);
  std::vector<SpectralBasis> bases;
  bases.reserve(level_count);
  for (int n : plan.levels) bases.emplace_back(n);

  std::vector<std::vector<double>> slots(level_count,
                                         std::vector<double>(plan.samples, 0.0));
  std::vector<char> discarded(plan.samples, 0);
  std::vector<char> checksum_ok(plan.samples, 1);
  std::vector<char> self_ok(plan.samples, 1);

  parallel_for(plan.samples, plan.threads, [&](int s) {
    const SheetIncrements master =
        generate_sheet(plan.master_seed, static_cast<std::uint64_t>(s), plan.base.m, n_ref,
                       plan.base.T);
    const double master_sum = checked_sum(master.raw());

    SolverConfig cfg = plan.base;
    cfg.n = n_ref;
    cfg.record = RecordPolicy::terminal_only;
    const Trajectory ref = simulate(cfg, ref_basis, master);
    if (ref.blew_up) {
      discarded[s] = 1;
      return;
    }
    const double u_ref = ref.terminal().interpolate(plan.eval_x);

    if (s == 0) {
      // Self-comparison guard: the factor-1 coarsening path must reproduce
      // the reference bit for bit.
      const SheetIncrements same = coarsen(master, 1, 1);
      const Trajectory again = simulate(cfg, ref_basis, same);
      if (again.terminal().v != ref.terminal().v) self_ok[s] = 0;
    }

    for (std::size_t li = 0; li < level_count; ++li) {
      const int n = plan.levels[li];
      const SheetIncrements sheet = coarsen(master, 1, n_ref / n);
      if (!checksum_matches(checked_sum(sheet.raw()), master_sum)) checksum_ok[s] = 0;
      SolverConfig level_cfg = plan.base;
      level_cfg.n = n;
      level_cfg.record = RecordPolicy::terminal_only;
      const Trajectory traj = simulate(level_cfg, bases[li], sheet);
      if (traj.blew_up) {
        discarded[s] = 1;
        return;
      }
      const double u = traj.terminal().interpolate(plan.eval_x);
      slots[li][static_cast<std::size_t>(s)] = std::pow(std::fabs(u - u_ref), plan.moment_p);
    }
  });

  RateReport report;
  report.kind = plan.kind;
  int discards = 0;
  for (char d : discarded) discards += d;
  report.total_discards = discards;
  for (char ok : checksum_ok)
    if (!ok) report.self_check_passed = false;
  for (char ok : self_ok)
    if (!ok) report.self_check_passed = false;

  for (std::size_t li = 0; li < level_count; ++li) {
    std::vector<double> kept;
    kept.reserve(static_cast<std::size_t>(plan.samples));
    for (int s = 0; s < plan.samples; ++s)
      if (!discarded[s]) kept.push_back(slots[li][static_cast<std::size_t>(s)]);
    if (kept.empty()) throw std::runtime_error("spatial_rate_study: every sample discarded");
    report.levels.push_back(reduce_level(plan.levels[li], kept, plan.moment_p, discards));
  }
  finish_rate_report(report);
  return report;
}

RateReport temporal_rate_study(const StudyPlan& plan) {
  plan.validate();
  if (plan.kind != StudyKind::temporal_rate)
    throw std::invalid_argument("temporal_rate_study: wrong study kind");
  if (plan.reference < 64 * plan.levels.back())
    throw std::invalid_argument(
        "temporal_rate_study: reference must be >= 64x the largest level");

  const int m_ref = plan.reference;
  const int n = plan.base.n;
  const SpectralBasis basis(n);
  const std::size_t level_count = plan.levels.size();

  std::vector<std::vector<double>> slots(level_count,
                                         std::vector<double>(plan.samples, 0.0));
  std::vector<char> discarded(plan.samples, 0);
  std::vector<char> checksum_ok(plan.samples, 1);

  parallel_for(plan.samples, plan.threads, [&](int s) {
    const SheetIncrements master =
        generate_sheet(plan.master_seed, static_cast<std::uint64_t>(s), m_ref, n, plan.base.T);
    const double master_sum = checked_sum(master.raw());

    SolverConfig cfg = plan.base;
    cfg.m = m_ref;
    cfg.record = RecordPolicy::terminal_only;
    const Trajectory ref = simulate(cfg, basis, master);
    if (ref.blew_up) {
      discarded[s] = 1;
      return;
    }
    const double u_ref = ref.terminal().interpolate(plan.eval_x);

    for (std::size_t li = 0; li < level_count; ++li) {
      const int m = plan.levels[li];
      const SheetIncrements sheet = coarsen(master, m_ref / m, 1);
      if (!checksum_matches(checked_sum(sheet.raw()), master_sum)) checksum_ok[s] = 0;
      SolverConfig level_cfg = plan.base;
      level_cfg.m = m;
      level_cfg.record = RecordPolicy::terminal_only;
      const Trajectory traj = simulate(level_cfg, basis, sheet);
      if (traj.blew_up) {
        discarded[s] = 1;
        return;
      }
      const double u = traj.terminal().interpolate(plan.eval_x);
      slots[li][static_cast<std::size_t>(s)] = std::pow(std::fabs(u - u_ref), plan.moment_p);
    }
  });

  RateReport report;
  report.kind = plan.kind;
  int discards = 0;
  for (char d : discarded) discards += d;
  report.total_discards = discards;
  for (char ok : checksum_ok)
    if (!ok) report.self_check_passed = false;

  for (std::size_t li = 0; li < level_count; ++li) {
    std::vector<double> kept;
    for (int s = 0; s < plan.samples; ++s)
      if (!discarded[s]) kept.push_back(slots[li][static_cast<std::size_t>(s)]);
    if (kept.empty()) throw std::runtime_error("temporal_rate_study: every sample discarded");
    report.levels.push_back(reduce_level(plan.levels[li], kept, plan.moment_p, discards));
  }
  finish_rate_report(report);
  return report;
}

RateReport holder_study(const StudyPlan& plan) {
  plan.validate();
  if (plan.kind != StudyKind::holder_time && plan.kind != StudyKind::holder_space)
    throw std::invalid_argument("holder_study: wrong study kind");
  const bool in_time = plan.kind == StudyKind::holder_time;

  const SolverConfig& base = plan.base;
  const SpectralBasis basis(base.n);
  const Mesh mesh = basis.mesh();
  const std::size_t level_count = plan.levels.size();

  int t0 = 0;
  std::vector<int> record_steps;
  if (in_time) {
    t0 = base.m / 2;
    const int max_gap = plan.levels.back();
    if (t0 + max_gap > base.m - 8)
      throw std::invalid_argument("holder_study: time gaps too close to the horizon");
    record_steps.push_back(t0);
    for (int g : plan.levels) record_steps.push_back(t0 + g);
    std::sort(record_steps.begin(), record_steps.end());
    record_steps.erase(std::unique(record_steps.begin(), record_steps.end()),
                       record_steps.end());
  } else {
    const int k0 = mesh.cell_index(plan.eval_x);
    const int max_gap = plan.levels.back();
    if (k0 < 8 || k0 + max_gap > base.n - 8)
      throw std::invalid_argument("holder_study: space gaps too close to the boundary");
  }

  std::vector<std::vector<double>> slots(level_count,
                                         std::vector<double>(plan.samples, 0.0));
  std::vector<char> discarded(plan.samples, 0);

  parallel_for(plan.samples, plan.threads, [&](int s) {
    const SheetIncrements sheet =
        generate_sheet(plan.master_seed, static_cast<std::uint64_t>(s), base.m, base.n, base.T);
    SolverConfig cfg = base;
    if (in_time) {
      cfg.record = RecordPolicy::selected;
      cfg.record_steps = record_steps;
    } else {
      cfg.record = RecordPolicy::terminal_only;
    }
    const Trajectory traj = simulate(cfg, basis, sheet);
    if (traj.blew_up) {
      discarded[s] = 1;
      return;
    }
    if (in_time) {
      const Field* u0 = traj.at_step(t0);
      const double v0 = u0->interpolate(plan.eval_x);
      for (std::size_t li = 0; li < level_count; ++li) {
        const Field* ug = traj.at_step(t0 + plan.levels[li]);
        const double d = ug->interpolate(plan.eval_x) - v0;
        slots[li][static_cast<std::size_t>(s)] = d * d;
      }
    } else {
      const Field& uT = traj.terminal();
      const int k0 = mesh.cell_index(plan.eval_x);
      const double v0 = uT.at(k0);
      for (std::size_t li = 0; li < level_count; ++li) {
        const double d = uT.at(k0 + plan.levels[li]) - v0;
        slots[li][static_cast<std::size_t>(s)] = d * d;
      }
    }
  });

  RateReport report;
  report.kind = plan.kind;
  int discards = 0;
  for (char d : discarded) discards += d;
  report.total_discards = discards;
  for (std::size_t li = 0; li < level_count; ++li) {
    std::vector<double> kept;
    for (int s = 0; s < plan.samples; ++s)
      if (!discarded[s]) kept.push_back(slots[li][static_cast<std::size_t>(s)]);
    if (kept.empty()) throw std::runtime_error("holder_study: every sample discarded");
    LevelEstimate est;
    est.level = plan.levels[li];
    est.samples = static_cast<int>(kept.size());
    est.discards = discards;
    est.error = mean(kept);  // mean-square increment
    est.standard_error = kept.size() >= 2 ? standard_error(kept) : 0.0;
    report.levels.push_back(est);
  }
  finish_rate_report(report);
  return report;
}

DensityReport density_study(const StudyPlan& plan) {
  plan.validate();
  if (plan.kind != StudyKind::density)
    throw std::invalid_argument("density_study: wrong study kind");
  if (plan.samples < 5000)
    throw std::invalid_argument("density_study: laws need >= 5000 samples per level");

  std::vector<int> all_levels = plan.levels;
  all_levels.push_back(plan.reference);
  const std::size_t group_count = all_levels.size();
  const int M = plan.samples;

  std::vector<std::vector<double>> values(group_count);
  for (auto& v : values) v.resize(static_cast<std::size_t>(M), 0.0);
  std::vector<char> bad(static_cast<std::size_t>(M) * group_count, 0);

  for (std::size_t gi = 0; gi < group_count; ++gi) {
    const int n = all_levels[gi];
    const SpectralBasis basis(n);
    // Snap the evaluation point to the level's grid.
    const int k_star =
        std::clamp(static_cast<int>(std::lround(plan.eval_x / basis.mesh().h)), 1, n - 1);
    SolverConfig cfg = plan.base;
    cfg.n = n;
    cfg.record = RecordPolicy::terminal_only;
    // Disjoint sample-index ranges keep the levels' laws independent.
    const std::uint64_t index_base = static_cast<std::uint64_t>(gi) * static_cast<std::uint64_t>(M);
    parallel_for(M, plan.threads, [&](int s) {
      const SheetIncrements sheet = generate_sheet(
          plan.master_seed, index_base + static_cast<std::uint64_t>(s), cfg.m, n, cfg.T);
      const Trajectory traj = simulate(cfg, basis, sheet);
      if (traj.blew_up) {
        bad[gi * static_cast<std::size_t>(M) + static_cast<std::size_t>(s)] = 1;
        return;
      }
      values[gi][static_cast<std::size_t>(s)] = traj.terminal().at(k_star);
    });
  }

  for (char b : bad)
    if (b) throw std::runtime_error("density_study: sample overflow under the given model");

  std::vector<Kde> kdes;
  kdes.reserve(group_count);
  for (auto& v : values) kdes.push_back(Kde::fit(v));

  DensityReport report;
  report.levels = plan.levels;
  report.reference = plan.reference;
  report.samples_per_level = M;
  for (std::size_t gi = 0; gi < group_count; ++gi) report.bandwidths.push_back(kdes[gi].bandwidth());
  for (std::size_t gi = 0; gi + 1 < group_count; ++gi)
    report.distances.push_back(kde_l1_distance(kdes[gi], kdes.back()));

  int violations = 0;
  bool severe = false;
  for (std::size_t i = 0; i + 1 < report.distances.size(); ++i) {
    if (report.distances[i + 1] > report.distances[i]) {
      ++violations;
      if (report.distances[i + 1] > 1.10 * report.distances[i]) severe = true;
    }
  }
  report.decreasing_ok = violations <= 1 && !severe;
  return report;
}

RateReport malliavin_rate_study(const StudyPlan& plan) {
  plan.validate();
  if (plan.kind != StudyKind::malliavin_rate)
    throw std::invalid_argument("malliavin_rate_study: wrong study kind");
  for (int lv : plan.levels)
    if (!divides(2 * lv, plan.reference))
      throw std::invalid_argument("malliavin_rate_study: 2x every level must divide reference");

  const std::size_t level_count = plan.levels.size();
  std::vector<std::vector<double>> slots(level_count,
                                         std::vector<double>(plan.samples, 0.0));

  parallel_for(plan.samples, plan.threads, [&](int s) {
    const SheetIncrements master = generate_sheet(
        plan.master_seed, static_cast<std::uint64_t>(s), plan.base.m, plan.reference, plan.base.T);
    for (std::size_t li = 0; li < level_count; ++li) {
      const int nA = plan.levels[li];
      const int nB = 2 * nA;
      const SheetIncrements fine_sheet = coarsen(master, 1, plan.reference / nB);
      slots[li][static_cast<std::size_t>(s)] =
          malliavin_error(plan.base, nA, nB, fine_sheet, plan.eval_x);
    }
  });

  RateReport report;
  report.kind = plan.kind;
  for (std::size_t li = 0; li < level_count; ++li) {
    LevelEstimate est;
    est.level = plan.levels[li];
    est.samples = plan.samples;
    est.error = mean(slots[li]);  // mean squared tangent discrepancy
    est.standard_error = plan.samples >= 2 ? standard_error(slots[li]) : 0.0;
    report.levels.push_back(est);
  }
  finish_rate_report(report);
  return report;
}

}  // namespace schlab
