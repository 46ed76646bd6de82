#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "schlab/solver.hpp"
#include "schlab/stats.hpp"

namespace schlab {

enum class StudyKind {
  spatial_rate,
  temporal_rate,
  holder_time,
  holder_space,
  density,
  malliavin_rate,
};

const char* study_kind_name(StudyKind kind);

// A level ladder compared against a finer reference of the same scheme
// family, every level driven by a coarsening of one master sheet per
// sample (density is the exception: laws need independent samples).
struct StudyPlan {
  StudyKind kind = StudyKind::spatial_rate;
  std::vector<int> levels;   // n ladder, m ladder, or gap ladder per kind
  int reference = 0;         // n_ref / m_ref (unused for holder kinds)
  int samples = 400;
  double moment_p = 2.0;
  double eval_x = kPi / 2.0;
  SolverConfig base;         // the study dimension (n or m) is overridden per level
  std::uint64_t master_seed = 0;
  int threads = 1;

  void validate() const;
};

struct LevelEstimate {
  int level = 0;
  double error = 0.0;           // (mean |diff|^p)^(1/p); mean square for malliavin_rate
  double standard_error = 0.0;  // of `error`, via the delta method
  int samples = 0;              // kept samples
  int discards = 0;
};

struct RateReport {
  StudyKind kind = StudyKind::spatial_rate;
  std::vector<LevelEstimate> levels;
  double slope = 0.0;
  double r2 = 0.0;
  bool exact = false;         // every level error at machine zero; no fit
  bool insufficient = false;  // some level SE exceeds 25% of its error
  bool self_check_passed = true;  // coupling checksums + reference self-comparison
  int total_discards = 0;
};

struct DensityReport {
  std::vector<int> levels;
  int reference = 0;
  std::vector<double> distances;   // L1 KDE distance level vs reference
  std::vector<double> bandwidths;  // per level, reference last
  bool decreasing_ok = false;      // at most one adjacent violation <= 10%
  int samples_per_level = 0;
};

// OLS on (log2 level, log2 error); requires >= 3 levels with positive errors.
LineFit fit_rate(std::span<const double> levels, std::span<const double> errors);

// Strong spatial order: ladder in n against n_ref at a shared time grid,
// all levels driven by space-coarsenings of one master sheet per sample.
RateReport spatial_rate_study(const StudyPlan& plan);

// Strong temporal order: fixed n, ladder in m against m_ref (>= 64x the
// largest level), time-coarsened couplings of one master sheet per sample.
RateReport temporal_rate_study(const StudyPlan& plan);

// Mean-square increments over dyadic gaps; levels are gap sizes, in time
// steps (holder_time, around T/2) or in grid cells (holder_space, at T).
RateReport holder_study(const StudyPlan& plan);

// KDE L1 distance between terminal-value laws per level and the reference,
// with independent samples per level.
DensityReport density_study(const StudyPlan& plan);

// Monte-Carlo mean of the tangent-table discrepancy between levels nA and
// 2 nA; errors stay squared, so the target slope is about -2.
RateReport malliavin_rate_study(const StudyPlan& plan);

}  // namespace schlab
