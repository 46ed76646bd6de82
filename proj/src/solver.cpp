#include "schlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace schlab {

void SolverConfig::validate() const {
  if (n < 2) throw std::invalid_argument("SolverConfig: n must be >= 2");
  if (m < 1) throw std::invalid_argument("SolverConfig: m must be >= 1");
  if (!(T > 0.0)) throw std::invalid_argument("SolverConfig: T must be > 0");
  if (record == RecordPolicy::stride && stride < 1)
    throw std::invalid_argument("SolverConfig: stride must be >= 1");
  if (record == RecordPolicy::selected && !std::is_sorted(record_steps.begin(), record_steps.end()))
    throw std::invalid_argument("SolverConfig: record_steps must be sorted");
}

const Field* Trajectory::at_step(int step) const {
  const auto it = std::lower_bound(steps.begin(), steps.end(), step);
  if (it == steps.end() || *it != step) return nullptr;
  return &states[static_cast<std::size_t>(it - steps.begin())];
}

Field initial_field(const InitialData& u0, const Mesh& mesh) {
  Field f(mesh);
  for (int k = 1; k <= mesh.n - 1; ++k) f.at(k) = u0(mesh.x(k));
  return f;
}

ExpEulerWorkspace::ExpEulerWorkspace(const SpectralBasis& basis, double tau)
    : basis_(&basis), tau_(tau), noise_scale_(std::sqrt(basis.n() / kPi)) {
  if (tau < 0.0) throw std::invalid_argument("ExpEulerWorkspace: tau must be >= 0");
  decay_.resize(static_cast<std::size_t>(basis.n() - 1));
  for (int j = 1; j <= basis.n() - 1; ++j) {
    const double lam = basis.lambda_j(j);
    decay_[static_cast<std::size_t>(j - 1)] = std::exp(-lam * lam * tau);
  }
  work_.resize(static_cast<std::size_t>(basis.n() - 1));
}

bool ExpEulerWorkspace::advance(Field& U, std::span<const double> dbeta, const Drift& drift,
                                const Diffusion& diffusion) {
  const int n = basis_->n();
  if (dbeta.size() != static_cast<std::size_t>(n - 1))
    throw std::invalid_argument("advance: dbeta must have n-1 entries");
  auto& a = U.v;
  const bool with_drift = !drift.is_zero();
  if (with_drift)
    for (int k = 0; k < n - 1; ++k) work_[k] = drift(a[k]);
  for (int k = 0; k < n - 1; ++k) a[k] += noise_scale_ * diffusion(a[k]) * dbeta[k];
  basis_->transform(a, scratch_);
  if (with_drift) {
    basis_->transform(work_, scratch_);
    const auto lambda = basis_->lambda();
    for (int j = 0; j < n - 1; ++j) a[j] = decay_[j] * (a[j] + tau_ * lambda[j] * work_[j]);
  } else {
    for (int j = 0; j < n - 1; ++j) a[j] *= decay_[j];
  }
  basis_->transform(a, scratch_);
  for (double x : a)
    if (!std::isfinite(x) || std::fabs(x) > kOverflowLimit) return false;
  return true;
}

bool ExpEulerWorkspace::advance_tangent(Field& D, const Field& U, std::span<const double> dbeta,
                                        const Drift& drift, const Diffusion& diffusion) {
  const int n = basis_->n();
  if (dbeta.size() != static_cast<std::size_t>(n - 1))
    throw std::invalid_argument("advance_tangent: dbeta must have n-1 entries");
  auto& a = D.v;
  const bool with_drift = !drift.is_zero();
  if (with_drift)
    for (int k = 0; k < n - 1; ++k) work_[k] = drift.derivative(U.v[k]) * a[k];
  for (int k = 0; k < n - 1; ++k)
    a[k] += noise_scale_ * diffusion.derivative(U.v[k]) * a[k] * dbeta[k];
  basis_->transform(a, scratch_);
  if (with_drift) {
    basis_->transform(work_, scratch_);
    const auto lambda = basis_->lambda();
    for (int j = 0; j < n - 1; ++j) a[j] = decay_[j] * (a[j] + tau_ * lambda[j] * work_[j]);
  } else {
    for (int j = 0; j < n - 1; ++j) a[j] *= decay_[j];
  }
  basis_->transform(a, scratch_);
  for (double x : a)
    if (!std::isfinite(x) || std::fabs(x) > kOverflowLimit) return false;
  return true;
}

void ExpEulerWorkspace::apply_semigroup(Field& U) {
  basis_->transform(U.v, scratch_);
  for (int j = 0; j < basis_->n() - 1; ++j) U.v[j] *= decay_[j];
  basis_->transform(U.v, scratch_);
}

Field step(const Field& U, std::span<const double> dbeta, const SpectralBasis& basis, double tau,
           const Drift& drift, const Diffusion& diffusion) {
  if (U.mesh.n != basis.n()) throw std::invalid_argument("step: field/basis size mismatch");
  ExpEulerWorkspace ws(basis, tau);
  Field out = U;
  if (!ws.advance(out, dbeta, drift, diffusion))
    throw std::runtime_error("step: state overflow (non-finite or above limit)");
  return out;
}

namespace {

bool record_at(const SolverConfig& config, int step_index) {
  switch (config.record) {
    case RecordPolicy::terminal_only:
      return step_index == config.m;
    case RecordPolicy::all_steps:
      return true;
    case RecordPolicy::stride:
      return step_index % config.stride == 0 || step_index == config.m;
    case RecordPolicy::selected:
      return std::binary_search(config.record_steps.begin(), config.record_steps.end(),
                                step_index);
  }
  return false;
}

}  // namespace

Trajectory simulate(const SolverConfig& config, const SpectralBasis& basis,
                    const SheetIncrements& sheet) {
  config.validate();
  if (basis.n() != config.n) throw std::invalid_argument("simulate: basis built for different n");

  const SheetIncrements* use = &sheet;
  std::optional<SheetIncrements> reduced;
  if (sheet.m() != config.m || sheet.n() != config.n) {
    if (sheet.m() % config.m != 0 || sheet.n() % config.n != 0)
      throw std::invalid_argument("simulate: sheet is not coarsenable to (m, n)");
    reduced = coarsen(sheet, sheet.m() / config.m, sheet.n() / config.n);
    use = &*reduced;
  }

  const double noise_scale = std::sqrt(config.n / kPi);
  ExpEulerWorkspace ws(basis, config.tau());
  Trajectory traj;
  Field U = initial_field(config.initial, basis.mesh());
  if (record_at(config, 0)) {
    traj.steps.push_back(0);
    traj.states.push_back(U);
  }
  std::vector<double> dbeta(static_cast<std::size_t>(config.n - 1));
  for (int i = 0; i < config.m; ++i) {
    const auto row = use->row(i);
    // beta^k is driven by the sheet cell [kh, (k+1)h]; cell 0 is unused.
    for (int k = 1; k <= config.n - 1; ++k) dbeta[k - 1] = noise_scale * row[k];
    if (!ws.advance(U, dbeta, config.drift, config.diffusion)) {
      traj.blew_up = true;
      traj.blowup_step = i + 1;
      break;
    }
    if (record_at(config, i + 1)) {
      traj.steps.push_back(i + 1);
      traj.states.push_back(U);
    }
  }
  if (!traj.blew_up && (traj.steps.empty() || traj.steps.back() != config.m)) {
    traj.steps.push_back(config.m);
    traj.states.push_back(U);
  }
  return traj;
}

Trajectory semidiscrete_reference(SolverConfig config, const SpectralBasis& basis,
                                  const SheetIncrements& sheet, int m_ref) {
  if (m_ref < config.m)
    throw std::invalid_argument("semidiscrete_reference: m_ref must be >= the study m");
  config.m = m_ref;
  return simulate(config, basis, sheet);
}

}  // namespace schlab
