#include "schlab/malliavin.hpp"

#include <cmath>
#include <stdexcept>

#include "schlab/stats.hpp"

namespace schlab {

TangentField tangent_inject(const Field& U_i, int cell, const SpectralBasis& basis, double tau,
                            const Diffusion& diffusion, int step_index) {
  if (cell < 1 || cell > basis.n() - 1)
    throw std::invalid_argument("tangent_inject: cell must be in 1..n-1");
  TangentField D;
  D.creation_step = step_index;
  D.cell = cell;
  D.values = Field(basis.mesh());
  D.values.at(cell) = std::sqrt(basis.n() / kPi) * diffusion(U_i.at(cell));
  if (tau > 0.0) {
    ExpEulerWorkspace ws(basis, tau);
    ws.apply_semigroup(D.values);
  }
  return D;
}

void tangent_step(TangentField& D, const Field& U_j, std::span<const double> dbeta_j,
                  const SpectralBasis& basis, double tau, const Drift& drift,
                  const Diffusion& diffusion) {
  ExpEulerWorkspace ws(basis, tau);
  if (!ws.advance_tangent(D.values, U_j, dbeta_j, drift, diffusion))
    throw std::runtime_error("tangent_step: tangent overflow");
}

namespace {

// Forward solve recording every pre-step state and its scaled increments.
struct ForwardPath {
  std::vector<Field> states;           // states[i] = state before step i, i = 0..m-1
  std::vector<std::vector<double>> dbeta;  // dbeta[i] for interior cells
  Field terminal;
};

ForwardPath solve_forward(const SolverConfig& config, const SpectralBasis& basis,
                          const SheetIncrements& sheet, ExpEulerWorkspace& ws) {
  config.validate();
  if (sheet.m() != config.m || sheet.n() != config.n)
    throw std::invalid_argument("solve_forward: sheet must match (m, n) exactly");
  const double noise_scale = std::sqrt(config.n / kPi);
  ForwardPath path;
  path.states.reserve(static_cast<std::size_t>(config.m));
  path.dbeta.reserve(static_cast<std::size_t>(config.m));
  Field U = initial_field(config.initial, basis.mesh());
  for (int i = 0; i < config.m; ++i) {
    const auto row = sheet.row(i);
    std::vector<double> db(static_cast<std::size_t>(config.n - 1));
    for (int k = 1; k <= config.n - 1; ++k) db[k - 1] = noise_scale * row[k];
    path.states.push_back(U);
    path.dbeta.push_back(std::move(db));
    if (!ws.advance(U, path.dbeta.back(), config.drift, config.diffusion))
      throw std::runtime_error("solve_forward: state overflow");
  }
  path.terminal = std::move(U);
  return path;
}

}  // namespace

MalliavinRecord hnorm2_at(const SolverConfig& config, const SpectralBasis& basis,
                          const SheetIncrements& sheet, double eval_x) {
  if (static_cast<long long>(config.m) * config.n > kTangentTableCap)
    throw std::invalid_argument("hnorm2_at: m * n exceeds the tangent table cap");
  ExpEulerWorkspace ws(basis, config.tau());
  const ForwardPath path = solve_forward(config, basis, sheet, ws);

  const int m = config.m;
  const int nm1 = config.n - 1;
  std::vector<TangentField> tangents;
  tangents.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(nm1));
  for (int i = 0; i < m; ++i) {
    for (auto& D : tangents)
      if (!ws.advance_tangent(D.values, path.states[static_cast<std::size_t>(i)],
                              path.dbeta[static_cast<std::size_t>(i)], config.drift,
                              config.diffusion))
        throw std::runtime_error("hnorm2_at: tangent overflow");
    for (int k = 1; k <= nm1; ++k)
      tangents.push_back(tangent_inject(path.states[static_cast<std::size_t>(i)], k, basis,
                                        config.tau(), config.diffusion, i));
  }

  MalliavinRecord rec;
  rec.eval_x = eval_x;
  rec.m = m;
  rec.n = config.n;
  rec.table.assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(nm1), 0.0);
  double acc = 0.0;
  for (const auto& D : tangents) {
    const double g = D.values.interpolate(eval_x);
    rec.table[static_cast<std::size_t>(D.creation_step) * static_cast<std::size_t>(nm1) +
              static_cast<std::size_t>(D.cell - 1)] = g;
    acc += g * g;
  }
  rec.hnorm2 = config.tau() * acc;
  return rec;
}

NegativeMomentEstimate negative_moment_estimate(std::span<const MalliavinRecord> records,
                                                double rho) {
  if (!(rho > 0.0 && rho <= 1.0))
    throw std::invalid_argument("negative_moment_estimate: rho must be in (0, 1]");
  if (records.empty()) throw std::invalid_argument("negative_moment_estimate: no records");
  std::vector<double> vals;
  vals.reserve(records.size());
  for (const auto& r : records) {
    if (!(r.hnorm2 > 0.0))
      throw std::domain_error("negative_moment_estimate: degenerate record (hnorm2 == 0)");
    vals.push_back(std::pow(r.hnorm2, -rho));
  }
  NegativeMomentEstimate est;
  est.mean = mean(vals);
  est.standard_error = vals.size() >= 2 ? standard_error(vals) : 0.0;
  est.rho = rho;
  est.samples = static_cast<int>(vals.size());
  return est;
}

double malliavin_error(const SolverConfig& base, int n_coarse, int n_fine,
                       const SheetIncrements& master, double eval_x) {
  if (n_fine % n_coarse != 0)
    throw std::invalid_argument("malliavin_error: n_coarse must divide n_fine");
  if (master.m() != base.m || master.n() != n_fine)
    throw std::invalid_argument("malliavin_error: master sheet must live at (m, n_fine)");
  const int factor = n_fine / n_coarse;
  const int m = base.m;
  const double tau = base.T / m;

  // Coarse level: full tangent table under its own dynamics.
  SolverConfig coarse_cfg = base;
  coarse_cfg.n = n_coarse;
  const SpectralBasis coarse_basis(n_coarse);
  const SheetIncrements coarse_sheet = coarsen(master, 1, factor);
  ExpEulerWorkspace coarse_ws(coarse_basis, tau);
  const ForwardPath coarse_path = solve_forward(coarse_cfg, coarse_basis, coarse_sheet, coarse_ws);

  // Fine level: re-inject the coarse cell pattern, i.e. the derivative in
  // the direction sqrt(n_coarse/pi) 1_{coarse cell}, into the fine dynamics.
  SolverConfig fine_cfg = base;
  fine_cfg.n = n_fine;
  const SpectralBasis fine_basis(n_fine);
  ExpEulerWorkspace fine_ws(fine_basis, tau);
  const ForwardPath fine_path = solve_forward(fine_cfg, fine_basis, master, fine_ws);

  const int kc_count = n_coarse - 1;
  const double inject_scale = std::sqrt(n_coarse / kPi);

  std::vector<TangentField> coarse_tangents, fine_tangents;
  coarse_tangents.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(kc_count));
  fine_tangents.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(kc_count));

  for (int i = 0; i < m; ++i) {
    for (auto& D : coarse_tangents)
      if (!coarse_ws.advance_tangent(D.values, coarse_path.states[static_cast<std::size_t>(i)],
                                     coarse_path.dbeta[static_cast<std::size_t>(i)],
                                     coarse_cfg.drift, coarse_cfg.diffusion))
        throw std::runtime_error("malliavin_error: coarse tangent overflow");
    for (auto& D : fine_tangents)
      if (!fine_ws.advance_tangent(D.values, fine_path.states[static_cast<std::size_t>(i)],
                                   fine_path.dbeta[static_cast<std::size_t>(i)], fine_cfg.drift,
                                   fine_cfg.diffusion))
        throw std::runtime_error("malliavin_error: fine tangent overflow");
    for (int kc = 1; kc <= kc_count; ++kc) {
      coarse_tangents.push_back(tangent_inject(coarse_path.states[static_cast<std::size_t>(i)],
                                               kc, coarse_basis, tau, coarse_cfg.diffusion, i));
      TangentField Df;
      Df.creation_step = i;
      Df.cell = kc;
      Df.values = Field(fine_basis.mesh());
      const Field& Uf = fine_path.states[static_cast<std::size_t>(i)];
      for (int kf = kc * factor; kf < (kc + 1) * factor; ++kf)
        Df.values.at(kf) = inject_scale * fine_cfg.diffusion(Uf.at(kf));
      if (tau > 0.0) fine_ws.apply_semigroup(Df.values);
      fine_tangents.push_back(std::move(Df));
    }
  }

  double acc = 0.0;
  for (std::size_t idx = 0; idx < coarse_tangents.size(); ++idx) {
    const double a = coarse_tangents[idx].values.interpolate(eval_x);
    const double b = fine_tangents[idx].values.interpolate(eval_x);
    acc += (a - b) * (a - b);
  }
  return tau * acc;
}

}  // namespace schlab
