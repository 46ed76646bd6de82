#pragma once

#include <span>
#include <vector>

#include "schlab/solver.hpp"

namespace schlab {

// hnorm2_at propagates one tangent per (step, cell) pair; this cap keeps a
// full table affordable.
inline constexpr int kTangentTableCap = 8192;  // maximum m * n

// Sensitivity of the running state to one scaled increment dbeta_i^k.
// The tangent is identically zero for steps <= the creation step.
struct TangentField {
  int creation_step = 0;  // i: derivative w.r.t. the increments of step i
  int cell = 0;           // k in 1..n-1
  Field values;
};

// D_{i+1} = E_tau [ sqrt(n/pi) sigma(U_i(k)) unit_k ]: the derivative of one
// exponential Euler update with respect to dbeta_i^k.
TangentField tangent_inject(const Field& U_i, int cell, const SpectralBasis& basis, double tau,
                            const Diffusion& diffusion, int step_index);

// Advance a tangent through one step of the forward solution.
void tangent_step(TangentField& D, const Field& U_j, std::span<const double> dbeta_j,
                  const SpectralBasis& basis, double tau, const Drift& drift,
                  const Diffusion& diffusion);

struct MalliavinRecord {
  double hnorm2 = 0.0;  // tau * sum_{i,k} (d u(T, x*) / d dbeta_i^k)^2
  double eval_x = 0.0;
  int m = 0;
  int n = 0;
  // Row-major m x (n-1) table of d u(T, x*) / d dbeta_i^k.
  std::vector<double> table;

  double entry(int i, int k) const {
    return table[static_cast<std::size_t>(i) * static_cast<std::size_t>(n - 1) +
                 static_cast<std::size_t>(k - 1)];
  }
};

// Full tangent table alongside one forward solve. The factor tau in hnorm2
// comes from each increment representing a Cameron-Martin direction of
// squared norm (n/pi) tau h = tau, pairwise orthogonal.
MalliavinRecord hnorm2_at(const SolverConfig& config, const SpectralBasis& basis,
                          const SheetIncrements& sheet, double eval_x);

struct NegativeMomentEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  double rho = 0.0;
  int samples = 0;
};

// Sample mean of hnorm2^(-rho); informational, defined only when every
// record is strictly positive.
NegativeMomentEstimate negative_moment_estimate(std::span<const MalliavinRecord> records,
                                                double rho);

// One-sample discrete analogue of || Du^{n_coarse} - Du^{n_fine} ||_H^2 at
// (T, eval_x). The fine level's derivative is projected onto the coarse
// increment set by re-injecting the coarse cell pattern into the fine
// tangent dynamics (equivalently: sum of fine tangents weighted by
// sqrt(n_coarse / n_fine)); the master sheet must live at (m, n_fine).
double malliavin_error(const SolverConfig& base, int n_coarse, int n_fine,
                       const SheetIncrements& master, double eval_x);

}  // namespace schlab
