#pragma once

#include <complex>
#include <span>
#include <vector>

#include "schlab/grid.hpp"
#include "schlab/models.hpp"
#include "schlab/noise.hpp"

namespace schlab {

// A state whose max-norm crosses this limit aborts the sample; studies
// count such discards (zero under globally Lipschitz coefficients).
inline constexpr double kOverflowLimit = 1e12;

enum class RecordPolicy { terminal_only, all_steps, stride, selected };

struct SolverConfig {
  int n = 32;
  int m = 128;
  double T = 0.1;
  Drift drift = Drift::scaled_sine(1.0);
  Diffusion diffusion = Diffusion::shifted_sine(1.0, 0.5);
  InitialData initial = InitialData::sine_mode(1, 1.0);
  RecordPolicy record = RecordPolicy::terminal_only;
  int stride = 1;
  std::vector<int> record_steps;  // used when record == selected; sorted step indices

  double tau() const { return T / m; }
  void validate() const;
  bool operator==(const SolverConfig&) const = default;
};

struct Trajectory {
  std::vector<int> steps;  // recorded step indices (0 = initial state)
  std::vector<Field> states;
  bool blew_up = false;
  int blowup_step = -1;

  const Field& terminal() const { return states.back(); }
  const Field* at_step(int step) const;
};

Field initial_field(const InitialData& u0, const Mesh& mesh);

// Caches the per-mode semigroup factors exp(-lambda_j^2 tau) for one tau,
// plus scratch buffers, so repeated stepping stays allocation-free.
// Not thread-safe; give each worker its own instance.
class ExpEulerWorkspace {
 public:
  ExpEulerWorkspace(const SpectralBasis& basis, double tau);

  const SpectralBasis& basis() const { return *basis_; }
  double tau() const { return tau_; }
  std::span<const double> decay() const { return decay_; }

  // U <- E_tau [ U + tau A_n f(U) + sqrt(n/pi) sigma(U) dbeta ].
  // dbeta holds the scaled increments for interior cells k = 1..n-1.
  // Returns false if the updated state is non-finite or above the limit.
  bool advance(Field& U, std::span<const double> dbeta, const Drift& drift,
               const Diffusion& diffusion);

  // Exact linearization of advance:
  // D <- E_tau [ D + tau A_n (f'(U) D) + sqrt(n/pi) (sigma'(U) D) dbeta ].
  bool advance_tangent(Field& D, const Field& U, std::span<const double> dbeta,
                       const Drift& drift, const Diffusion& diffusion);

  // U <- E_tau U.
  void apply_semigroup(Field& U);

 private:
  const SpectralBasis* basis_;
  double tau_;
  double noise_scale_;  // sqrt(n/pi)
  std::vector<double> decay_;
  std::vector<double> work_;
  std::vector<std::complex<double>> scratch_;
};

// One exponential Euler update (convenience wrapper over the workspace).
Field step(const Field& U, std::span<const double> dbeta, const SpectralBasis& basis, double tau,
           const Drift& drift, const Diffusion& diffusion);

// Iterate the scheme m times from initial_field, driven by the sheet.
// The sheet must either match (m, n) or be exactly coarsenable to it.
Trajectory simulate(const SolverConfig& config, const SpectralBasis& basis,
                    const SheetIncrements& sheet);

// Proxy for the time-continuous semi-discrete solution: the same scheme run
// with m_ref steps. The residual time-stepping bias is absorbed by keeping
// m_ref well above every study level.
Trajectory semidiscrete_reference(SolverConfig config, const SpectralBasis& basis,
                                  const SheetIncrements& sheet, int m_ref);

}  // namespace schlab
