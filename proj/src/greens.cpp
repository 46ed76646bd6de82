#include "schlab/greens.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace schlab {

namespace {

double phi(int j, double x) { return std::sqrt(2.0 / kPi) * std::sin(j * x); }

// First J with exp(-2 J^4 t) * J <= tol, capped at j_max.
int series_cutoff(double t, const KernelConfig& cfg) {
  for (int J = 1; J < cfg.j_max; ++J) {
    const double jd = J;
    if (std::exp(-2.0 * jd * jd * jd * jd * t) * jd <= cfg.tail_tol) return J;
  }
  return cfg.j_max;
}

// Graded time nodes s_k = T (k/K)^grading; returns midpoints and weights.
void graded_midpoints(double T, const KernelConfig& cfg, std::vector<double>& mid,
                      std::vector<double>& wgt) {
  const int K = cfg.time_nodes;
  mid.resize(K);
  wgt.resize(K);
  double prev = 0.0;
  for (int k = 1; k <= K; ++k) {
    const double cur = T * std::pow(static_cast<double>(k) / K, cfg.time_grading);
    mid[k - 1] = 0.5 * (prev + cur);
    wgt[k - 1] = cur - prev;
    prev = cur;
  }
}

}  // namespace

void KernelConfig::validate() const {
  if (!(tail_tol > 0.0)) throw std::invalid_argument("KernelConfig: tail_tol must be > 0");
  if (j_max < 8) throw std::invalid_argument("KernelConfig: j_max must be >= 8");
  if (time_nodes < 1 || space_nodes_per_cell < 1)
    throw std::invalid_argument("KernelConfig: node counts must be >= 1");
  if (!(time_grading >= 1.0)) throw std::invalid_argument("KernelConfig: grading must be >= 1");
}

double exact_kernel(double t, double x, double y, const KernelConfig& cfg) {
  if (!(t > 0.0)) throw std::invalid_argument("exact_kernel: t must be > 0");
  const int J = series_cutoff(t, cfg);
  double acc = 0.0;
  for (int j = J; j >= 1; --j) {
    const double jd = j;
    acc += std::exp(-jd * jd * jd * jd * t) * phi(j, x) * phi(j, y);
  }
  return acc;
}

double exact_laplacian_kernel(double t, double x, double y, const KernelConfig& cfg) {
  if (!(t > 0.0)) throw std::invalid_argument("exact_laplacian_kernel: t must be > 0");
  const int J = series_cutoff(t, cfg);
  double acc = 0.0;
  for (int j = J; j >= 1; --j) {
    const double jd = j;
    acc += -jd * jd * std::exp(-jd * jd * jd * jd * t) * phi(j, x) * phi(j, y);
  }
  return acc;
}

double phi_interp(const SpectralBasis& basis, int j, double x) {
  const Mesh& mesh = basis.mesh();
  const int k = mesh.cell_index(x);
  const double w = x / mesh.h - k;
  const double left = phi(j, mesh.x(k));
  const double right = phi(j, mesh.x(k + 1));
  return (1.0 - w) * left + w * right;
}

double discrete_kernel(double t, double x, double y, const SpectralBasis& basis) {
  if (t < 0.0) throw std::invalid_argument("discrete_kernel: t must be >= 0");
  const double ky = basis.mesh().floor_to_grid(y);
  double acc = 0.0;
  for (int j = 1; j <= basis.n() - 1; ++j) {
    const double lam = basis.lambda_j(j);
    acc += std::exp(-lam * lam * t) * phi_interp(basis, j, x) * phi(j, ky);
  }
  return acc;
}

double discrete_laplacian_kernel(double t, double x, double y, const SpectralBasis& basis) {
  if (t < 0.0) throw std::invalid_argument("discrete_laplacian_kernel: t must be >= 0");
  const double ky = basis.mesh().floor_to_grid(y);
  double acc = 0.0;
  for (int j = 1; j <= basis.n() - 1; ++j) {
    const double lam = basis.lambda_j(j);
    acc += lam * std::exp(-lam * lam * t) * phi_interp(basis, j, x) * phi(j, ky);
  }
  return acc;
}

double kernel_error_l2(int n, double T, double x, const KernelConfig& cfg) {
  cfg.validate();
  if (!(T > 0.0)) throw std::invalid_argument("kernel_error_l2: T must be > 0");
  const SpectralBasis basis(n);
  std::vector<double> mid, wgt;
  graded_midpoints(T, cfg, mid, wgt);
  const int ky_count = cfg.space_nodes_per_cell * n;
  const double dy = kPi / ky_count;
  double total = 0.0;
  for (std::size_t q = 0; q < mid.size(); ++q) {
    const double s = mid[q];
    double inner = 0.0;
    for (int iy = 0; iy < ky_count; ++iy) {
      const double y = (iy + 0.5) * dy;
      const double d = discrete_kernel(s, x, y, basis) - exact_kernel(s, x, y, cfg);
      inner += d * d;
    }
    total += wgt[q] * inner * dy;
  }
  return total;
}

double kernel_error_l1_laplacian(int n, double T, double x, const KernelConfig& cfg) {
  cfg.validate();
  if (!(T > 0.0)) throw std::invalid_argument("kernel_error_l1_laplacian: T must be > 0");
  const SpectralBasis basis(n);
  std::vector<double> mid, wgt;
  graded_midpoints(T, cfg, mid, wgt);
  const int ky_count = cfg.space_nodes_per_cell * n;
  const double dy = kPi / ky_count;
  double total = 0.0;
  for (std::size_t q = 0; q < mid.size(); ++q) {
    const double s = mid[q];
    double inner = 0.0;
    for (int iy = 0; iy < ky_count; ++iy) {
      const double y = (iy + 0.5) * dy;
      inner += std::fabs(discrete_laplacian_kernel(s, x, y, basis) -
                         exact_laplacian_kernel(s, x, y, cfg));
    }
    total += wgt[q] * inner * dy;
  }
  return total;
}

RegularityIntegrals discrete_regularity_integrals(double s, double t, double x, double y,
                                                  const SpectralBasis& basis) {
  if (!(0.0 <= s && s <= t)) throw std::invalid_argument("regularity integrals: need 0 <= s <= t");
  RegularityIntegrals out;
  for (int j = 1; j <= basis.n() - 1; ++j) {
    const double lam2 = basis.lambda_j(j) * basis.lambda_j(j);
    const double px = phi_interp(basis, j, x);
    const double py = phi_interp(basis, j, y);
    // int_0^t exp(-2 lam^2 r) dr = (1 - exp(-2 lam^2 t)) / (2 lam^2)
    out.spatial_difference += (1.0 - std::exp(-2.0 * lam2 * t)) / (2.0 * lam2) * (px - py) * (px - py);
    const double gap = 1.0 - std::exp(-lam2 * (t - s));
    out.temporal_difference += gap * gap * (1.0 - std::exp(-2.0 * lam2 * s)) / (2.0 * lam2) * px * px;
    out.tail += (1.0 - std::exp(-2.0 * lam2 * (t - s))) / (2.0 * lam2) * px * px;
  }
  return out;
}

}  // namespace schlab
