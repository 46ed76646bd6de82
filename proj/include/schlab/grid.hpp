#pragma once

#include <complex>
#include <span>
#include <vector>

namespace schlab {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Uniform mesh on [0, pi] with n subintervals; zero Dirichlet boundary.
// Interior indices run over k = 1..n-1.
struct Mesh {
  int n = 0;
  double h = 0.0;

  Mesh() = default;
  explicit Mesh(int n_count);

  double x(int k) const { return h * k; }
  int interior_count() const { return n - 1; }

  // Index k with y in [kh, (k+1)h); y = pi maps to n.
  int floor_index(double y) const;
  // kappa_n(y) = h * floor(y/h).
  double floor_to_grid(double y) const { return h * floor_index(y); }
  // Like floor_index but clamped to a valid cell [0, n-1] for interpolation.
  int cell_index(double y) const;

  bool operator==(const Mesh&) const = default;
};

// Interior grid values of a function with implicit zero boundary, plus
// polygonal (piecewise linear) interpolation between nodes.
struct Field {
  Mesh mesh;
  std::vector<double> v;  // v[k-1] = value at x = k h

  Field() = default;
  explicit Field(Mesh m) : mesh(m), v(static_cast<std::size_t>(m.interior_count()), 0.0) {}

  double& at(int k) { return v[static_cast<std::size_t>(k - 1)]; }
  double at(int k) const { return v[static_cast<std::size_t>(k - 1)]; }

  bool all_finite() const;
  double max_abs() const;
  double interpolate(double x) const;
};

// Eigenpairs of the scaled second-difference matrix A_n together with the
// orthonormal discrete sine transform that diagonalizes it.
//
//   lambda_j = -j^2 c_j,   c_j = sin^2(j pi / (2n)) / (j pi / (2n))^2,
//   e_j(k)   = sqrt(2/n) sin(j k pi / n),    j, k = 1..n-1.
//
// The transform is involutive (DST-I with orthonormal scaling), so the same
// routine implements forward and inverse. A radix-2 FFT of the odd extension
// provides an O(n log n) path when n is a power of two; other sizes fall back
// to the O(n^2) reference product, which doubles as the cross-check oracle.
class SpectralBasis {
 public:
  explicit SpectralBasis(int n_count);

  int n() const { return n_; }
  const Mesh& mesh() const { return mesh_; }

  std::span<const double> lambda() const { return lambda_; }
  std::span<const double> c() const { return c_; }
  double lambda_j(int j) const { return lambda_[static_cast<std::size_t>(j - 1)]; }
  double c_j(int j) const { return c_[static_cast<std::size_t>(j - 1)]; }

  // e_j(k), j,k = 1..n-1.
  double e(int j, int k) const;

  bool has_fast_path() const { return !bitrev_.empty(); }

  // In-place orthonormal DST-I of the n-1 interior values.
  void transform(std::span<double> values) const;
  void transform(std::span<double> values, std::vector<std::complex<double>>& scratch) const;

  std::vector<double> forward(const Field& f) const;
  Field inverse(std::span<const double> coeffs) const;

  // O(n^2) reference transform (matrix product with rows e_j).
  std::vector<double> forward_naive(std::span<const double> values) const;

 private:
  void fft(std::span<std::complex<double>> a) const;

  int n_;
  Mesh mesh_;
  std::vector<double> c_;
  std::vector<double> lambda_;
  std::vector<std::size_t> bitrev_;            // FFT plan, length 2n
  std::vector<std::complex<double>> twiddle_;  // exp(-2 pi i k / 2n), k < n
};

SpectralBasis build_basis(int n_count);

// Second difference (v_{k-1} - 2 v_k + v_{k+1}) / h^2 with v_0 = v_n = 0.
Field apply_laplacian(const Field& f);

// Fourth difference with the antisymmetric ghost condition
// v_{-1} = -v_1, v_{n+1} = -v_{n-1}; equals A_n^2 as a matrix.
Field apply_bilaplacian(const Field& f);

}  // namespace schlab
