#include "schlab/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace schlab {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Mesh::Mesh(int n_count) : n(n_count), h(kPi / n_count) {
  if (n_count < 2) throw std::invalid_argument("Mesh: n must be >= 2");
}

int Mesh::floor_index(double y) const {
  int k = static_cast<int>(std::floor(y / h));
  if (k < 0) k = 0;
  if (k > n) k = n;
  return k;
}

int Mesh::cell_index(double y) const {
  const int k = floor_index(y);
  return k > n - 1 ? n - 1 : k;
}

bool Field::all_finite() const {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

double Field::max_abs() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double Field::interpolate(double x) const {
  if (x < 0.0 || x > kPi) throw std::invalid_argument("Field::interpolate: x outside [0, pi]");
  const int k = mesh.cell_index(x);
  const double w = x / mesh.h - k;
  const double left = (k >= 1) ? at(k) : 0.0;
  const double right = (k + 1 <= mesh.n - 1) ? at(k + 1) : 0.0;
  return (1.0 - w) * left + w * right;
}

SpectralBasis::SpectralBasis(int n_count) : n_(n_count), mesh_(n_count) {
  if (n_count < 2) throw std::invalid_argument("SpectralBasis: n must be >= 2");
  c_.resize(static_cast<std::size_t>(n_ - 1));
  lambda_.resize(static_cast<std::size_t>(n_ - 1));
  for (int j = 1; j <= n_ - 1; ++j) {
    const double a = j * kPi / (2.0 * n_);
    const double s = std::sin(a) / a;
    c_[static_cast<std::size_t>(j - 1)] = s * s;
    lambda_[static_cast<std::size_t>(j - 1)] = -static_cast<double>(j) * j * s * s;
  }
  if (is_power_of_two(n_)) {
    const std::size_t len = 2 * static_cast<std::size_t>(n_);
    bitrev_.resize(len);
    int logn = 0;
    while ((std::size_t{1} << logn) < len) ++logn;
    for (std::size_t i = 0; i < len; ++i) {
      std::size_t r = 0;
      for (int b = 0; b < logn; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (logn - 1 - b);
      bitrev_[i] = r;
    }
    twiddle_.resize(len / 2);
    for (std::size_t k = 0; k < len / 2; ++k) {
      const double ang = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(len);
      twiddle_[k] = {std::cos(ang), std::sin(ang)};
    }
  }
}

double SpectralBasis::e(int j, int k) const {
  // sin(j k pi / n) has period 2n in j*k; reducing the index in exact
  // integer arithmetic keeps the argument small, so high modes at large n
  // do not lose absolute accuracy to the rounded pi.
  const long long r = (static_cast<long long>(j) * k) % (2LL * n_);
  return std::sqrt(2.0 / n_) * std::sin(static_cast<double>(r) * kPi / n_);
}

void SpectralBasis::fft(std::span<std::complex<double>> a) const {
  const std::size_t len = a.size();
  for (std::size_t i = 0; i < len; ++i)
    if (bitrev_[i] > i) std::swap(a[i], a[bitrev_[i]]);
  for (std::size_t half = 1; half < len; half <<= 1) {
    const std::size_t step = len / (2 * half);
    for (std::size_t start = 0; start < len; start += 2 * half) {
      for (std::size_t k = 0; k < half; ++k) {
        const std::complex<double> w = twiddle_[k * step];
        const std::complex<double> u = a[start + k];
        const std::complex<double> t = w * a[start + k + half];
        a[start + k] = u + t;
        a[start + k + half] = u - t;
      }
    }
  }
}

void SpectralBasis::transform(std::span<double> values) const {
  std::vector<std::complex<double>> scratch;
  transform(values, scratch);
}

void SpectralBasis::transform(std::span<double> values,
                              std::vector<std::complex<double>>& scratch) const {
  if (values.size() != static_cast<std::size_t>(n_ - 1))
    throw std::invalid_argument("SpectralBasis::transform: size mismatch with plan");
  if (!has_fast_path()) {
    auto out = forward_naive(values);
    std::copy(out.begin(), out.end(), values.begin());
    return;
  }
  const std::size_t len = 2 * static_cast<std::size_t>(n_);
  scratch.assign(len, {0.0, 0.0});
  for (int k = 1; k <= n_ - 1; ++k) {
    const double vk = values[static_cast<std::size_t>(k - 1)];
    scratch[static_cast<std::size_t>(k)] = {vk, 0.0};
    scratch[len - static_cast<std::size_t>(k)] = {-vk, 0.0};
  }
  fft(scratch);
  const double scale = -0.5 * std::sqrt(2.0 / n_);
  for (int j = 1; j <= n_ - 1; ++j)
    values[static_cast<std::size_t>(j - 1)] = scale * scratch[static_cast<std::size_t>(j)].imag();
}

std::vector<double> SpectralBasis::forward(const Field& f) const {
  if (f.mesh.n != n_) throw std::invalid_argument("SpectralBasis::forward: mesh/plan size mismatch");
  std::vector<double> out = f.v;
  transform(out);
  return out;
}

Field SpectralBasis::inverse(std::span<const double> coeffs) const {
  if (coeffs.size() != static_cast<std::size_t>(n_ - 1))
    throw std::invalid_argument("SpectralBasis::inverse: mesh/plan size mismatch");
  Field f(mesh_);
  std::copy(coeffs.begin(), coeffs.end(), f.v.begin());
  transform(f.v);
  return f;
}

std::vector<double> SpectralBasis::forward_naive(std::span<const double> values) const {
  if (values.size() != static_cast<std::size_t>(n_ - 1))
    throw std::invalid_argument("SpectralBasis::forward_naive: size mismatch");
  std::vector<double> out(static_cast<std::size_t>(n_ - 1), 0.0);
  for (int j = 1; j <= n_ - 1; ++j) {
    double acc = 0.0;
    for (int k = 1; k <= n_ - 1; ++k) acc += e(j, k) * values[static_cast<std::size_t>(k - 1)];
    out[static_cast<std::size_t>(j - 1)] = acc;
  }
  return out;
}

SpectralBasis build_basis(int n_count) { return SpectralBasis(n_count); }

Field apply_laplacian(const Field& f) {
  const int n = f.mesh.n;
  const double inv_h2 = 1.0 / (f.mesh.h * f.mesh.h);
  Field out(f.mesh);
  for (int k = 1; k <= n - 1; ++k) {
    const double vm = (k > 1) ? f.at(k - 1) : 0.0;
    const double vp = (k < n - 1) ? f.at(k + 1) : 0.0;
    out.at(k) = (vm - 2.0 * f.at(k) + vp) * inv_h2;
  }
  return out;
}

Field apply_bilaplacian(const Field& f) {
  const int n = f.mesh.n;
  const double h2 = f.mesh.h * f.mesh.h;
  const double inv_h4 = 1.0 / (h2 * h2);
  auto ghost = [&](int k) -> double {
    if (k == 0 || k == n) return 0.0;
    if (k == -1) return -f.at(1);
    if (k == n + 1) return -f.at(n - 1);
    return f.at(k);
  };
  Field out(f.mesh);
  for (int k = 1; k <= n - 1; ++k) {
    out.at(k) = (ghost(k - 2) - 4.0 * ghost(k - 1) + 6.0 * f.at(k) - 4.0 * ghost(k + 1) +
                 ghost(k + 2)) *
                inv_h4;
  }
  return out;
}

}  // namespace schlab
