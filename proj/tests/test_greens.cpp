#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "schlab/greens.hpp"
#include "schlab/stats.hpp"

using namespace schlab;

namespace {

double phi(int j, double x) { return std::sqrt(2.0 / kPi) * std::sin(j * x); }

// Composite Simpson oracle over [0, pi].
double simpson(const auto& f, int intervals) {
  const double h = kPi / intervals;
  double acc = f(0.0) + f(kPi);
  for (int i = 1; i < intervals; ++i) acc += f(i * h) * ((i % 2) ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("exact kernel: symmetry and rejection") {
  const KernelConfig cfg;
  for (double t : {0.01, 0.5, 2.0}) {
    CHECK(std::fabs(exact_kernel(t, 0.7, 2.1, cfg) - exact_kernel(t, 2.1, 0.7, cfg)) <= 1e-14);
    CHECK(std::fabs(exact_laplacian_kernel(t, 0.7, 2.1, cfg) -
                    exact_laplacian_kernel(t, 2.1, 0.7, cfg)) <= 1e-14);
  }
  CHECK_THROWS_AS(exact_kernel(0.0, 1.0, 1.0, cfg), std::invalid_argument);
  CHECK_THROWS_AS(exact_laplacian_kernel(-1.0, 1.0, 1.0, cfg), std::invalid_argument);
}

TEST_CASE("exact kernel reproduces the phi_1 eigenfunction identities") {
  const KernelConfig cfg;
  const double t = 0.5;
  for (double x : {0.9, kPi / 2.0}) {
    const double lhs =
        simpson([&](double y) { return exact_kernel(t, x, y, cfg) * phi(1, y); }, 1024);
    CHECK(lhs == doctest::Approx(std::exp(-t) * phi(1, x)).epsilon(1e-8));
    const double lap =
        simpson([&](double y) { return exact_laplacian_kernel(t, x, y, cfg) * phi(1, y); }, 1024);
    CHECK(lap == doctest::Approx(-std::exp(-t) * phi(1, x)).epsilon(1e-8));
  }
}

TEST_CASE("large-time kernel is dominated by the leading mode") {
  const KernelConfig cfg;
  const double t = 10.0;
  for (double x : {0.8, 1.9}) {
    for (double y : {0.4, 2.7}) {
      const double lead = std::exp(-t) * phi(1, x) * phi(1, y);
      // next mode carries exp(-16 t) ~ e^-160; the difference must be tiny
      CHECK(std::fabs(exact_kernel(t, x, y, cfg) - lead) <= std::exp(-16.0 * t) * 10.0 + 1e-300);
    }
  }
}

TEST_CASE("truncation cap: raising j_max beyond the adaptive cutoff is inert") {
  KernelConfig cfg;
  KernelConfig wide = cfg;
  wide.j_max = 2048;
  for (double t : {1e-3, 0.05, 1.0})
    CHECK(std::fabs(exact_kernel(t, 1.1, 2.0, cfg) - exact_kernel(t, 1.1, 2.0, wide)) <=
          cfg.tail_tol * 10.0);
}

TEST_CASE("discrete kernel: direct-sum oracle at t=0 on the grid") {
  const SpectralBasis basis(8);
  const Mesh& mesh = basis.mesh();
  for (int k : {1, 3, 5}) {
    // evaluate just inside the cell so kappa_n lands on the node exactly
    const double y = mesh.x(k) + 0.25 * mesh.h;
    double direct = 0.0;
    for (int j = 1; j <= 7; ++j) direct += phi(j, mesh.x(k)) * phi(j, mesh.x(k));
    CHECK(discrete_kernel(0.0, mesh.x(k), y, basis) == doctest::Approx(direct).epsilon(1e-12));
    // phi_j(kh)^2 summed equals (n/pi) sum e_j(k)^2
    double viae = 0.0;
    for (int j = 1; j <= 7; ++j) viae += basis.e(j, k) * basis.e(j, k);
    CHECK(direct == doctest::Approx(viae * 8.0 / kPi).epsilon(1e-12));
  }
}

TEST_CASE("discrete kernel approaches the exact kernel monotonically in n") {
  // Quadrature comparison over y at fixed (t, x): the pointwise gap at one
  // fixed y can stall on nested grids whenever kappa_n(y) is the same node
  // at every level, so the decreasing quantity is the integrated error.
  const KernelConfig cfg;
  const double t = 0.1, x = 1.3;
  double prev = 1e300;
  std::vector<double> errors;
  for (int n : {8, 16, 32, 64}) {
    const SpectralBasis basis(n);
    const int cells = 64 * 8;  // resolves every kappa_n cell on the ladder
    const double dy = kPi / cells;
    double acc = 0.0;
    for (int i = 0; i < cells; ++i) {
      const double y = (i + 0.5) * dy;
      const double d = discrete_kernel(t, x, y, basis) - exact_kernel(t, x, y, cfg);
      acc += d * d * dy;
    }
    CHECK(acc < prev);
    errors.push_back(acc);
    prev = acc;
  }

  // Pointwise smoke envelope anchored at the n=64 value.
  const double y = 2.0;
  const double exact = exact_kernel(t, x, y, cfg);
  const double at64 = std::fabs(discrete_kernel(t, x, y, SpectralBasis(64)) - exact);
  for (int n : {8, 16, 32}) {
    const double err = std::fabs(discrete_kernel(t, x, y, SpectralBasis(n)) - exact);
    CHECK(err <= 10.0 * at64 * (64.0 / n));
  }
}

TEST_CASE("discrete kernel vanishes at the boundary in x") {
  const SpectralBasis basis(16);
  CHECK(discrete_kernel(0.2, 0.0, 1.0, basis) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(discrete_kernel(0.2, kPi, 1.0, basis) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("kernel error functionals: positivity, decay windows, self-convergence") {
  const KernelConfig cfg;
  const double T = 0.5;
  const double x = kPi / 2.0;
  std::vector<double> l2_values, l1_values;
  for (int n : {8, 16, 32}) {
    const double l2 = kernel_error_l2(n, T, x, cfg);
    const double l1 = kernel_error_l1_laplacian(n, T, x, cfg);
    CHECK(l2 > 0.0);
    CHECK(l1 > 0.0);
    l2_values.push_back(l2);
    l1_values.push_back(l1);
  }
  for (std::size_t i = 0; i + 1 < l2_values.size(); ++i) {
    const double r2 = l2_values[i] / l2_values[i + 1];
    const double r1 = l1_values[i] / l1_values[i + 1];
    CHECK(r2 >= 3.0);
    CHECK(r2 <= 5.5);
    CHECK(r1 >= 1.7);
    CHECK(r1 <= 2.6);
  }
  // doubling both node counts moves the answers by <= 5%
  const KernelConfig fine = cfg.refined();
  const double l2f = kernel_error_l2(16, T, x, fine);
  const double l1f = kernel_error_l1_laplacian(16, T, x, fine);
  CHECK(std::fabs(l2f - l2_values[1]) / l2_values[1] <= 0.05);
  CHECK(std::fabs(l1f - l1_values[1]) / l1_values[1] <= 0.05);
}

TEST_CASE("regularity integrals: degenerate gap, tail exponent, spatial bound") {
  const SpectralBasis basis(64);

  SUBCASE("s == t zeroes the time-gap integrals") {
    const auto reg = discrete_regularity_integrals(0.3, 0.3, 1.0, 1.5, basis);
    CHECK(reg.temporal_difference == 0.0);
    CHECK(reg.tail == 0.0);
    CHECK(reg.spatial_difference > 0.0);
  }

  SUBCASE("tail integral scales like the 3/4 power of the gap") {
    std::vector<double> gaps, tails;
    for (int e = 9; e >= 4; --e) {
      const double gap = std::pow(2.0, -e);
      const auto reg = discrete_regularity_integrals(0.05, 0.05 + gap, 1.0, 1.0, basis);
      gaps.push_back(gap);
      tails.push_back(reg.tail);
    }
    const LineFit fit = least_squares(
        [&] {
          std::vector<double> lx;
          for (double g : gaps) lx.push_back(std::log2(g));
          return lx;
        }(),
        [&] {
          std::vector<double> ly;
          for (double t : tails) ly.push_back(std::log2(t));
          return ly;
        }());
    CHECK(fit.slope >= 0.65);
    CHECK(fit.slope <= 0.85);
  }

  SUBCASE("spatial-difference integral obeys the per-mode |x-y|^2 bound") {
    // Sum over modes of (2/pi) j^2 / (2 lambda_j^2) dominates the fitted C.
    double c_bound = 0.0;
    for (int j = 1; j <= 63; ++j) {
      const double lam2 = basis.lambda_j(j) * basis.lambda_j(j);
      c_bound += (2.0 / kPi) * j * j / (2.0 * lam2);
    }
    double c_fit = 0.0;
    for (double dxy : {0.2, 0.1, 0.05, 0.025}) {
      const auto reg = discrete_regularity_integrals(0.0, 0.1, 1.2, 1.2 + dxy, basis);
      c_fit = std::max(c_fit, reg.spatial_difference / (dxy * dxy));
    }
    CHECK(c_fit <= 2.0 * c_bound);
    CHECK(c_fit > 0.0);
  }

  SUBCASE("invalid time ordering is rejected") {
    CHECK_THROWS_AS(discrete_regularity_integrals(0.5, 0.2, 1.0, 1.0, basis),
                    std::invalid_argument);
  }
}
