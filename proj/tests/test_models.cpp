#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "schlab/grid.hpp"
#include "schlab/models.hpp"

using namespace schlab;

namespace {

double central_diff(const auto& f, double x, double eps = 1e-6) {
  return (f(x + eps) - f(x - eps)) / (2.0 * eps);
}

}  // namespace

TEST_CASE("drift point values") {
  const Drift zero = Drift::zero();
  for (double x : {-3.0, 0.0, 1.7}) CHECK(zero(x) == 0.0);

  const Drift sine = Drift::scaled_sine(2.5);
  CHECK(sine(kPi / 2.0) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(sine.lipschitz_constant() == doctest::Approx(2.5));

  const Drift rat = Drift::lipschitz_rational(3.0);
  CHECK(rat(0.0) == 0.0);
  CHECK(rat(1.0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(rat.lipschitz_constant() == doctest::Approx(3.0));
}

TEST_CASE("diffusion point values and bounds") {
  const Diffusion s = Diffusion::shifted_sine(1.0, 0.5);
  CHECK(s(0.0) == doctest::Approx(1.0));
  CHECK(s.derivative(0.0) == doctest::Approx(0.5));
  CHECK(s.bound() == doctest::Approx(1.5));
  CHECK(s.lower_bound() == doctest::Approx(0.5));
  CHECK_THROWS_AS(Diffusion::shifted_sine(0.5, 1.0), std::invalid_argument);

  // nondegeneracy over a dense sample
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> dist(-50.0, 50.0);
  double lowest = 1e300;
  for (int i = 0; i < 100000; ++i) lowest = std::min(lowest, std::fabs(s(dist(gen))));
  CHECK(lowest >= s.lower_bound() * (1.0 - 1e-12));
}

TEST_CASE("analytic derivatives match central differences") {
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  const Drift drifts[] = {Drift::scaled_sine(1.2), Drift::lipschitz_rational(-2.0),
                          Drift::cubic(1.0, 0.5, -1.0, 0.25),
                          Drift::cubic_cutoff(1.0, 0.0, -1.0, 0.0, 2.0)};
  for (const auto& d : drifts) {
    for (int i = 0; i < 100; ++i) {
      const double x = dist(gen);
      CHECK(d.derivative(x) ==
            doctest::Approx(central_diff([&](double y) { return d(y); }, x)).epsilon(1e-6));
    }
  }
  const Diffusion s = Diffusion::shifted_sine(1.0, 0.5);
  for (int i = 0; i < 100; ++i) {
    const double x = dist(gen);
    CHECK(s.derivative(x) ==
          doctest::Approx(central_diff([&](double y) { return s(y); }, x)).epsilon(1e-6));
  }
}

TEST_CASE("cutoff plateau, support, and ramp derivative bound") {
  const Cutoff K(2.0);
  for (double x : {-1.99, -0.5, 0.0, 1.0, 1.999}) CHECK(K(x) == 1.0);
  for (double x : {-3.0, 3.0, 4.5, -10.0}) CHECK(K(x) == 0.0);
  CHECK(K(2.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(K(-2.5) == doctest::Approx(K(2.5)).epsilon(1e-15));  // even

  // max |K'| over the band is 15/8 at the midpoint
  double sup = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double x = 2.0 + i / 100000.0;
    sup = std::max(sup, std::fabs(K.derivative(x)));
  }
  CHECK(sup == doctest::Approx(15.0 / 8.0).epsilon(1e-9));
  CHECK(sup <= 2.0);
  CHECK_THROWS_AS(Cutoff(0.5), std::invalid_argument);
}

TEST_CASE("cubic_cutoff is the exact pointwise product and matches the raw cubic inside") {
  const double a0 = 1.0, a1 = 0.0, a2 = -1.0, a3 = 0.0, R = 2.0;
  const Drift f = Drift::cubic_cutoff(a0, a1, a2, a3, R);
  const Drift raw = Drift::cubic(a0, a1, a2, a3);
  const Cutoff K(R);
  for (double x = -4.0; x <= 4.0; x += 0.01) {
    CHECK(f(x) == doctest::Approx(K(x) * raw(x)).epsilon(1e-14));
    if (std::fabs(x) < R) CHECK(f(x) == doctest::Approx(raw(x)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(Drift::cubic_cutoff(1.0, 0.0, 0.0, 0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(Drift::cubic(-1.0, 0.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)Drift::cubic(1.0, 0.0, 0.0, 0.0).lipschitz_constant(), std::logic_error);
}

TEST_CASE("lipschitz_estimate") {
  CHECK(lipschitz_estimate(Drift::zero(), -1.0, 1.0, 100) == 0.0);

  const Drift sine = Drift::scaled_sine(1.8);
  const double est_small = lipschitz_estimate(sine, -10.0, 10.0, 100);
  const double est_large = lipschitz_estimate(sine, -10.0, 10.0, 100000);
  CHECK(est_small <= 1.8 + 1e-12);
  CHECK(est_large <= 1.8 + 1e-12);
  CHECK(est_large >= est_small - 1e-12);
  CHECK(est_large == doctest::Approx(1.8).epsilon(1e-4));

  const Drift f = Drift::cubic_cutoff(1.0, 0.0, -1.0, 0.0, 2.0);
  const double e1 = lipschitz_estimate(f, -4.0, 4.0, 100000);
  const double e2 = lipschitz_estimate(f, -4.0, 4.0, 200000);
  CHECK(std::isfinite(e1));
  CHECK(e1 == doctest::Approx(e2).epsilon(0.005));  // stable to ~2 digits

  CHECK_THROWS_AS(lipschitz_estimate(sine, 1.0, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(lipschitz_estimate(sine, 0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("declared Lipschitz constants dominate the sampled slopes") {
  const Drift lipschitz_family[] = {Drift::zero(), Drift::scaled_sine(1.0),
                                    Drift::lipschitz_rational(2.5),
                                    Drift::cubic_cutoff(1.0, 0.0, -1.0, 0.0, 2.0)};
  for (const auto& d : lipschitz_family) {
    REQUIRE(d.globally_lipschitz());
    const double est = lipschitz_estimate(d, -10.0, 10.0, 50000);
    CHECK(est <= d.lipschitz_constant() * 1.01 + 1e-12);
  }
  CHECK_FALSE(Drift::cubic(1.0, 0.0, 0.0, 0.0).globally_lipschitz());
}

TEST_CASE("initial data compatibility at the boundary") {
  const InitialData u0 = InitialData::sine_combo({{1, 1.0}, {3, -0.4}});
  CHECK(std::fabs(u0(0.0)) <= 1e-12);
  CHECK(std::fabs(u0(kPi)) <= 1e-12);
  CHECK(std::fabs(u0.second_derivative(0.0)) <= 1e-12);
  CHECK(std::fabs(u0.second_derivative(kPi)) <= 1e-12);

  const InitialData m2 = InitialData::sine_mode(2, 3.0);
  CHECK(m2(kPi / 4.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK_THROWS_AS(InitialData::sine_mode(0, 1.0), std::invalid_argument);
}
