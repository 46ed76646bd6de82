#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "schlab/noise.hpp"
#include "schlab/stats.hpp"

using namespace schlab;

TEST_CASE("same key regenerates identical increments") {
  const auto a = generate_sheet(42, 7, 16, 8, 0.5);
  const auto b = generate_sheet(42, 7, 16, 8, 0.5);
  REQUIRE(a.raw().size() == b.raw().size());
  for (std::size_t i = 0; i < a.raw().size(); ++i) CHECK(a.raw()[i] == b.raw()[i]);

  const auto c = generate_sheet(42, 8, 16, 8, 0.5);
  bool any_different = false;
  for (std::size_t i = 0; i < a.raw().size(); ++i)
    if (a.raw()[i] != c.raw()[i]) any_different = true;
  CHECK(any_different);
}

TEST_CASE("rejects bad arguments") {
  CHECK_THROWS_AS(generate_sheet(0, 0, 0, 8, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(generate_sheet(0, 0, 8, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(generate_sheet(0, 0, 8, 8, 0.0), std::invalid_argument);
}

TEST_CASE("cell moments match N(0, (T/m)(pi/n)) budgets") {
  const int m = 500, n = 200;  // 1e5 cells
  const double T = 0.7;
  const auto sheet = generate_sheet(3, 0, m, n, T);
  const double var_cell = sheet.cell_variance();
  CHECK(var_cell == doctest::Approx((T / m) * (kPi / n)).epsilon(1e-15));

  const double mu = mean(sheet.raw());
  const double sd_cell = std::sqrt(var_cell);
  CHECK(std::fabs(mu) <= 4.0 * sd_cell / std::sqrt(1e5));

  const double var = sample_variance(sheet.raw());
  CHECK(var == doctest::Approx(var_cell).epsilon(0.05));
}

TEST_CASE("coarsening aggregates exactly") {
  const auto sheet = generate_sheet(11, 2, 8, 12, 1.0);

  SUBCASE("factors (1,1) reproduce the object") {
    const auto same = coarsen(sheet, 1, 1);
    for (std::size_t i = 0; i < sheet.raw().size(); ++i)
      CHECK(same.raw()[i] == sheet.raw()[i]);
  }

  SUBCASE("2x2 blocks sum term by term") {
    const auto c = coarsen(sheet, 2, 2);
    REQUIRE(c.m() == 4);
    REQUIRE(c.n() == 6);
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 6; ++k) {
        const double want = sheet.dw(2 * i, 2 * k) + sheet.dw(2 * i, 2 * k + 1) +
                            sheet.dw(2 * i + 1, 2 * k) + sheet.dw(2 * i + 1, 2 * k + 1);
        CHECK(c.dw(i, k) == doctest::Approx(want).epsilon(1e-15));
      }
  }

  SUBCASE("total mass telescopes") {
    const auto c = coarsen(sheet, 4, 3);
    double fine = 0.0, coarse = 0.0;
    for (double x : sheet.raw()) fine += x;
    for (double x : c.raw()) coarse += x;
    CHECK(coarse == doctest::Approx(fine).epsilon(1e-13));
  }

  SUBCASE("coarsening is transitive") {
    const auto two_step = coarsen(coarsen(sheet, 2, 2), 2, 3);
    const auto one_step = coarsen(sheet, 4, 6);
    for (std::size_t i = 0; i < one_step.raw().size(); ++i)
      CHECK(two_step.raw()[i] == doctest::Approx(one_step.raw()[i]).epsilon(1e-15));
  }

  SUBCASE("non-divisible factors are rejected") {
    CHECK_THROWS_AS(coarsen(sheet, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(coarsen(sheet, 1, 5), std::invalid_argument);
  }
}

TEST_CASE("beta scaling") {
  const int m = 100, n = 1000;
  const double T = 0.4;
  const auto sheet = generate_sheet(5, 1, m, n, T);
  const auto beta = to_beta(sheet);

  // dw = 0 -> beta = 0 and the formula scale
  const double scale = std::sqrt(n / kPi);
  for (int i : {0, 3})
    for (int k : {0, 5, n - 1})
      CHECK(beta[static_cast<std::size_t>(i) * n + k] ==
            doctest::Approx(scale * sheet.dw(i, k)).epsilon(1e-15));

  // doubling n doubles the squared factor
  CHECK(std::sqrt(2.0 * n / kPi) == doctest::Approx(std::sqrt(2.0) * scale).epsilon(1e-15));

  const double var = sample_variance(beta);
  CHECK(var == doctest::Approx(T / m).epsilon(0.05));
}

TEST_CASE("independence across sample_index") {
  const int m = 100, n = 100;  // 1e4 cells
  const auto a = generate_sheet(9, 0, m, n, 1.0);
  const auto b = generate_sheet(9, 1, m, n, 1.0);
  const double ma = mean(a.raw());
  const double mb = mean(b.raw());
  double num = 0.0, da = 0.0, db = 0.0;
  for (std::size_t i = 0; i < a.raw().size(); ++i) {
    num += (a.raw()[i] - ma) * (b.raw()[i] - mb);
    da += (a.raw()[i] - ma) * (a.raw()[i] - ma);
    db += (b.raw()[i] - mb) * (b.raw()[i] - mb);
  }
  CHECK(std::fabs(num / std::sqrt(da * db)) <= 0.05);
}

TEST_CASE("coarsened noise matches direct generation in law (KS)") {
  // 1e4 draws of a coarse cell obtained by aggregation vs direct generation.
  const auto fine = generate_sheet(21, 0, 200, 200, 1.0);
  const auto coarse = coarsen(fine, 2, 2);  // 100x100 coarse cells
  const auto direct = generate_sheet(22, 0, 100, 100, 1.0);
  std::vector<double> a(coarse.raw().begin(), coarse.raw().end());
  std::vector<double> b(direct.raw().begin(), direct.raw().end());
  const double p = schlab::testing::ks_two_sample_pvalue(a, b);
  CHECK(p > 0.01);
  CHECK(coarse.cell_variance() == doctest::Approx(direct.cell_variance()).epsilon(1e-12));
}

TEST_CASE("binary dump/load round-trip") {
  const auto sheet = generate_sheet(1234, 5, 6, 10, 0.25);
  std::stringstream buf;
  dump_sheet(sheet, buf);
  const auto loaded = load_sheet(buf);
  CHECK(loaded.m() == sheet.m());
  CHECK(loaded.n() == sheet.n());
  CHECK(loaded.T() == sheet.T());
  CHECK(loaded.seed() == sheet.seed());
  CHECK(loaded.sample_index() == sheet.sample_index());
  for (std::size_t i = 0; i < sheet.raw().size(); ++i)
    CHECK(loaded.raw()[i] == sheet.raw()[i]);

  std::stringstream bad("nope");
  CHECK_THROWS(load_sheet(bad));
}

TEST_CASE("inverse normal CDF agrees with erfc round-trip") {
  for (double p : {1e-10, 1e-4, 0.01, 0.3, 0.5, 0.7, 0.975, 0.9999, 1.0 - 1e-10}) {
    const double z = inverse_normal_cdf(p);
    CHECK(normal_cdf(z) == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK(inverse_normal_cdf(0.5) == 0.0);
  CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), std::invalid_argument);
  CHECK_THROWS_AS(inverse_normal_cdf(1.0), std::invalid_argument);
}
