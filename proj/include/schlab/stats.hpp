#pragma once

#include <span>

namespace schlab {

// Pairwise (cascade) summation; the result depends only on the order of
// the input slots, never on thread scheduling.
double pairwise_sum(std::span<const double> x);

double mean(std::span<const double> x);
double sample_variance(std::span<const double> x);  // unbiased, n-1
double standard_error(std::span<const double> x);   // of the mean

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares y = slope * x + intercept.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

// Inverse of the standard normal CDF (Wichura's AS 241, PPND16 branch),
// accurate to ~1e-15 on (0,1).
double inverse_normal_cdf(double p);

// Standard normal CDF via erfc; used to cross-check the inverse.
double normal_cdf(double z);

}  // namespace schlab
