#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "schlab/grid.hpp"

namespace schlab::testing {

inline Field random_field(int n, unsigned seed, double scale = 1.0) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  Field f{Mesh(n)};
  for (auto& x : f.v) x = dist(gen);
  return f;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

// Two-sample Kolmogorov-Smirnov p-value (asymptotic Q_KS with the usual
// small-sample effective-size correction).
inline double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t na = a.size(), nb = b.size();
  double d = 0.0;
  std::size_t ia = 0, ib = 0;
  while (ia < na && ib < nb) {
    const double xa = a[ia], xb = b[ib];
    if (xa <= xb) ++ia;
    if (xb <= xa) ++ib;
    const double fa = static_cast<double>(ia) / na;
    const double fb = static_cast<double>(ib) / nb;
    d = std::max(d, std::fabs(fa - fb));
  }
  const double ne = std::sqrt(static_cast<double>(na) * nb / (na + nb));
  const double lambda = (ne + 0.12 + 0.11 / ne) * d;
  double p = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    p += term;
    sign = -sign;
    if (std::fabs(term) < 1e-12) break;
  }
  return std::clamp(2.0 * p, 0.0, 1.0);
}

}  // namespace schlab::testing
