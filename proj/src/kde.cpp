#include "schlab/kde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "schlab/grid.hpp"
#include "schlab/stats.hpp"

namespace schlab {

Kde Kde::fit(std::vector<double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("Kde::fit: need >= 2 samples");
  Kde kde;
  const double sd = std::sqrt(sample_variance(samples));
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t M = sorted.size();
  const double q1 = sorted[M / 4];
  const double q3 = sorted[(3 * M) / 4];
  const double iqr = q3 - q1;
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0))
    throw std::domain_error("Kde::fit: degenerate sample (zero spread)");
  kde.bandwidth_ = 0.9 * spread * std::pow(static_cast<double>(M), -0.2);
  kde.min_ = sorted.front();
  kde.max_ = sorted.back();
  kde.samples_ = std::move(samples);
  return kde;
}

double Kde::density(double x) const {
  const double bw = bandwidth_;
  const double norm = 1.0 / (static_cast<double>(samples_.size()) * bw * std::sqrt(2.0 * kPi));
  double acc = 0.0;
  for (double s : samples_) {
    const double z = (x - s) / bw;
    acc += std::exp(-0.5 * z * z);
  }
  return norm * acc;
}

double kde_l1_distance(const Kde& a, const Kde& b, int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("kde_l1_distance: need >= 2 grid points");
  const double pad_a = 4.0 * a.bandwidth();
  const double pad_b = 4.0 * b.bandwidth();
  const double lo = std::min(a.min_sample() - pad_a, b.min_sample() - pad_b);
  const double hi = std::max(a.max_sample() + pad_a, b.max_sample() + pad_b);
  const double dx = (hi - lo) / (grid_points - 1);
  double acc = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double x = lo + i * dx;
    const double d = std::fabs(a.density(x) - b.density(x));
    acc += (i == 0 || i == grid_points - 1) ? 0.5 * d : d;
  }
  return acc * dx;
}

}  // namespace schlab
