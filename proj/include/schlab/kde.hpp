#pragma once

#include <vector>

namespace schlab {

// Gaussian-kernel density estimate with Silverman's rule-of-thumb
// bandwidth 0.9 min(sd, IQR/1.34) M^(-1/5).
class Kde {
 public:
  static Kde fit(std::vector<double> samples);

  double bandwidth() const { return bandwidth_; }
  double density(double x) const;
  double min_sample() const { return min_; }
  double max_sample() const { return max_; }

 private:
  std::vector<double> samples_;
  double bandwidth_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
};

// L1 distance between two density estimates by the trapezoid rule on a
// shared evaluation grid covering both supports (bounded by 2).
double kde_l1_distance(const Kde& a, const Kde& b, int grid_points = 512);

}  // namespace schlab
