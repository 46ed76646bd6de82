#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace schlab {

// Even smooth cutoff: 1 on |x| < R, 0 on |x| >= R+1, quintic smoothstep
// ramp 6t^5 - 15t^4 + 10t^3 across the transition band. |K_R| <= 1 and
// |K_R'| <= 15/8 < 2.
class Cutoff {
 public:
  explicit Cutoff(double R);
  double R() const { return R_; }
  double operator()(double x) const;
  double derivative(double x) const;
  bool operator==(const Cutoff&) const = default;

 private:
  double R_;
};

class Drift {
 public:
  enum class Kind { zero, scaled_sine, lipschitz_rational, cubic, cubic_cutoff };

  static Drift zero();
  static Drift scaled_sine(double a);         // a sin(x)
  static Drift lipschitz_rational(double a);  // a x / (1 + x^2)
  static Drift cubic(double a0, double a1, double a2, double a3);  // a0 > 0
  static Drift cubic_cutoff(double a0, double a1, double a2, double a3, double R);

  Kind kind() const { return kind_; }
  double operator()(double x) const;
  double derivative(double x) const;
  bool is_zero() const { return kind_ == Kind::zero; }

  // The untruncated cubic grows without bound and carries no constant.
  bool globally_lipschitz() const { return kind_ != Kind::cubic; }
  double lipschitz_constant() const;

  std::span<const double> params() const { return p_; }
  std::string describe() const;  // config-file syntax
  bool operator==(const Drift&) const = default;

 private:
  Drift(Kind kind, std::vector<double> p, double lip)
      : kind_(kind), p_(std::move(p)), lipschitz_(lip) {}
  double raw_cubic(double x) const;
  double raw_cubic_prime(double x) const;

  Kind kind_;
  std::vector<double> p_;
  double lipschitz_ = 0.0;
};

class Diffusion {
 public:
  enum class Kind { constant, shifted_sine };

  static Diffusion constant(double c);
  static Diffusion shifted_sine(double b, double a);  // b + a sin(x), |a| < b

  Kind kind() const { return kind_; }
  double operator()(double x) const;
  double derivative(double x) const;
  bool is_zero() const;

  double bound() const;        // sup |sigma|
  double lower_bound() const;  // sigma_0 = inf |sigma|
  double lipschitz_constant() const;

  std::span<const double> params() const { return p_; }
  std::string describe() const;
  bool operator==(const Diffusion&) const = default;

 private:
  Diffusion(Kind kind, std::vector<double> p) : kind_(kind), p_(std::move(p)) {}
  Kind kind_;
  std::vector<double> p_;
};

// Initial data built from sine modes: every sin(jx) combination satisfies
// u0(0) = u0(pi) = 0 and u0''(0) = u0''(pi) = 0.
class InitialData {
 public:
  static InitialData zero();
  static InitialData sine_mode(int j, double a);
  static InitialData sine_combo(std::vector<std::pair<int, double>> modes);

  double operator()(double x) const;
  double second_derivative(double x) const;
  const std::vector<std::pair<int, double>>& modes() const { return modes_; }
  std::string describe() const;
  bool operator==(const InitialData&) const = default;

 private:
  explicit InitialData(std::vector<std::pair<int, double>> modes) : modes_(std::move(modes)) {}
  std::vector<std::pair<int, double>> modes_;
};

// Adjacent-point slope estimator max |f(x_{i+1}) - f(x_i)| / dx over a
// uniform sampling; a lower bound of the true Lipschitz constant.
double lipschitz_estimate(const Drift& d, double lo, double hi, int samples);

}  // namespace schlab
