#include "schlab/models.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace schlab {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Cutoff::Cutoff(double R) : R_(R) {
  if (!(R >= 1.0)) throw std::invalid_argument("Cutoff: R must be >= 1");
}

double Cutoff::operator()(double x) const {
  const double a = std::fabs(x);
  if (a < R_) return 1.0;
  if (a >= R_ + 1.0) return 0.0;
  const double t = a - R_;
  const double s = ((6.0 * t - 15.0) * t + 10.0) * t * t * t;
  return 1.0 - s;
}

double Cutoff::derivative(double x) const {
  const double a = std::fabs(x);
  if (a < R_ || a >= R_ + 1.0) return 0.0;
  const double t = a - R_;
  const double sp = ((30.0 * t - 60.0) * t + 30.0) * t * t;
  return (x >= 0.0) ? -sp : sp;
}

Drift Drift::zero() { return Drift(Kind::zero, {}, 0.0); }

Drift Drift::scaled_sine(double a) { return Drift(Kind::scaled_sine, {a}, std::fabs(a)); }

Drift Drift::lipschitz_rational(double a) {
  // f'(x) = a (1 - x^2) / (1 + x^2)^2 peaks at x = 0 with value a.
  return Drift(Kind::lipschitz_rational, {a}, std::fabs(a));
}

Drift Drift::cubic(double a0, double a1, double a2, double a3) {
  if (!(a0 > 0.0)) throw std::invalid_argument("Drift::cubic: a0 must be > 0");
  return Drift(Kind::cubic, {a0, a1, a2, a3}, 0.0);
}

Drift Drift::cubic_cutoff(double a0, double a1, double a2, double a3, double R) {
  if (!(a0 > 0.0)) throw std::invalid_argument("Drift::cubic_cutoff: a0 must be > 0");
  if (!(R >= 1.0)) throw std::invalid_argument("Drift::cubic_cutoff: R must be >= 1");
  Drift d(Kind::cubic_cutoff, {a0, a1, a2, a3, R}, 0.0);
  // The composite is smooth and vanishes outside [-(R+1), R+1], so its
  // Lipschitz constant is sup |f'| over the support; estimate by dense scan.
  const double lo = -(R + 1.0), hi = R + 1.0;
  const int samples = 200000;
  double sup = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double x = lo + (hi - lo) * i / samples;
    sup = std::max(sup, std::fabs(d.derivative(x)));
  }
  d.lipschitz_ = sup * (1.0 + 1e-6);
  return d;
}

double Drift::raw_cubic(double x) const {
  return ((p_[0] * x + p_[1]) * x + p_[2]) * x + p_[3];
}

double Drift::raw_cubic_prime(double x) const {
  return (3.0 * p_[0] * x + 2.0 * p_[1]) * x + p_[2];
}

double Drift::operator()(double x) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::scaled_sine:
      return p_[0] * std::sin(x);
    case Kind::lipschitz_rational:
      return p_[0] * x / (1.0 + x * x);
    case Kind::cubic:
      return raw_cubic(x);
    case Kind::cubic_cutoff:
      return Cutoff(p_[4])(x) * raw_cubic(x);
  }
  return 0.0;
}

double Drift::derivative(double x) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::scaled_sine:
      return p_[0] * std::cos(x);
    case Kind::lipschitz_rational: {
      const double d = 1.0 + x * x;
      return p_[0] * (1.0 - x * x) / (d * d);
    }
    case Kind::cubic:
      return raw_cubic_prime(x);
    case Kind::cubic_cutoff: {
      const Cutoff K(p_[4]);
      return K.derivative(x) * raw_cubic(x) + K(x) * raw_cubic_prime(x);
    }
  }
  return 0.0;
}

double Drift::lipschitz_constant() const {
  if (!globally_lipschitz())
    throw std::logic_error("Drift::lipschitz_constant: untruncated cubic has none");
  return lipschitz_;
}

std::string Drift::describe() const {
  switch (kind_) {
    case Kind::zero:
      return "zero";
    case Kind::scaled_sine:
      return "sin " + fmt(p_[0]);
    case Kind::lipschitz_rational:
      return "rational " + fmt(p_[0]);
    case Kind::cubic:
      return "cubic " + fmt(p_[0]) + " " + fmt(p_[1]) + " " + fmt(p_[2]) + " " + fmt(p_[3]);
    case Kind::cubic_cutoff:
      return "cubic_cutoff " + fmt(p_[0]) + " " + fmt(p_[1]) + " " + fmt(p_[2]) + " " +
             fmt(p_[3]) + " " + fmt(p_[4]);
  }
  return "zero";
}

Diffusion Diffusion::constant(double c) { return Diffusion(Kind::constant, {c}); }

Diffusion Diffusion::shifted_sine(double b, double a) {
  if (!(std::fabs(a) < b))
    throw std::invalid_argument("Diffusion::shifted_sine: requires |a| < b");
  return Diffusion(Kind::shifted_sine, {b, a});
}

double Diffusion::operator()(double x) const {
  return kind_ == Kind::constant ? p_[0] : p_[0] + p_[1] * std::sin(x);
}

double Diffusion::derivative(double x) const {
  return kind_ == Kind::constant ? 0.0 : p_[1] * std::cos(x);
}

bool Diffusion::is_zero() const { return kind_ == Kind::constant && p_[0] == 0.0; }

double Diffusion::bound() const {
  return kind_ == Kind::constant ? std::fabs(p_[0]) : p_[0] + std::fabs(p_[1]);
}

double Diffusion::lower_bound() const {
  return kind_ == Kind::constant ? std::fabs(p_[0]) : p_[0] - std::fabs(p_[1]);
}

double Diffusion::lipschitz_constant() const {
  return kind_ == Kind::constant ? 0.0 : std::fabs(p_[1]);
}

std::string Diffusion::describe() const {
  if (kind_ == Kind::constant) return "constant " + fmt(p_[0]);
  return "shifted_sine " + fmt(p_[0]) + " " + fmt(p_[1]);
}

InitialData InitialData::zero() { return InitialData({}); }

InitialData InitialData::sine_mode(int j, double a) {
  if (j < 1) throw std::invalid_argument("InitialData::sine_mode: j must be >= 1");
  return InitialData({{j, a}});
}

InitialData InitialData::sine_combo(std::vector<std::pair<int, double>> modes) {
  for (const auto& [j, a] : modes) {
    (void)a;
    if (j < 1) throw std::invalid_argument("InitialData::sine_combo: modes must be >= 1");
  }
  return InitialData(std::move(modes));
}

double InitialData::operator()(double x) const {
  double acc = 0.0;
  for (const auto& [j, a] : modes_) acc += a * std::sin(j * x);
  return acc;
}

double InitialData::second_derivative(double x) const {
  double acc = 0.0;
  for (const auto& [j, a] : modes_) acc -= a * static_cast<double>(j) * j * std::sin(j * x);
  return acc;
}

std::string InitialData::describe() const {
  if (modes_.empty()) return "zero";
  if (modes_.size() == 1) return "sine " + std::to_string(modes_[0].first) + " " + fmt(modes_[0].second);
  std::string out = "combo";
  for (const auto& [j, a] : modes_) out += " " + std::to_string(j) + " " + fmt(a);
  return out;
}

double lipschitz_estimate(const Drift& d, double lo, double hi, int samples) {
  if (!(lo < hi)) throw std::invalid_argument("lipschitz_estimate: requires lo < hi");
  if (samples < 2) throw std::invalid_argument("lipschitz_estimate: requires samples >= 2");
  const double dx = (hi - lo) / (samples - 1);
  double best = 0.0;
  double prev = d(lo);
  for (int i = 1; i < samples; ++i) {
    const double cur = d(lo + i * dx);
    best = std::max(best, std::fabs(cur - prev) / dx);
    prev = cur;
  }
  return best;
}

}  // namespace schlab
