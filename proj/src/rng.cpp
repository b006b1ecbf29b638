#include "pdpp/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace pdpp {

double RandomStream::normal() {
  // Marsaglia polar method; the spare variate is cached.
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_normal_ = v * f;
  has_cached_normal_ = true;
  return u * f;
}

double RandomStream::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw std::invalid_argument("gamma: shape and rate must be positive");
  }
  if (shape < 1.0) {
    // Boost to shape+1 and scale back (Marsaglia & Tsang boosting step).
    double g = gamma(shape + 1.0, 1.0);
    return g * std::pow(uniform_open(), 1.0 / shape) / rate;
  }
  // Marsaglia & Tsang squeeze method for shape >= 1.
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = uniform_open();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

int sample_categorical_log(RandomStream& rng, const Eigen::VectorXd& log_weights) {
  Eigen::VectorXd p = normalize_log_weights(log_weights);
  double target = rng.uniform();
  double cum = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    cum += p[i];
    if (target < cum) return i;
  }
  return static_cast<int>(p.size()) - 1;
}

Eigen::VectorXd normalize_log_weights(const Eigen::VectorXd& log_weights) {
  if (log_weights.size() == 0) {
    throw std::invalid_argument("normalize_log_weights: empty weight vector");
  }
  double mx = log_weights.maxCoeff();
  if (!std::isfinite(mx)) {
    throw std::invalid_argument("normalize_log_weights: all weights are zero or invalid");
  }
  Eigen::VectorXd p = (log_weights.array() - mx).exp();
  p /= p.sum();
  return p;
}

}  // namespace pdpp
