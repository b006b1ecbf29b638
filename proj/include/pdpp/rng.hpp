#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>

namespace pdpp {

// Deterministic random stream. The engine is std::mt19937_64 (whose output
// sequence is fixed by the standard); every variate transformation is
// implemented here rather than through std::*_distribution so that a seed
// reproduces the same draws on any platform or standard library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0,1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0,1); never returns an exact endpoint, safe under log().
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Gamma(shape, rate): density ~ x^{shape-1} e^{-rate x}, mean shape/rate.
  double gamma(double shape, double rate);

  double beta(double a, double b) {
    double x = gamma(a, 1.0);
    double y = gamma(b, 1.0);
    return x / (x + y);
  }

  double chi_square(double dof) { return gamma(0.5 * dof, 0.5); }

  double exponential(double rate) { return -std::log(uniform_open()) / rate; }

  double student_t(double dof) {
    return normal() / std::sqrt(chi_square(dof) / dof);
  }

  int uniform_int(int n) {  // 0..n-1
    return static_cast<int>(uniform() * n) % n;
  }

 private:
  std::mt19937_64 engine_;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

// Draws an index from unnormalized log-weights (log-sum-exp stabilized).
int sample_categorical_log(RandomStream& rng, const Eigen::VectorXd& log_weights);

// Normalizes log-weights to probabilities summing to one.
Eigen::VectorXd normalize_log_weights(const Eigen::VectorXd& log_weights);

}  // namespace pdpp
