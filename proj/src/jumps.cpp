#include "pdpp/jumps.hpp"

#include <cmath>

#include "pdpp/errors.hpp"

namespace pdpp {

GammaJumpModel::GammaJumpModel(double a_s) : a_s_(a_s) {
  if (!(a_s > 0.0) || !std::isfinite(a_s)) {
    throw ConfigError("jump model: shape a_s must be positive and finite");
  }
}

double GammaJumpModel::log_psi(double u) const {
  if (!(u >= 0.0)) throw ConfigError("psi: u must be non-negative");
  return -a_s_ * std::log1p(u);
}

double GammaJumpModel::psi(double u) const { return std::exp(log_psi(u)); }

double GammaJumpModel::log_kappa(double u, int n) const {
  if (!(u >= 0.0)) throw ConfigError("kappa: u must be non-negative");
  if (n < 0) throw ConfigError("kappa: n must be non-negative");
  return std::lgamma(n + a_s_) - std::lgamma(a_s_) -
         (n + a_s_) * std::log1p(u);
}

double GammaJumpModel::kappa(double u, int n) const {
  return std::exp(log_kappa(u, n));
}

double GammaJumpModel::log_kappa_ratio(double u, int n) const {
  if (!(u >= 0.0)) throw ConfigError("kappa ratio: u must be non-negative");
  if (n < 0) throw ConfigError("kappa ratio: n must be non-negative");
  return std::log(n + a_s_) - std::log1p(u);
}

double GammaJumpModel::log_new_pair_rate(double u) const {
  if (!(u >= 0.0)) throw ConfigError("new-pair rate: u must be non-negative");
  return std::log(a_s_) - std::log1p(u);
}

double GammaJumpModel::sample_u_conditional(int n, double total_jump,
                                            RandomStream& rng) const {
  if (n <= 0) throw ConfigError("u | jumps: need at least one observation");
  if (!(total_jump > 0.0)) {
    throw ConfigError("u | jumps: total jump mass must be positive");
  }
  return rng.gamma(static_cast<double>(n), total_jump);
}

double GammaJumpModel::sample_u_marginal(int n, int m, RandomStream& rng) const {
  if (n <= 0) throw ConfigError("marginal u: need at least one observation");
  if (m <= 0) throw ConfigError("marginal u: need at least one component");
  const double v = rng.beta(static_cast<double>(n), a_s_ * m);
  return v / (1.0 - v);
}

double GammaJumpModel::sample_active_jump(int n_h, double u,
                                          RandomStream& rng) const {
  if (n_h <= 0) {
    throw ConfigError("active jump: component has no allocated observations");
  }
  if (!(u >= 0.0)) throw ConfigError("active jump: u must be non-negative");
  return rng.gamma(n_h + a_s_, 1.0 + u);
}

double GammaJumpModel::sample_tilted_jump(double u, RandomStream& rng) const {
  if (!(u >= 0.0)) throw ConfigError("tilted jump: u must be non-negative");
  return rng.gamma(a_s_, 1.0 + u);
}

}  // namespace pdpp
