#pragma once

#include "pdpp/rng.hpp"

namespace pdpp {

// Gamma jump family Ga(a_s, 1): Laplace transform psi, exponentially tilted
// moments kappa, and the auxiliary-variable u draws used by every sampler.
// The closed forms:
//   psi(u)      = (1+u)^{-a_s}
//   kappa(u, n) = Gamma(n + a_s) / (Gamma(a_s) (1+u)^{n + a_s})
// Ratios are always taken through the log identities below; dividing two
// kappa values overflows already for moderate n.
class GammaJumpModel {
 public:
  explicit GammaJumpModel(double a_s);

  double shape() const { return a_s_; }

  double psi(double u) const;
  double log_psi(double u) const;
  double kappa(double u, int n) const;
  double log_kappa(double u, int n) const;

  // log kappa(u, n+1) - log kappa(u, n) = log(n + a_s) - log(1 + u).
  double log_kappa_ratio(double u, int n) const;
  // log kappa(u, 1) - log psi(u) = log(a_s) - log(1 + u): the new-pair rate.
  double log_new_pair_rate(double u) const;

  // u | jumps ~ Ga(n, sum of all m jumps).
  double sample_u_conditional(int n, double total_jump, RandomStream& rng) const;
  // u with density ~ u^{n-1} (1+u)^{-(a_s m + n)}, drawn exactly through
  // v = u/(1+u) ~ Beta(n, a_s m).
  double sample_u_marginal(int n, int m, RandomStream& rng) const;

  // Jump of a component with n_h allocated observations: Ga(n_h + a_s, 1+u).
  double sample_active_jump(int n_h, double u, RandomStream& rng) const;
  // Jump of an unoccupied component: the tilted prior Ga(a_s, 1+u).
  double sample_tilted_jump(double u, RandomStream& rng) const;

 private:
  double a_s_;
};

}  // namespace pdpp
