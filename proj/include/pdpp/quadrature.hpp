#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>

#include "pdpp/domain.hpp"
#include "pdpp/rng.hpp"

namespace pdpp {

// Gauss-Legendre nodes and weights on [-1,1].
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int order);

// Composite Gauss-Legendre on [a,b]; the panel count is doubled until two
// successive refinements agree to tol (relative to scale, absolute when the
// integral is near zero). Throws NumericalError when max_panels is reached,
// reporting the achieved discrepancy.
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double tol = 1e-10, int order = 16, int max_panels = 4096);

// Non-adaptive tensor-product Gauss-Legendre over a rectangle (d = 1 or 2),
// points_per_dim nodes along each axis.
double integrate_tensor(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Domain& domain, int points_per_dim);

struct IntegralEstimate {
  double value;
  double standard_error;
};

// Plain Monte Carlo over the domain; intended for d >= 3 where grids blow up.
IntegralEstimate integrate_mc(const std::function<double(const Eigen::VectorXd&)>& f,
                              const Domain& domain, int n, RandomStream& rng);

}  // namespace pdpp
