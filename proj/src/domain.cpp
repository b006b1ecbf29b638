#include "pdpp/domain.hpp"

#include <cmath>

#include "pdpp/errors.hpp"

namespace pdpp {

Domain::Domain(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() == 0 || lower_.size() != upper_.size()) {
    throw ConfigError("domain: lower and upper must be non-empty and of equal length");
  }
  for (int e = 0; e < lower_.size(); ++e) {
    if (!std::isfinite(lower_[e]) || !std::isfinite(upper_[e]) || !(lower_[e] < upper_[e])) {
      throw ConfigError("domain: requires finite lower < upper in every coordinate");
    }
  }
  side_ = upper_ - lower_;
  center_ = 0.5 * (upper_ + lower_);
  volume_ = side_.prod();
}

bool Domain::contains(const Eigen::VectorXd& x) const {
  for (int e = 0; e < lower_.size(); ++e) {
    if (x[e] < lower_[e] || x[e] > upper_[e]) return false;
  }
  return true;
}

bool Domain::nearly_equal(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          double rel_tol) const {
  for (int e = 0; e < lower_.size(); ++e) {
    if (std::abs(x[e] - y[e]) > rel_tol * side_[e]) return false;
  }
  return true;
}

Eigen::VectorXd Domain::sample_uniform(RandomStream& rng) const {
  Eigen::VectorXd x(dim());
  for (int e = 0; e < dim(); ++e) x[e] = rng.uniform(lower_[e], upper_[e]);
  return x;
}

}  // namespace pdpp
