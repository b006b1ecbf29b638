#pragma once

#include <Eigen/Dense>

#include "pdpp/rng.hpp"

namespace pdpp {

// Axis-aligned hyperrectangle [lower_1,upper_1] x ... x [lower_d,upper_d]
// together with the affine map T(x) = A x + b that carries the centered unit
// cube [-1/2,1/2]^d onto it: A = diag(upper - lower), b = (upper + lower)/2.
class Domain {
 public:
  Domain(Eigen::VectorXd lower, Eigen::VectorXd upper);

  int dim() const { return static_cast<int>(lower_.size()); }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  const Eigen::VectorXd& side() const { return side_; }      // diagonal of A
  const Eigen::VectorXd& center() const { return center_; }  // b
  double volume() const { return volume_; }                  // |det A|

  // A^{-1}(x - b); lands in [-1/2,1/2]^d when x is inside the domain.
  Eigen::VectorXd to_unit(const Eigen::VectorXd& x) const {
    return (x - center_).cwiseQuotient(side_);
  }
  Eigen::VectorXd from_unit(const Eigen::VectorXd& t) const {
    return center_ + t.cwiseProduct(side_);
  }

  bool contains(const Eigen::VectorXd& x) const;

  // Coordinates closer than rel_tol of the side length in every dimension
  // count as the same point.
  bool nearly_equal(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                    double rel_tol = 1e-12) const;

  Eigen::VectorXd sample_uniform(RandomStream& rng) const;

 private:
  Eigen::VectorXd lower_, upper_, side_, center_;
  double volume_;
};

}  // namespace pdpp
