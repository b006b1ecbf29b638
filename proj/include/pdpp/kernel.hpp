#pragma once

#include <Eigen/Dense>
#include <optional>

#include "pdpp/domain.hpp"
#include "pdpp/quadrature.hpp"

namespace pdpp {

// Symmetric positive semidefinite Cholesky with a jitter-free singularity
// flag: a pivot at or below rel_tol times its diagonal entry marks the matrix
// as not positive definite and no factor is returned.
struct CholeskyPsd {
  Eigen::MatrixXd lower;
  bool positive = false;
  double log_det = 0.0;
};
CholeskyPsd cholesky_psd(const Eigen::MatrixXd& sym, double rel_tol = 1e-11);

// Projection kernel with Fourier cosine structure on a rectangular domain:
//   K(x,y) = (1/|det A|) * sum over integer vectors j in {-ell..ell}^d of
//            cos(2 pi j . A^{-1}(x-y)),
// which factorizes over coordinates into one cosine sum per dimension.
// The rank is m = (2 ell + 1)^d and K(x,x) = m / volume identically.
class FourierProjectionKernel {
 public:
  FourierProjectionKernel(Domain domain, int ell);

  const Domain& domain() const { return domain_; }
  int ell() const { return ell_; }
  int dim() const { return domain_.dim(); }
  long long rank() const { return rank_; }  // number of points of any sample

  // Both points must lie in the domain.
  double eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  double diag_value() const { return diag_; }  // = rank / volume, any x

 private:
  Domain domain_;
  int ell_;
  long long rank_;
  double diag_;
};

struct GramResult {
  Eigen::MatrixXd gram;
  // Set when two rows coincide within the domain's distinctness tolerance;
  // the matrix itself is still returned (its determinant is legitimately 0).
  bool duplicate_points = false;
};
// points: one row per point.
GramResult gram_matrix(const FourierProjectionKernel& kernel, const Eigen::MatrixXd& points);

// Log-determinant of a kernel Gram matrix; empty when the matrix is not
// numerically positive definite.
std::optional<double> log_det_gram(const Eigen::MatrixXd& gram);
std::optional<double> log_det_gram(const FourierProjectionKernel& kernel,
                                   const Eigen::MatrixXd& points);

// Reduced Palm kernel: the base kernel conditioned on a realized point set,
//   K!(x,y) = K(x,y) - k_s(x)^T K_ss^{-1} k_s(y),
// a projection kernel of rank m-k whose diagonal vanishes at each
// conditioning point.
class PalmKernel {
 public:
  PalmKernel(FourierProjectionKernel base, Eigen::MatrixXd conditioning);

  const FourierProjectionKernel& base() const { return base_; }
  const Eigen::MatrixXd& conditioning() const { return conditioning_; }
  int conditioned_count() const { return static_cast<int>(conditioning_.rows()); }
  long long residual_rank() const { return base_.rank() - conditioned_count(); }

  double eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  // diag(x) = eval(x,x), kept separate: it is the sampling intensity and is
  // evaluated in bulk. Roundoff can leave values epsilon-negative near
  // conditioning points; callers clamp when using them as probabilities.
  double diag(const Eigen::VectorXd& x) const;
  Eigen::VectorXd diag_many(const Eigen::MatrixXd& points) const;

 private:
  Eigen::VectorXd cross_solved(const Eigen::VectorXd& x) const;

  FourierProjectionKernel base_;
  Eigen::MatrixXd conditioning_;
  Eigen::MatrixXd chol_lower_;  // factor of the conditioning Gram matrix
};

PalmKernel make_palm(const FourierProjectionKernel& kernel, const Eigen::MatrixXd& conditioning);

// g(x,y) = 1 - K(x,y)^2 / (K(x,x) K(y,y)); returns 0 when either diagonal
// vanishes (degenerate by convention).
double pair_correlation(const FourierProjectionKernel& kernel, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& y);

// p_x = (1/K(x,x)) * integral over the domain of K(x,y)^2 dy, evaluated by
// adaptive quadrature (d=1) or a 64-point-per-axis tensor rule (d=2).
// Identically 1 for a projection kernel. For d >= 3 use the Monte Carlo
// variant, which reports its standard error.
double global_repulsiveness(const FourierProjectionKernel& kernel, const Eigen::VectorXd& x);
IntegralEstimate global_repulsiveness_mc(const FourierProjectionKernel& kernel,
                                         const Eigen::VectorXd& x, int n, RandomStream& rng);

}  // namespace pdpp
