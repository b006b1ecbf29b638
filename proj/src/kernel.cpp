#include "pdpp/kernel.hpp"

#include <cmath>

#include "pdpp/errors.hpp"

namespace pdpp {

CholeskyPsd cholesky_psd(const Eigen::MatrixXd& sym, double rel_tol) {
  CholeskyPsd out;
  const int p = static_cast<int>(sym.rows());
  if (p == 0) {
    out.positive = true;
    out.lower.resize(0, 0);
    return out;
  }
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(p, p);
  double log_det = 0.0;
  for (int i = 0; i < p; ++i) {
    double pivot = sym(i, i) - L.row(i).head(i).squaredNorm();
    if (!(pivot > rel_tol * std::abs(sym(i, i))) || !std::isfinite(pivot)) {
      return out;  // positive stays false
    }
    double root = std::sqrt(pivot);
    L(i, i) = root;
    log_det += 2.0 * std::log(root);
    for (int r = i + 1; r < p; ++r) {
      double v = sym(r, i) - L.row(r).head(i).dot(L.row(i).head(i));
      L(r, i) = v / root;
    }
  }
  out.lower = std::move(L);
  out.positive = true;
  out.log_det = log_det;
  return out;
}

FourierProjectionKernel::FourierProjectionKernel(Domain domain, int ell)
    : domain_(std::move(domain)), ell_(ell) {
  if (ell_ < 0) throw ConfigError("kernel: ell must be >= 0");
  rank_ = 1;
  for (int e = 0; e < domain_.dim(); ++e) {
    rank_ *= 2LL * ell_ + 1LL;
    if (rank_ > 10'000'000LL) throw ConfigError("kernel: rank (2 ell + 1)^d too large");
  }
  diag_ = static_cast<double>(rank_) / domain_.volume();
}

double FourierProjectionKernel::eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  if (!domain_.contains(x) || !domain_.contains(y)) {
    throw ConfigError("eval_kernel: point outside the domain");
  }
  // Per-coordinate cosine sum 1 + 2 sum_{j=1..ell} cos(2 pi j t); the cosines
  // at multiples of the base angle come from the Chebyshev recurrence.
  double prod = 1.0;
  for (int e = 0; e < domain_.dim(); ++e) {
    double t = (x[e] - y[e]) / domain_.side()[e];
    double c1 = std::cos(2.0 * M_PI * t);
    double sum = 1.0;
    double prev = 1.0, cur = c1;
    for (int j = 1; j <= ell_; ++j) {
      sum += 2.0 * cur;
      double nxt = 2.0 * c1 * cur - prev;
      prev = cur;
      cur = nxt;
    }
    prod *= sum;
  }
  return prod / domain_.volume();
}

GramResult gram_matrix(const FourierProjectionKernel& kernel, const Eigen::MatrixXd& points) {
  const int k = static_cast<int>(points.rows());
  if (k > 0 && points.cols() != kernel.dim()) {
    throw ConfigError("gram_matrix: point dimension does not match the kernel");
  }
  GramResult out;
  out.gram.resize(k, k);
  for (int i = 0; i < k; ++i) {
    out.gram(i, i) = kernel.diag_value();
    for (int j = i + 1; j < k; ++j) {
      double v = kernel.eval(points.row(i), points.row(j));
      out.gram(i, j) = v;
      out.gram(j, i) = v;
      if (kernel.domain().nearly_equal(points.row(i), points.row(j))) {
        out.duplicate_points = true;
      }
    }
  }
  return out;
}

std::optional<double> log_det_gram(const Eigen::MatrixXd& gram) {
  CholeskyPsd chol = cholesky_psd(gram);
  if (!chol.positive) return std::nullopt;
  return chol.log_det;
}

std::optional<double> log_det_gram(const FourierProjectionKernel& kernel,
                                   const Eigen::MatrixXd& points) {
  return log_det_gram(gram_matrix(kernel, points).gram);
}

PalmKernel::PalmKernel(FourierProjectionKernel base, Eigen::MatrixXd conditioning)
    : base_(std::move(base)), conditioning_(std::move(conditioning)) {
  if (conditioning_.rows() > base_.rank()) {
    throw ConfigError("palm: cannot condition on more points than the kernel rank");
  }
  if (conditioning_.rows() > 0 && conditioning_.cols() != base_.dim()) {
    throw ConfigError("palm: conditioning point dimension does not match the kernel");
  }
  GramResult gram = gram_matrix(base_, conditioning_);
  CholeskyPsd chol = cholesky_psd(gram.gram);
  if (!chol.positive) {
    throw NumericalError("palm: conditioning Gram matrix is numerically singular");
  }
  chol_lower_ = std::move(chol.lower);
}

Eigen::VectorXd PalmKernel::cross_solved(const Eigen::VectorXd& x) const {
  const int k = conditioned_count();
  Eigen::VectorXd kx(k);
  for (int i = 0; i < k; ++i) kx[i] = base_.eval(x, conditioning_.row(i));
  chol_lower_.triangularView<Eigen::Lower>().solveInPlace(kx);
  return kx;
}

double PalmKernel::eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  if (conditioned_count() == 0) return base_.eval(x, y);
  return base_.eval(x, y) - cross_solved(x).dot(cross_solved(y));
}

double PalmKernel::diag(const Eigen::VectorXd& x) const {
  if (conditioned_count() == 0) return base_.diag_value();
  return base_.diag_value() - cross_solved(x).squaredNorm();
}

Eigen::VectorXd PalmKernel::diag_many(const Eigen::MatrixXd& points) const {
  const int p = static_cast<int>(points.rows());
  const int k = conditioned_count();
  if (k == 0) return Eigen::VectorXd::Constant(p, base_.diag_value());
  Eigen::MatrixXd cross(k, p);
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < k; ++i) cross(i, j) = base_.eval(points.row(j), conditioning_.row(i));
  }
  chol_lower_.triangularView<Eigen::Lower>().solveInPlace(cross);
  return (base_.diag_value() - cross.colwise().squaredNorm().array()).matrix();
}

PalmKernel make_palm(const FourierProjectionKernel& kernel, const Eigen::MatrixXd& conditioning) {
  return PalmKernel(kernel, conditioning);
}

double pair_correlation(const FourierProjectionKernel& kernel, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& y) {
  double dx = kernel.diag_value();
  if (!(dx > 0.0)) return 0.0;
  double v = kernel.eval(x, y);
  return 1.0 - (v * v) / (dx * dx);
}

double global_repulsiveness(const FourierProjectionKernel& kernel, const Eigen::VectorXd& x) {
  const Domain& dom = kernel.domain();
  double diag = kernel.diag_value();
  if (dom.dim() == 1) {
    auto f = [&](double y) {
      Eigen::VectorXd p(1);
      p[0] = y;
      double v = kernel.eval(x, p);
      return v * v;
    };
    double integral = integrate_1d(f, dom.lower()[0], dom.upper()[0], 1e-8);
    return integral / diag;
  }
  if (dom.dim() == 2) {
    auto f = [&](const Eigen::VectorXd& y) {
      double v = kernel.eval(x, y);
      return v * v;
    };
    return integrate_tensor(f, dom, 64) / diag;
  }
  throw ConfigError("global_repulsiveness: grid quadrature covers d <= 2; use the MC variant");
}

IntegralEstimate global_repulsiveness_mc(const FourierProjectionKernel& kernel,
                                         const Eigen::VectorXd& x, int n, RandomStream& rng) {
  auto f = [&](const Eigen::VectorXd& y) {
    double v = kernel.eval(x, y);
    return v * v;
  };
  IntegralEstimate est = integrate_mc(f, kernel.domain(), n, rng);
  double diag = kernel.diag_value();
  return {est.value / diag, est.standard_error / diag};
}

}  // namespace pdpp
