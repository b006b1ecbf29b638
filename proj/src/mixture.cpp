#include "pdpp/mixture.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "pdpp/errors.hpp"

namespace pdpp {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kLogPi = 1.1447298858494001741434273513531;
}  // namespace

Dataset make_dataset(Eigen::MatrixXd y) {
  if (y.rows() < 1 || y.cols() < 1) {
    throw DataError("dataset: need at least one observation and one column");
  }
  if (!y.allFinite()) {
    throw DataError("dataset: observations contain non-finite entries");
  }
  return Dataset{std::move(y)};
}

Eigen::VectorXi MixtureState::counts() const {
  const int m = components.size();
  Eigen::VectorXi n_h = Eigen::VectorXi::Zero(m);
  for (int i = 0; i < allocations.size(); ++i) n_h(allocations(i))++;
  return n_h;
}

std::vector<int> MixtureState::active_ids() const {
  const Eigen::VectorXi n_h = counts();
  std::vector<int> ids;
  for (int h = 0; h < n_h.size(); ++h) {
    if (n_h(h) > 0) ids.push_back(h);
  }
  return ids;
}

int MixtureState::active_count() const {
  return static_cast<int>(active_ids().size());
}

void Hyperparameters::validate(int d) const {
  std::ostringstream problems;
  auto complain = [&problems](const std::string& what) {
    if (problems.tellp() > 0) problems << "; ";
    problems << what;
  };
  if (!(a_s > 0.0) || !std::isfinite(a_s)) complain("a_s must be positive");
  if (ell < 0) complain("ell must be non-negative");
  if (!(tau > d - 1.0)) {
    complain("tau must exceed d - 1 = " + std::to_string(d - 1));
  }
  if (omega.rows() != d || omega.cols() != d) {
    complain("omega must be " + std::to_string(d) + "x" + std::to_string(d));
  } else if (!omega.allFinite() || !omega.isApprox(omega.transpose(), 1e-12) ||
             !cholesky_psd(omega).positive) {
    complain("omega must be symmetric positive definite");
  }
  if (!(domain_expansion > 0.0)) complain("domain_expansion must be positive");
  if (!(proposal_local_weight > 0.0 && proposal_local_weight < 1.0)) {
    complain("proposal_local_weight must lie in (0,1)");
  }
  if (!(proposal_local_var > 0.0)) complain("proposal_local_var must be positive");
  if (neal8_T < 1) complain("neal8_T must be at least 1");
  if (problems.tellp() > 0) {
    throw ConfigError("hyperparameters: " + problems.str());
  }
}

Hyperparameters default_hyperparameters(int d) {
  Hyperparameters hyper;
  if (d == 1) {
    hyper.ell = 5;
    hyper.tau = 2.0;
    hyper.omega = Eigen::MatrixXd::Constant(1, 1, 6.0);
    hyper.domain_expansion = 3.0;
  } else {
    hyper.ell = 1;
    hyper.tau = d + 2.0;
    hyper.omega = Eigen::MatrixXd::Identity(d, d);
    hyper.domain_expansion = 2.5;
  }
  return hyper;
}

Domain build_domain(const Dataset& dataset, double expansion) {
  if (!(expansion > 0.0)) {
    throw ConfigError("build_domain: expansion must be positive");
  }
  const int d = dataset.d();
  Eigen::VectorXd lower(d), upper(d);
  for (int e = 0; e < d; ++e) {
    const double mean = dataset.y.col(e).mean();
    const double zeta = (dataset.y.col(e).array() - mean).abs().maxCoeff();
    if (!(zeta > 0.0)) {
      throw DataError("build_domain: coordinate " + std::to_string(e + 1) +
                      " is constant; jitter or drop it before fitting");
    }
    lower(e) = mean - expansion * zeta;
    upper(e) = mean + expansion * zeta;
  }
  return Domain(lower, upper);
}

MvnDensity::MvnDensity(Eigen::VectorXd mean, const Eigen::MatrixXd& cov)
    : mean_(std::move(mean)) {
  const CholeskyPsd chol = cholesky_psd(cov);
  if (!chol.positive) {
    throw NumericalError("normal density: covariance is not positive definite");
  }
  chol_lower_ = chol.lower;
  log_norm_ = -0.5 * (mean_.size() * kLog2Pi + chol.log_det);
}

double MvnDensity::log_density(const Eigen::VectorXd& y) const {
  const Eigen::VectorXd w =
      chol_lower_.triangularView<Eigen::Lower>().solve(y - mean_);
  return log_norm_ - 0.5 * w.squaredNorm();
}

double mvn_logpdf(const Eigen::VectorXd& y, const Eigen::VectorXd& mean,
                  const Eigen::MatrixXd& cov) {
  return MvnDensity(mean, cov).log_density(y);
}

Eigen::MatrixXd sample_inverse_wishart(double tau, const Eigen::MatrixXd& omega,
                                       RandomStream& rng) {
  const int d = static_cast<int>(omega.rows());
  if (omega.cols() != d || d < 1) {
    throw ConfigError("inverse Wishart: scale matrix must be square");
  }
  if (!(tau > d - 1.0)) {
    throw ConfigError("inverse Wishart: degrees of freedom must exceed d - 1");
  }
  const CholeskyPsd omega_chol = cholesky_psd(omega);
  if (!omega_chol.positive) {
    throw ConfigError("inverse Wishart: scale matrix is not positive definite");
  }
  // Bartlett factor A of a Wishart(tau, I) draw; then
  // Sigma = L_omega (A A^T)^{-1} L_omega^T is InvWi(tau, omega).
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    a(j, j) = std::sqrt(rng.chi_square(tau - j));
    for (int i = j + 1; i < d; ++i) a(i, j) = rng.normal();
  }
  const Eigen::MatrixXd mt = a.triangularView<Eigen::Lower>().solve(
      omega_chol.lower.transpose().eval());
  Eigen::MatrixXd sigma = mt.transpose() * mt;
  sigma = 0.5 * (sigma + sigma.transpose()).eval();
  return sigma;
}

std::pair<double, Eigen::MatrixXd> posterior_cov_params(
    const Eigen::MatrixXd& cluster_data, const Eigen::VectorXd& location,
    double tau, const Eigen::MatrixXd& omega) {
  Eigen::MatrixXd scale = omega;
  for (Eigen::Index i = 0; i < cluster_data.rows(); ++i) {
    const Eigen::VectorXd r = cluster_data.row(i).transpose() - location;
    scale.noalias() += r * r.transpose();
  }
  return {tau + static_cast<double>(cluster_data.rows()), scale};
}

double location_predictive_logpdf(const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& location, double tau,
                                  const Eigen::MatrixXd& omega) {
  const int d = static_cast<int>(y.size());
  if (!(tau > d - 1.0)) {
    throw ConfigError("predictive density: tau must exceed d - 1");
  }
  const CholeskyPsd chol = cholesky_psd(omega);
  if (!chol.positive) {
    throw ConfigError("predictive density: omega is not positive definite");
  }
  const Eigen::VectorXd w =
      chol.lower.triangularView<Eigen::Lower>().solve(y - location);
  // |Omega + r r^T| = |Omega| (1 + r^T Omega^{-1} r).
  return std::lgamma(0.5 * (1.0 + tau)) - std::lgamma(0.5 * (1.0 + tau - d)) -
         0.5 * d * kLogPi - 0.5 * chol.log_det -
         0.5 * (1.0 + tau) * std::log1p(w.squaredNorm());
}

double complete_log_likelihood(const Dataset& dataset, const MixtureState& state) {
  const int m = state.components.size();
  std::vector<std::unique_ptr<MvnDensity>> densities(m);
  double total = 0.0;
  for (int i = 0; i < dataset.n(); ++i) {
    const int h = state.allocations(i);
    if (!densities[h]) {
      densities[h] = std::make_unique<MvnDensity>(
          state.components.locations.row(h).transpose(),
          state.components.covariances[h]);
    }
    total += densities[h]->log_density(dataset.y.row(i).transpose());
  }
  return total;
}

void validate_state(const MixtureState& state, const Dataset& dataset,
                    const FourierProjectionKernel& kernel) {
  const int m = state.components.size();
  const int n = dataset.n();
  const int d = dataset.d();
  auto fail = [](const std::string& what) {
    throw std::logic_error("mixture state invariant violated: " + what);
  };
  if (state.components.locations.rows() != m ||
      state.components.locations.cols() != d ||
      static_cast<int>(state.components.covariances.size()) != m ||
      state.components.jumps.size() != m) {
    fail("component arrays disagree on m or d");
  }
  if (kernel.rank() != m) fail("component count does not match kernel rank");
  if (state.allocations.size() != n) fail("allocation length is not n");
  for (int i = 0; i < n; ++i) {
    if (state.allocations(i) < 0 || state.allocations(i) >= m) {
      fail("allocation out of range");
    }
  }
  if (state.counts().sum() != n) fail("allocation counts do not sum to n");
  if (!(state.u >= 0.0)) fail("u is negative");
  for (int h = 0; h < m; ++h) {
    if (!(state.components.jumps(h) > 0.0)) fail("non-positive jump");
    if (!cholesky_psd(state.components.covariances[h]).positive) {
      fail("covariance not positive definite");
    }
    if (!kernel.domain().contains(state.components.locations.row(h).transpose())) {
      fail("atom outside the domain");
    }
    for (int g = 0; g < h; ++g) {
      if (kernel.domain().nearly_equal(
              state.components.locations.row(h).transpose(),
              state.components.locations.row(g).transpose())) {
        fail("coincident atoms");
      }
    }
  }
}

SimulatedData simulate_benchmark(const std::string& generator, int n,
                                 RandomStream& rng) {
  if (n < 1) throw ConfigError("simulate: n must be at least 1");
  Eigen::MatrixXd mu;
  if (generator == "t3_1d") {
    mu.resize(3, 1);
    mu << -4.0, 0.0, 4.0;
  } else if (generator == "t3_2d") {
    mu.resize(3, 2);
    mu << -4.0, 4.0, 0.0, 0.0, 4.0, 4.0;
  } else if (generator == "t3_4d") {
    mu.resize(3, 4);
    mu << -4.0, -4.0, 4.0, 4.0, 0.0, 0.0, 0.0, 0.0, 4.0, 4.0, 4.0, 4.0;
  } else {
    throw ConfigError("simulate: unknown generator '" + generator +
                      "' (expected t3_1d, t3_2d, or t3_4d)");
  }
  const int d = static_cast<int>(mu.cols());
  const double dof = 6.0;
  SimulatedData out;
  out.y.resize(n, d);
  out.component.resize(n);
  for (int i = 0; i < n; ++i) {
    const int c = static_cast<int>(rng.uniform_int(3));
    out.component(i) = c;
    const double mix = std::sqrt(dof / rng.chi_square(dof));
    for (int e = 0; e < d; ++e) out.y(i, e) = mu(c, e) + mix * rng.normal();
  }
  return out;
}

}  // namespace pdpp
