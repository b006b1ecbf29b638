#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "pdpp/domain.hpp"
#include "pdpp/kernel.hpp"
#include "pdpp/rng.hpp"

namespace pdpp {

// Observations in data units, one row per observation.
struct Dataset {
  Eigen::MatrixXd y;

  int n() const { return static_cast<int>(y.rows()); }
  int d() const { return static_cast<int>(y.cols()); }
};

// Validates n >= 1 and finiteness of every entry.
Dataset make_dataset(Eigen::MatrixXd y);

// The full set of m mixture components, occupied or not: locations phi_h in
// the domain, covariances Sigma_h, and unnormalized weights (jumps) s_h.
struct ComponentSet {
  Eigen::MatrixXd locations;                 // m x d
  std::vector<Eigen::MatrixXd> covariances;  // m matrices, each d x d
  Eigen::VectorXd jumps;                     // m, strictly positive

  int size() const { return static_cast<int>(locations.rows()); }
};

// Complete sampler state: components plus allocations (0-based component ids
// internally; serialized 1-based) and the auxiliary variable u. The active
// set is always derived from the allocations, never stored.
struct MixtureState {
  ComponentSet components;
  Eigen::VectorXi allocations;  // length n, values in {0..m-1}
  double u = 1.0;

  Eigen::VectorXi counts() const;        // length m: n_h
  std::vector<int> active_ids() const;   // ascending ids with n_h >= 1
  int active_count() const;              // k
};

struct Hyperparameters {
  double a_s = 0.1;
  int ell = 1;
  double tau = 2.0;                        // inverse-Wishart degrees of freedom
  Eigen::MatrixXd omega;                   // d x d SPD scale
  double domain_expansion = 3.0;
  double proposal_local_weight = 0.9;      // Gaussian part of the atom proposal
  double proposal_local_var = 0.01;        // its per-coordinate variance
  int neal8_T = 3;                         // auxiliary pairs per reallocation

  // Throws ConfigError listing every violated constraint for data dimension d.
  void validate(int d) const;
};

// tau = 2, omega = [6] (the scalar inverse-gamma InvGa(1,3)), expansion 3 in
// one dimension; tau = d+2, omega = I_d, expansion 2.5 otherwise.
Hyperparameters default_hyperparameters(int d);

// Rectangle with per-coordinate bounds mean_e -/+ expansion * zeta_e, where
// zeta_e is the largest absolute deviation from the mean. A coordinate with
// zeta_e = 0 cannot support the kernel; that is a data error.
Domain build_domain(const Dataset& dataset, double expansion);

// Exact multivariate normal log-density; the covariance must be SPD.
double mvn_logpdf(const Eigen::VectorXd& y, const Eigen::VectorXd& mean,
                  const Eigen::MatrixXd& cov);

// Prefactored normal density for repeated evaluation against one component.
class MvnDensity {
 public:
  MvnDensity(Eigen::VectorXd mean, const Eigen::MatrixXd& cov);
  double log_density(const Eigen::VectorXd& y) const;
  // sup over the mean (equivalently y): the density value at zero residual.
  double log_mode() const { return log_norm_; }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd chol_lower_;
  double log_norm_;
};

// Draw from the inverse Wishart with density proportional to
// |S|^{-(tau+d+1)/2} exp(-tr(Omega S^{-1})/2); mean Omega/(tau-d-1) when
// tau > d+1; the d=1 case is InvGa(tau/2, Omega/2). Bartlett construction.
Eigen::MatrixXd sample_inverse_wishart(double tau, const Eigen::MatrixXd& omega,
                                       RandomStream& rng);

// Conjugate update for one component's covariance: degrees of freedom gain
// the cluster count, the scale gains the scatter about the location.
std::pair<double, Eigen::MatrixXd> posterior_cov_params(
    const Eigen::MatrixXd& cluster_data, const Eigen::VectorXd& location,
    double tau, const Eigen::MatrixXd& omega);

// log of the marginal density of y ~ N(location, Sigma) with Sigma
// integrated against InvWi(tau, omega): a multivariate Student form
//   pi^{-d/2} |Omega|^{tau/2} Gamma((1+tau)/2)/Gamma((1+tau-d)/2)
//     * |Omega + r r^T|^{-(1+tau)/2},  r = y - location.
double location_predictive_logpdf(const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& location, double tau,
                                  const Eigen::MatrixXd& omega);

// Complete-data log-likelihood sum_i log N(y_i | phi_{c_i}, Sigma_{c_i}).
double complete_log_likelihood(const Dataset& dataset, const MixtureState& state);

// Throws std::logic_error when a state invariant is broken: allocation range,
// count consistency, positive jumps, SPD covariances, atoms inside the domain
// and pairwise distinct.
void validate_state(const MixtureState& state, const Dataset& dataset,
                    const FourierProjectionKernel& kernel);

// Benchmark generators: three equally weighted Student-t components with
// 6 degrees of freedom and unit scale.
//   t3_1d: locations -4, 0, 4
//   t3_2d: (-4,4), (0,0), (4,4)
//   t3_4d: (-4,-4,4,4), (0,0,0,0), (4,4,4,4)
struct SimulatedData {
  Eigen::MatrixXd y;
  Eigen::VectorXi component;  // generating component per row, 0-based
};
SimulatedData simulate_benchmark(const std::string& generator, int n,
                                 RandomStream& rng);

}  // namespace pdpp
