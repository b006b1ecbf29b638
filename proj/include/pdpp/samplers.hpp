#pragma once

#include <cstdint>
#include <vector>

#include "pdpp/jumps.hpp"
#include "pdpp/kernel.hpp"
#include "pdpp/mixture.hpp"
#include "pdpp/rng.hpp"

namespace pdpp {

enum class SamplerKind { conditional, marginal_a, marginal_b };

SamplerKind sampler_kind_from_name(const std::string& name);
std::string sampler_kind_name(SamplerKind kind);

struct SamplerOptions {
  SamplerKind kind = SamplerKind::conditional;
  int mc_integral_points = 2048;  // marginal_a predictive integral
};

struct SweepReport {
  int k = 0;
  double entropy = 0.0;
  double u = 0.0;
  std::int64_t accepted_atom_moves = 0;
  std::int64_t proposed_atom_moves = 0;
  double log_likelihood = 0.0;
};

// Minus the sum over clusters of (|C_j|/n) log(|C_j|/n), computed from an
// allocation vector; 0 for a single cluster.
double partition_entropy(const Eigen::VectorXi& allocations);

// Fresh state drawn from the prior: locations one projection-DPP draw,
// jumps Ga(a_s, 1), covariances InvWi(tau, omega), u = 1, allocations by the
// smallest Mahalanobis distance across all m components.
MixtureState initialize_state(const Dataset& dataset, const Hyperparameters& hyper,
                              const FourierProjectionKernel& kernel,
                              RandomStream& rng);

// One full conditional-sampler sweep: u, allocations over all m weighted
// components, refresh of the unoccupied part (tilted jumps, Palm locations,
// prior covariances), occupied jumps, occupied locations by Metropolis-
// Hastings, occupied covariances from the conjugate posterior.
SweepReport conditional_sweep(MixtureState& state, const Dataset& dataset,
                              const Hyperparameters& hyper,
                              const FourierProjectionKernel& kernel,
                              RandomStream& rng);

struct AcceptanceCounts {
  std::int64_t accepted = 0;
  std::int64_t proposed = 0;
};

// Metropolis-Hastings update of every occupied location in index order.
// The proposal mixes a local Gaussian (probability proposal_local_weight)
// with one retained draw from the Palm intensity conditioned on the other
// m-1 atoms. The acceptance ratio combines the cluster likelihood ratio,
// the atom-configuration determinant ratio (equal to the ratio of Palm
// diagonals over the complement), and the forward/reverse proposal
// densities -- the two-part proposal is not symmetric, so the last factor
// is required for detailed balance.
AcceptanceCounts mh_update_atoms(MixtureState& state, const Dataset& dataset,
                                 const Hyperparameters& hyper,
                                 const FourierProjectionKernel& kernel,
                                 RandomStream& rng);

// Collapsed-weight reallocation sweep: each observation is reassigned among
// the q occupied pairs (weight (n_j + a_s) times the normal density) and a
// new pair whose weight is a_s times the Monte Carlo estimate of
// integral of PalmDiag(theta) * predictive(y | theta) over the domain.
// New pairs draw the covariance from the prior and the location by rejection
// from PalmDiag * likelihood. Ends with a reshuffle.
SweepReport marginal_a_sweep(MixtureState& state, const Dataset& dataset,
                             const Hyperparameters& hyper,
                             const FourierProjectionKernel& kernel,
                             RandomStream& rng, int mc_integral_points = 2048);

// Auxiliary-pair reallocation sweep: T candidate pairs per observation,
// locations i.i.d. from the normalized Palm intensity over the other
// occupied atoms, covariances from the prior. An auxiliary's weight is
// a_s (m - q) / T times the normal density: the Palm draw is normalized by
// its total mass m - q, so the unoccupied-slot mass multiplies back in
// (with q = m there is no room and no auxiliaries are drawn). When the
// observation leaves a singleton, its old pair is recycled as the first
// auxiliary. Ends with a reshuffle.
SweepReport marginal_b_sweep(MixtureState& state, const Dataset& dataset,
                             const Hyperparameters& hyper,
                             const FourierProjectionKernel& kernel,
                             RandomStream& rng);

// Shared tail of the marginal sweeps: every occupied location updated by the
// same Hastings-corrected two-part proposal (Palm part conditioned on the
// other occupied atoms, normalized by m - k + 1), then every occupied
// covariance redrawn exactly from its conjugate posterior.
AcceptanceCounts reshuffle(MixtureState& state, const Dataset& dataset,
                           const Hyperparameters& hyper,
                           const FourierProjectionKernel& kernel,
                           RandomStream& rng);

// One occupied-atom snapshot used for density estimation.
struct AtomSnapshot {
  Eigen::MatrixXd locations;                 // k x d
  std::vector<Eigen::MatrixXd> covariances;  // k
  Eigen::VectorXd weights;                   // k, unnormalized jump values
};

struct ChainTrace {
  std::vector<SweepReport> reports;     // post burn-in, one per iteration
  Eigen::MatrixXi allocations;          // post burn-in, one row per iteration
  std::vector<AtomSnapshot> snapshots;  // every snapshot_stride-th retained iteration
  double wall_time_seconds = 0.0;       // sampling loop only
  int m = 0;
  int n = 0;
  SamplerKind kind = SamplerKind::conditional;
};

struct RunOptions {
  SamplerOptions sampler;
  int iterations = 10000;
  int burn_in = 5000;
  std::uint64_t seed = 1;
  int snapshot_stride = 10;  // among retained iterations; 0 disables snapshots
};

// Builds the domain from the data, initializes from the prior, runs the
// requested sweep for `iterations` iterations and keeps everything after
// `burn_in`. Deterministic given the options.
ChainTrace run_chain(const Dataset& dataset, const Hyperparameters& hyper,
                     const RunOptions& options);

// run_chain against a caller-supplied kernel (fixed domain); used by tests
// that must pin the domain independently of the data.
ChainTrace run_chain_with_kernel(const Dataset& dataset,
                                 const Hyperparameters& hyper,
                                 const FourierProjectionKernel& kernel,
                                 const RunOptions& options);

}  // namespace pdpp
