#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "pdpp/domain.hpp"
#include "pdpp/samplers.hpp"

namespace pdpp {

struct EssResult {
  double value = 0.0;
  // Set for a (numerically) constant series; the value is then the length.
  bool degenerate = false;
};

// N / (1 + 2 sum of autocorrelations), truncated by the initial monotone
// positive sequence rule on paired autocorrelation sums; clipped to [1, N].
// Requires at least 10 values.
EssResult effective_sample_size(const Eigen::VectorXd& series);

// Histogram of the cluster-count trace over {1..m}; entry h-1 is the
// fraction of retained iterations with k = h. Sums to 1.
Eigen::VectorXd k_posterior(const ChainTrace& trace);

// Mode of a k histogram, 1-based; the smallest k wins ties.
int k_mode(const Eigen::VectorXd& histogram);

// Entry (i,j): fraction of retained iterations allocating i and j to the
// same component. Symmetric with unit diagonal.
Eigen::MatrixXd similarity_matrix(const Eigen::MatrixXi& allocations);

// Greedy minimizer of the Monte Carlo expected variation of information
// against the retained allocation rows: several restarts seeded from trace
// rows, each running `sweeps` random-order reassignment passes. The result
// never uses more blocks than the largest cluster count in the trace, and
// labels are contiguous starting at 1. Deterministic given the seed.
Eigen::VectorXi point_estimate_vi(const Eigen::MatrixXi& allocations,
                                  int sweeps = 4, std::uint64_t seed = 1);

// Mean variation of information between a candidate partition and every row
// of the trace (natural logarithm).
double expected_vi(const Eigen::VectorXi& partition,
                   const Eigen::MatrixXi& allocations);

struct DensityEstimate {
  Eigen::MatrixXd points;   // one grid point per row
  Eigen::VectorXd values;   // posterior-mean density at each point
  bool grid_covers_domain = true;
  // Trapezoidal mass of the least/most normalized snapshot; both should be
  // within 0.01 of one when the grid covers the domain finely enough.
  double min_snapshot_mass = 1.0;
  double max_snapshot_mass = 1.0;
};

// Posterior-mean mixture density over a tensor grid given by one sorted
// coordinate axis per dimension (d = 1 or 2). Each snapshot contributes its
// normalized-weight Gaussian mixture.
DensityEstimate density_estimate(const std::vector<AtomSnapshot>& snapshots,
                                 const std::vector<Eigen::VectorXd>& axes,
                                 const Domain& domain);

// Equally spaced axis with `count` points spanning the domain's extent in
// dimension `dim`.
Eigen::VectorXd grid_axis(const Domain& domain, int dim, int count);

}  // namespace pdpp
