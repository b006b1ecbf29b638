#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "pdpp/kernel.hpp"
#include "pdpp/rng.hpp"

namespace pdpp {

// A draw from a projection determinantal point process. Points are a set;
// the row order only records the order in which they were produced.
// proposals_per_point[i] is the number of uniform proposals consumed while
// drawing points.row(i); the total rejection count is their sum minus the
// number of points.
struct DppSample {
  Eigen::MatrixXd points;  // count x d
  std::int64_t rejection_count = 0;
  std::vector<std::int64_t> proposals_per_point;
};

// Exact sequential sampler for the rank-m projection kernel. Produces
// exactly m points. Point number j (counting down from m to 1) follows the
// normalized residual density
//   p_j(x) = (1/j) (K(x,x) - k(x)^T G^{-1} k(x))
// given the points already drawn, realized by uniform proposals on the
// domain accepted with probability residual(x) |Theta| / m. Throws
// NumericalError when a single point exceeds max_proposals_per_point.
DppSample sample_projection_dpp(const FourierProjectionKernel& kernel,
                                RandomStream& rng,
                                std::int64_t max_proposals_per_point = 10000000);

// Same scheme run under a Palm (conditioned) kernel: draws exactly
// m - k points, where k is the number of conditioning points. The residual
// envelope m/|Theta| of the base kernel still dominates.
DppSample sample_palm_dpp(const PalmKernel& palm, RandomStream& rng,
                          std::int64_t max_proposals_per_point = 10000000);

// One point with density proportional to the Palm diagonal
// K^!(x,x) / (m - k), drawn by uniform-proposal rejection under the same
// m/|Theta| envelope. Used for single retained-point draws and auxiliary
// component locations.
Eigen::VectorXd sample_palm_intensity_point(
    const PalmKernel& palm, RandomStream& rng,
    std::int64_t max_proposals = 10000000,
    std::int64_t* proposals_used = nullptr);

}  // namespace pdpp
