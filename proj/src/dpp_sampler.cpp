#include "pdpp/dpp_sampler.hpp"

#include <cmath>
#include <string>

#include "pdpp/errors.hpp"

namespace pdpp {

namespace {

// Sequential rejection sampler shared by the unconditioned and Palm cases.
// Draws target_count points one at a time; the acceptance probability of a
// uniform proposal z is residual(z) |Theta| / m, where the residual is the
// Schur complement of the base-kernel Gram over seed and already-accepted
// points. Seeding with the conditioning set makes the residual equal to the
// Palm-kernel residual, so both cases run the same inner loop.
DppSample sequential_sample(const FourierProjectionKernel& kernel,
                            const Eigen::MatrixXd& seed, long long target_count,
                            RandomStream& rng,
                            std::int64_t max_proposals_per_point) {
  const int d = kernel.dim();
  const long long k0 = seed.rows();
  const long long total = k0 + target_count;
  const double envelope = kernel.diag_value();  // m / |Theta|

  DppSample sample;
  sample.points.resize(target_count, d);
  sample.proposals_per_point.reserve(static_cast<std::size_t>(target_count));
  if (target_count == 0) return sample;

  Eigen::MatrixXd pts(total, d);  // seed rows first, accepted points after
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(total, total);
  if (k0 > 0) {
    pts.topRows(k0) = seed;
    const CholeskyPsd seed_chol = cholesky_psd(gram_matrix(kernel, seed).gram);
    if (!seed_chol.positive) {
      throw NumericalError(
          "dpp sampler: conditioning points have a singular Gram matrix");
    }
    L.topLeftCorner(k0, k0) = seed_chol.lower;
  }

  Eigen::VectorXd z(d), k_vec(total), w(total);
  for (long long t = 0; t < target_count; ++t) {
    const long long cur = k0 + t;  // points currently in the factor
    std::int64_t proposals = 0;
    for (;;) {
      if (proposals >= max_proposals_per_point) {
        throw NumericalError(
            "dpp sampler: exceeded " + std::to_string(max_proposals_per_point) +
            " proposals for one point");
      }
      ++proposals;
      z = kernel.domain().sample_uniform(rng);
      double residual = envelope;
      if (cur > 0) {
        for (long long i = 0; i < cur; ++i) k_vec(i) = kernel.eval(z, pts.row(i));
        w.head(cur) = L.topLeftCorner(cur, cur)
                          .triangularView<Eigen::Lower>()
                          .solve(k_vec.head(cur));
        residual -= w.head(cur).squaredNorm();
      }
      if (rng.uniform() * envelope < residual) {
        pts.row(cur) = z;
        if (cur > 0) L.row(cur).head(cur) = w.head(cur);
        L(cur, cur) = std::sqrt(residual);
        sample.points.row(t) = z;
        break;
      }
    }
    sample.proposals_per_point.push_back(proposals);
    sample.rejection_count += proposals - 1;
  }
  return sample;
}

}  // namespace

DppSample sample_projection_dpp(const FourierProjectionKernel& kernel,
                                RandomStream& rng,
                                std::int64_t max_proposals_per_point) {
  const Eigen::MatrixXd empty(0, kernel.dim());
  return sequential_sample(kernel, empty, kernel.rank(), rng,
                           max_proposals_per_point);
}

DppSample sample_palm_dpp(const PalmKernel& palm, RandomStream& rng,
                          std::int64_t max_proposals_per_point) {
  return sequential_sample(palm.base(), palm.conditioning(),
                           palm.residual_rank(), rng, max_proposals_per_point);
}

Eigen::VectorXd sample_palm_intensity_point(const PalmKernel& palm,
                                            RandomStream& rng,
                                            std::int64_t max_proposals,
                                            std::int64_t* proposals_used) {
  if (palm.residual_rank() <= 0) {
    throw ConfigError(
        "palm intensity draw: kernel is fully conditioned, no mass left");
  }
  const double envelope = palm.base().diag_value();
  std::int64_t proposals = 0;
  Eigen::VectorXd z;
  for (;;) {
    if (proposals >= max_proposals) {
      throw NumericalError("palm intensity draw: exceeded " +
                           std::to_string(max_proposals) + " proposals");
    }
    ++proposals;
    z = palm.base().domain().sample_uniform(rng);
    const double intensity = palm.diag(z);
    if (intensity > 0.0 && rng.uniform() * envelope < intensity) break;
  }
  if (proposals_used != nullptr) *proposals_used = proposals;
  return z;
}

}  // namespace pdpp
