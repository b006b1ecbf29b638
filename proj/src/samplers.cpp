#include "pdpp/samplers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "pdpp/dpp_sampler.hpp"
#include "pdpp/errors.hpp"

namespace pdpp {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kLogPi = 1.1447298858494001741434273513531;
constexpr std::int64_t kRejectionCap = 10000000;

Eigen::MatrixXd cluster_rows(const Dataset& dataset,
                             const Eigen::VectorXi& allocations, int h) {
  int count = 0;
  for (int i = 0; i < allocations.size(); ++i) {
    if (allocations(i) == h) ++count;
  }
  Eigen::MatrixXd rows(count, dataset.d());
  int r = 0;
  for (int i = 0; i < allocations.size(); ++i) {
    if (allocations(i) == h) rows.row(r++) = dataset.y.row(i);
  }
  return rows;
}

double cluster_log_likelihood(const Dataset& dataset,
                              const Eigen::VectorXi& allocations, int h,
                              const Eigen::VectorXd& location,
                              const Eigen::MatrixXd& cov) {
  const MvnDensity density(location, cov);
  double total = 0.0;
  for (int i = 0; i < allocations.size(); ++i) {
    if (allocations(i) == h) {
      total += density.log_density(dataset.y.row(i).transpose());
    }
  }
  return total;
}

// One Metropolis-Hastings move of atom h against a fixed complement set.
// Target: PalmDiag_complement(theta) x likelihood of the atom's cluster;
// the Palm diagonal ratio equals the determinant ratio of the full atom
// Gram matrix. Proposal: local Gaussian with probability w, otherwise one
// retained Palm-intensity draw with density PalmDiag / (m - |complement|).
// The mixture is not symmetric, so the Hastings factor uses both densities.
bool try_atom_move(MixtureState& state, int h, const Eigen::MatrixXd& complement,
                   const Dataset& dataset, const Hyperparameters& hyper,
                   const FourierProjectionKernel& kernel, RandomStream& rng) {
  const Domain& domain = kernel.domain();
  const int d = domain.dim();
  const PalmKernel palm = make_palm(kernel, complement);
  const double palm_norm = static_cast<double>(palm.residual_rank());
  const Eigen::VectorXd current = state.components.locations.row(h).transpose();
  const double p_cur = std::max(palm.diag(current), 0.0);

  const double w = hyper.proposal_local_weight;
  Eigen::VectorXd candidate(d);
  if (rng.uniform() < w) {
    const double sd = std::sqrt(hyper.proposal_local_var);
    for (int e = 0; e < d; ++e) candidate(e) = current(e) + sd * rng.normal();
  } else {
    candidate = sample_palm_intensity_point(palm, rng, kRejectionCap);
  }
  if (!domain.contains(candidate)) return false;
  const double p_cand = std::max(palm.diag(candidate), 0.0);
  if (!(p_cand > 0.0)) return false;  // singular atom configuration

  double log_alpha = 0.0;
  if (p_cur > 0.0) {
    const Eigen::MatrixXd& cov = state.components.covariances[h];
    const double ll_cur =
        cluster_log_likelihood(dataset, state.allocations, h, current, cov);
    const double ll_cand =
        cluster_log_likelihood(dataset, state.allocations, h, candidate, cov);
    double log_gauss = 0.0;
    for (int e = 0; e < d; ++e) {
      const double delta = candidate(e) - current(e);
      log_gauss += -0.5 * (kLog2Pi + std::log(hyper.proposal_local_var)) -
                   0.5 * delta * delta / hyper.proposal_local_var;
    }
    const double gauss = std::exp(log_gauss);
    const double q_fwd = w * gauss + (1.0 - w) * p_cand / palm_norm;
    const double q_rev = w * gauss + (1.0 - w) * p_cur / palm_norm;
    log_alpha = (ll_cand - ll_cur) + std::log(p_cand) - std::log(p_cur) +
                std::log(q_rev) - std::log(q_fwd);
  }
  // p_cur == 0: the current configuration carries zero prior density; any
  // valid candidate is an improvement and is taken.
  if (std::log(rng.uniform_open()) < log_alpha) {
    state.components.locations.row(h) = candidate.transpose();
    return true;
  }
  return false;
}

int lowest_free_slot(const Eigen::VectorXi& counts) {
  for (int h = 0; h < counts.size(); ++h) {
    if (counts(h) == 0) return h;
  }
  throw NumericalError("internal: no free component slot available");
}

std::vector<int> occupied_ids(const Eigen::VectorXi& counts) {
  std::vector<int> ids;
  for (int h = 0; h < counts.size(); ++h) {
    if (counts(h) > 0) ids.push_back(h);
  }
  return ids;
}

Eigen::MatrixXd rows_at(const Eigen::MatrixXd& source, const std::vector<int>& ids) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(ids.size()), source.cols());
  for (std::size_t r = 0; r < ids.size(); ++r) out.row(r) = source.row(ids[r]);
  return out;
}

void debug_validate(const MixtureState& state, const Dataset& dataset,
                    const FourierProjectionKernel& kernel) {
#ifndef NDEBUG
  validate_state(state, dataset, kernel);
#else
  (void)state;
  (void)dataset;
  (void)kernel;
#endif
}

SweepReport finish_report(const MixtureState& state, const Dataset& dataset,
                          const AcceptanceCounts& moves) {
  SweepReport report;
  report.k = state.active_count();
  report.entropy = partition_entropy(state.allocations);
  report.u = state.u;
  report.accepted_atom_moves = moves.accepted;
  report.proposed_atom_moves = moves.proposed;
  report.log_likelihood = complete_log_likelihood(dataset, state);
  return report;
}

}  // namespace

SamplerKind sampler_kind_from_name(const std::string& name) {
  if (name == "conditional") return SamplerKind::conditional;
  if (name == "marginal_a") return SamplerKind::marginal_a;
  if (name == "marginal_b") return SamplerKind::marginal_b;
  throw ConfigError("unknown sampler '" + name +
                    "' (expected conditional, marginal_a, or marginal_b)");
}

std::string sampler_kind_name(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::conditional: return "conditional";
    case SamplerKind::marginal_a: return "marginal_a";
    case SamplerKind::marginal_b: return "marginal_b";
  }
  throw ConfigError("unknown sampler kind");
}

double partition_entropy(const Eigen::VectorXi& allocations) {
  const int n = static_cast<int>(allocations.size());
  if (n == 0) return 0.0;
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(allocations.maxCoeff() + 1);
  for (int i = 0; i < n; ++i) counts(allocations(i))++;
  double entropy = 0.0;
  for (int h = 0; h < counts.size(); ++h) {
    if (counts(h) > 0) {
      const double p = static_cast<double>(counts(h)) / n;
      entropy -= p * std::log(p);
    }
  }
  return entropy;
}

MixtureState initialize_state(const Dataset& dataset, const Hyperparameters& hyper,
                              const FourierProjectionKernel& kernel,
                              RandomStream& rng) {
  hyper.validate(dataset.d());
  if (kernel.rank() > 100000) {
    throw ConfigError("mixture sampling: kernel rank " +
                      std::to_string(kernel.rank()) +
                      " components is beyond practical size");
  }
  const int m = static_cast<int>(kernel.rank());
  const int n = dataset.n();

  MixtureState state;
  state.components.locations = sample_projection_dpp(kernel, rng).points;
  state.components.covariances.reserve(m);
  for (int h = 0; h < m; ++h) {
    state.components.covariances.push_back(
        sample_inverse_wishart(hyper.tau, hyper.omega, rng));
  }
  state.components.jumps.resize(m);
  for (int h = 0; h < m; ++h) state.components.jumps(h) = rng.gamma(hyper.a_s, 1.0);
  state.u = 1.0;

  // Nearest atom in Mahalanobis distance under each component's own
  // covariance; every component is eligible.
  std::vector<Eigen::MatrixXd> chols(m);
  for (int h = 0; h < m; ++h) {
    const CholeskyPsd chol = cholesky_psd(state.components.covariances[h]);
    if (!chol.positive) {
      throw NumericalError("initialization: prior covariance draw not SPD");
    }
    chols[h] = chol.lower;
  }
  state.allocations.resize(n);
  for (int i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_h = 0;
    for (int h = 0; h < m; ++h) {
      const Eigen::VectorXd r =
          dataset.y.row(i).transpose() - state.components.locations.row(h).transpose();
      const double dist2 =
          chols[h].triangularView<Eigen::Lower>().solve(r).squaredNorm();
      if (dist2 < best) {
        best = dist2;
        best_h = h;
      }
    }
    state.allocations(i) = best_h;
  }
  debug_validate(state, dataset, kernel);
  return state;
}

AcceptanceCounts mh_update_atoms(MixtureState& state, const Dataset& dataset,
                                 const Hyperparameters& hyper,
                                 const FourierProjectionKernel& kernel,
                                 RandomStream& rng) {
  const std::vector<int> active = state.active_ids();
  if (active.empty()) {
    throw ConfigError("atom update: at least one occupied component required");
  }
  const int m = state.components.size();
  const int d = state.components.locations.cols();
  AcceptanceCounts counts;
  Eigen::MatrixXd complement(m - 1, d);
  for (int h : active) {
    int r = 0;
    for (int g = 0; g < m; ++g) {
      if (g != h) complement.row(r++) = state.components.locations.row(g);
    }
    counts.proposed += 1;
    counts.accepted +=
        try_atom_move(state, h, complement, dataset, hyper, kernel, rng) ? 1 : 0;
  }
  return counts;
}

AcceptanceCounts reshuffle(MixtureState& state, const Dataset& dataset,
                           const Hyperparameters& hyper,
                           const FourierProjectionKernel& kernel,
                           RandomStream& rng) {
  const std::vector<int> active = state.active_ids();
  if (active.empty()) {
    throw ConfigError("reshuffle: at least one occupied component required");
  }
  const int d = state.components.locations.cols();
  AcceptanceCounts counts;
  Eigen::MatrixXd complement(static_cast<Eigen::Index>(active.size()) - 1, d);
  for (int h : active) {
    int r = 0;
    for (int g : active) {
      if (g != h) complement.row(r++) = state.components.locations.row(g);
    }
    counts.proposed += 1;
    counts.accepted +=
        try_atom_move(state, h, complement, dataset, hyper, kernel, rng) ? 1 : 0;
  }
  for (int h : active) {
    const Eigen::MatrixXd members = cluster_rows(dataset, state.allocations, h);
    const auto [tau_post, omega_post] = posterior_cov_params(
        members, state.components.locations.row(h).transpose(), hyper.tau,
        hyper.omega);
    state.components.covariances[h] =
        sample_inverse_wishart(tau_post, omega_post, rng);
  }
  return counts;
}

SweepReport conditional_sweep(MixtureState& state, const Dataset& dataset,
                              const Hyperparameters& hyper,
                              const FourierProjectionKernel& kernel,
                              RandomStream& rng) {
  const int n = dataset.n();
  const int m = state.components.size();
  const GammaJumpModel jump_model(hyper.a_s);

  // 1. Auxiliary variable given the current total jump mass.
  state.u = jump_model.sample_u_conditional(n, state.components.jumps.sum(), rng);

  // 2. Allocations across all m weighted components.
  std::vector<MvnDensity> densities;
  densities.reserve(m);
  for (int h = 0; h < m; ++h) {
    densities.emplace_back(state.components.locations.row(h).transpose(),
                           state.components.covariances[h]);
  }
  const Eigen::ArrayXd log_jumps = state.components.jumps.array().log();
  Eigen::VectorXd logw(m);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd y_i = dataset.y.row(i).transpose();
    for (int h = 0; h < m; ++h) logw(h) = log_jumps(h) + densities[h].log_density(y_i);
#ifndef NDEBUG
    {
      const Eigen::VectorXd probs = normalize_log_weights(logw);
      if (std::abs(probs.sum() - 1.0) > 1e-12) {
        throw std::logic_error("allocation weights failed to normalize");
      }
    }
#endif
    state.allocations(i) = sample_categorical_log(rng, logw);
  }

  // 3. Refresh the unoccupied components: tilted jumps, locations from the
  // Palm process conditioned on the occupied atoms, prior covariances.
  const Eigen::VectorXi counts = state.counts();
  const std::vector<int> active = occupied_ids(counts);
  const PalmKernel palm =
      make_palm(kernel, rows_at(state.components.locations, active));
  const DppSample fresh = sample_palm_dpp(palm, rng, kRejectionCap);
  int fresh_row = 0;
  for (int h = 0; h < m; ++h) {
    if (counts(h) == 0) {
      state.components.locations.row(h) = fresh.points.row(fresh_row++);
      state.components.jumps(h) = jump_model.sample_tilted_jump(state.u, rng);
      state.components.covariances[h] =
          sample_inverse_wishart(hyper.tau, hyper.omega, rng);
    }
  }

  // 4a. Occupied jumps.
  for (int h : active) {
    state.components.jumps(h) =
        jump_model.sample_active_jump(counts(h), state.u, rng);
  }

  // 4b. Occupied locations by Metropolis-Hastings.
  const AcceptanceCounts moves =
      mh_update_atoms(state, dataset, hyper, kernel, rng);

  // 5. Occupied covariances from the conjugate posterior.
  for (int h : active) {
    const Eigen::MatrixXd members = cluster_rows(dataset, state.allocations, h);
    const auto [tau_post, omega_post] = posterior_cov_params(
        members, state.components.locations.row(h).transpose(), hyper.tau,
        hyper.omega);
    state.components.covariances[h] =
        sample_inverse_wishart(tau_post, omega_post, rng);
  }

  debug_validate(state, dataset, kernel);
  return finish_report(state, dataset, moves);
}

SweepReport marginal_a_sweep(MixtureState& state, const Dataset& dataset,
                             const Hyperparameters& hyper,
                             const FourierProjectionKernel& kernel,
                             RandomStream& rng, int mc_integral_points) {
  if (mc_integral_points < 1) {
    throw ConfigError("marginal_a: mc_integral_points must be positive");
  }
  const int n = dataset.n();
  const int m = state.components.size();
  const int d = dataset.d();
  const Domain& domain = kernel.domain();
  const GammaJumpModel jump_model(hyper.a_s);

  const CholeskyPsd omega_chol = cholesky_psd(hyper.omega);
  if (!omega_chol.positive) {
    throw ConfigError("marginal_a: omega is not positive definite");
  }
  const double exponent = 0.5 * (1.0 + hyper.tau);
  // Predictive factor t(y | theta) = exp(log_c) (1 + r^T Omega^{-1} r)^{-e}.
  const double log_c = std::lgamma(0.5 * (1.0 + hyper.tau)) -
                       std::lgamma(0.5 * (1.0 + hyper.tau - d)) -
                       0.5 * d * kLogPi - 0.5 * omega_chol.log_det;

  // Shared Monte Carlo point set for the new-pair integral, redrawn once per
  // sweep; upgraded to 4x the size at most once if an integral underflows.
  int mc_count = mc_integral_points;
  Eigen::MatrixXd mc_points(mc_count, d);
  Eigen::MatrixXd mc_solved;      // Omega^{-1/2} applied to the points
  Eigen::ArrayXd mc_solved_norm2;
  const auto draw_mc_points = [&]() {
    for (int p = 0; p < mc_count; ++p) {
      mc_points.row(p) = domain.sample_uniform(rng).transpose();
    }
    mc_solved = omega_chol.lower.triangularView<Eigen::Lower>().solve(
        mc_points.transpose());
    mc_solved_norm2 = mc_solved.colwise().squaredNorm().transpose().array();
  };
  draw_mc_points();

  // Palm diagonal over the Monte Carlo points, cached on the conditioning
  // set. The epoch invalidates the cache whenever any location is rewritten
  // (slots can be freed and refilled with new atoms mid-sweep) or the Monte
  // Carlo point set changes.
  long long epoch = 0;
  std::vector<int> cache_ids;
  long long cache_epoch = -1;
  std::optional<PalmKernel> cache_palm;
  Eigen::ArrayXd cache_diag;
  const auto ensure_cache = [&](const std::vector<int>& ids) {
    if (cache_epoch == epoch && cache_ids == ids) return;
    cache_palm.emplace(
        make_palm(kernel, rows_at(state.components.locations, ids)));
    cache_diag = cache_palm->diag_many(mc_points).array().max(0.0);
    cache_ids = ids;
    cache_epoch = epoch;
  };

  Eigen::VectorXi counts = state.counts();
  for (int i = 0; i < n; ++i) {
    counts(state.allocations(i)) -= 1;
    const std::vector<int> ids = occupied_ids(counts);
    const int q = static_cast<int>(ids.size());
    const Eigen::VectorXd y_i = dataset.y.row(i).transpose();

    Eigen::VectorXd logw(q + (q < m ? 1 : 0));
    for (int j = 0; j < q; ++j) {
      const int h = ids[j];
      logw(j) = std::log(counts(h) + hyper.a_s) +
                mvn_logpdf(y_i, state.components.locations.row(h).transpose(),
                           state.components.covariances[h]);
    }
    if (q < m) {
      const Eigen::VectorXd y_solved =
          omega_chol.lower.triangularView<Eigen::Lower>().solve(y_i);
      const auto integral_estimate = [&]() {
        ensure_cache(ids);
        const Eigen::ArrayXd quad =
            (mc_solved_norm2 -
             2.0 * (mc_solved.transpose() * y_solved).array() +
             y_solved.squaredNorm())
                .max(0.0);
        const double mean_value =
            (cache_diag * (1.0 + quad).pow(-exponent)).sum() / mc_count;
        return domain.volume() * mean_value;
      };
      double integral = integral_estimate();
      if (!(integral > 0.0)) {
        // One retry with four times the points before giving up.
        mc_count *= 4;
        mc_points.resize(mc_count, d);
        draw_mc_points();
        ++epoch;
        integral = integral_estimate();
        if (!(integral > 0.0)) {
          throw NumericalError(
              "marginal_a: new-pair predictive integral underflowed to zero");
        }
      }
      logw(q) = std::log(hyper.a_s) + log_c + std::log(integral);
    }

    const int pick = sample_categorical_log(rng, logw);
    if (pick < q) {
      state.allocations(i) = ids[pick];
      counts(ids[pick]) += 1;
    } else {
      // New pair: covariance from the prior, location by exact rejection from
      // PalmDiag(theta) N(y_i | theta, delta). Trials alternate between two
      // valid proposal/envelope pairs for the same target: a draw from the
      // likelihood component accepted on PalmDiag(theta) / (m/|Theta|), and a
      // uniform draw accepted under the (m/|Theta|) sup N envelope. The
      // first is efficient when the likelihood is sharp, the second when it
      // is flat, so the sampler never starves on either extreme.
      const Eigen::MatrixXd delta =
          sample_inverse_wishart(hyper.tau, hyper.omega, rng);
      const MvnDensity likelihood(y_i, delta);
      const double log_diag = std::log(kernel.diag_value());
      const double log_envelope = log_diag + likelihood.log_mode();
      const Eigen::LLT<Eigen::MatrixXd> delta_chol(delta);
      const bool gaussian_ok = delta_chol.info() == Eigen::Success;
      const PalmKernel& palm = *cache_palm;
      Eigen::VectorXd theta(d);
      std::int64_t proposals = 0;
      for (;;) {
        if (proposals >= kRejectionCap) {
          throw NumericalError("marginal_a: new-pair location rejection "
                               "sampler exceeded its proposal budget");
        }
        const bool gaussian_trial = gaussian_ok && proposals % 2 == 0;
        ++proposals;
        if (gaussian_trial) {
          for (int e = 0; e < d; ++e) theta(e) = rng.normal();
          theta = y_i + delta_chol.matrixL() * theta;
          if (!domain.contains(theta)) continue;
          const double intensity = palm.diag(theta);
          if (intensity <= 0.0) continue;
          if (std::log(rng.uniform_open()) < std::log(intensity) - log_diag) {
            break;
          }
        } else {
          theta = domain.sample_uniform(rng);
          const double intensity = palm.diag(theta);
          if (intensity <= 0.0) continue;
          if (std::log(rng.uniform_open()) <
              std::log(intensity) + likelihood.log_density(theta) -
                  log_envelope) {
            break;
          }
        }
      }
      const int slot = lowest_free_slot(counts);
      state.components.locations.row(slot) = theta.transpose();
      state.components.covariances[slot] = delta;
      state.allocations(i) = slot;
      counts(slot) += 1;
      ++epoch;
    }
  }

  const AcceptanceCounts moves = reshuffle(state, dataset, hyper, kernel, rng);
  state.u = jump_model.sample_u_marginal(n, m, rng);
  debug_validate(state, dataset, kernel);
  return finish_report(state, dataset, moves);
}

SweepReport marginal_b_sweep(MixtureState& state, const Dataset& dataset,
                             const Hyperparameters& hyper,
                             const FourierProjectionKernel& kernel,
                             RandomStream& rng) {
  const int n = dataset.n();
  const int m = state.components.size();
  const int d = dataset.d();
  const int T = hyper.neal8_T;
  const GammaJumpModel jump_model(hyper.a_s);

  Eigen::VectorXi counts = state.counts();
  Eigen::MatrixXd aux_locations(T, d);
  std::vector<Eigen::MatrixXd> aux_covariances(T);
  for (int i = 0; i < n; ++i) {
    const int old = state.allocations(i);
    counts(old) -= 1;
    const bool reuse_old_pair = counts(old) == 0;
    const std::vector<int> ids = occupied_ids(counts);
    const int q = static_cast<int>(ids.size());
    const Eigen::VectorXd y_i = dataset.y.row(i).transpose();

    // Auxiliary pairs representing the unoccupied slots. Locations are
    // i.i.d. from the normalized Palm intensity (mass m - q), covariances
    // from the prior; a freed singleton donates its old pair as the first
    // auxiliary. With q = m there is no unoccupied mass and no auxiliaries.
    const int aux_count = q < m ? T : 0;
    if (aux_count > 0) {
      const PalmKernel palm =
          make_palm(kernel, rows_at(state.components.locations, ids));
      int t0 = 0;
      if (reuse_old_pair) {
        aux_locations.row(0) = state.components.locations.row(old);
        aux_covariances[0] = state.components.covariances[old];
        t0 = 1;
      }
      for (int t = t0; t < aux_count; ++t) {
        aux_locations.row(t) =
            sample_palm_intensity_point(palm, rng, kRejectionCap).transpose();
        aux_covariances[t] = sample_inverse_wishart(hyper.tau, hyper.omega, rng);
      }
    }

    Eigen::VectorXd logw(q + aux_count);
    for (int j = 0; j < q; ++j) {
      const int h = ids[j];
      logw(j) = std::log(counts(h) + hyper.a_s) +
                mvn_logpdf(y_i, state.components.locations.row(h).transpose(),
                           state.components.covariances[h]);
    }
    if (aux_count > 0) {
      const double log_aux_weight =
          std::log(hyper.a_s) + std::log(static_cast<double>(m - q)) -
          std::log(static_cast<double>(T));
      for (int t = 0; t < aux_count; ++t) {
        logw(q + t) = log_aux_weight +
                      mvn_logpdf(y_i, aux_locations.row(t).transpose(),
                                 aux_covariances[t]);
      }
    }

    const int pick = sample_categorical_log(rng, logw);
    if (pick < q) {
      state.allocations(i) = ids[pick];
      counts(ids[pick]) += 1;
    } else {
      const int t = pick - q;
      const int slot =
          (reuse_old_pair && t == 0) ? old : lowest_free_slot(counts);
      state.components.locations.row(slot) = aux_locations.row(t);
      state.components.covariances[slot] = aux_covariances[t];
      state.allocations(i) = slot;
      counts(slot) += 1;
    }
  }

  const AcceptanceCounts moves = reshuffle(state, dataset, hyper, kernel, rng);
  state.u = jump_model.sample_u_marginal(n, m, rng);
  debug_validate(state, dataset, kernel);
  return finish_report(state, dataset, moves);
}

namespace {

SweepReport run_sweep(SamplerKind kind, MixtureState& state,
                      const Dataset& dataset, const Hyperparameters& hyper,
                      const FourierProjectionKernel& kernel, RandomStream& rng,
                      int mc_integral_points) {
  switch (kind) {
    case SamplerKind::conditional:
      return conditional_sweep(state, dataset, hyper, kernel, rng);
    case SamplerKind::marginal_a:
      return marginal_a_sweep(state, dataset, hyper, kernel, rng,
                              mc_integral_points);
    case SamplerKind::marginal_b:
      return marginal_b_sweep(state, dataset, hyper, kernel, rng);
  }
  throw ConfigError("unknown sampler kind");
}

AtomSnapshot take_snapshot(const MixtureState& state, SamplerKind kind,
                           const GammaJumpModel& jump_model, double u,
                           RandomStream& rng) {
  const Eigen::VectorXi counts = state.counts();
  const std::vector<int> active = occupied_ids(counts);
  const int k = static_cast<int>(active.size());
  AtomSnapshot snap;
  snap.locations.resize(k, state.components.locations.cols());
  snap.covariances.reserve(k);
  snap.weights.resize(k);
  for (int j = 0; j < k; ++j) {
    const int h = active[j];
    snap.locations.row(j) = state.components.locations.row(h);
    snap.covariances.push_back(state.components.covariances[h]);
    // Conditional chains carry jump values; marginal chains integrate them
    // out and draw the occupied jumps from their exact conditional here.
    snap.weights(j) = kind == SamplerKind::conditional
                          ? state.components.jumps(h)
                          : jump_model.sample_active_jump(counts(h), u, rng);
  }
  return snap;
}

}  // namespace

ChainTrace run_chain_with_kernel(const Dataset& dataset,
                                 const Hyperparameters& hyper,
                                 const FourierProjectionKernel& kernel,
                                 const RunOptions& options) {
  hyper.validate(dataset.d());
  if (options.burn_in < 0 || options.iterations <= options.burn_in) {
    throw ConfigError("run_chain: iterations (" +
                      std::to_string(options.iterations) +
                      ") must exceed burn_in (" +
                      std::to_string(options.burn_in) + ")");
  }
  if (options.snapshot_stride < 0) {
    throw ConfigError("run_chain: snapshot_stride must be non-negative");
  }
  if (kernel.dim() != dataset.d()) {
    throw ConfigError("run_chain: kernel dimension does not match the data");
  }

  RandomStream rng(options.seed);
  MixtureState state = initialize_state(dataset, hyper, kernel, rng);
  const GammaJumpModel jump_model(hyper.a_s);

  ChainTrace trace;
  trace.kind = options.sampler.kind;
  trace.m = state.components.size();
  trace.n = dataset.n();
  const int retained = options.iterations - options.burn_in;
  trace.reports.reserve(retained);
  trace.allocations.resize(retained, dataset.n());

  const auto start = std::chrono::steady_clock::now();
  for (int it = 0; it < options.iterations; ++it) {
    const SweepReport report =
        run_sweep(options.sampler.kind, state, dataset, hyper, kernel, rng,
                  options.sampler.mc_integral_points);
    if (it < options.burn_in) continue;
    const int r = it - options.burn_in;
    trace.reports.push_back(report);
    trace.allocations.row(r) = state.allocations.transpose();
    if (options.snapshot_stride > 0 && r % options.snapshot_stride == 0) {
      trace.snapshots.push_back(
          take_snapshot(state, options.sampler.kind, jump_model, report.u, rng));
    }
  }
  trace.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return trace;
}

ChainTrace run_chain(const Dataset& dataset, const Hyperparameters& hyper,
                     const RunOptions& options) {
  const Domain domain = build_domain(dataset, hyper.domain_expansion);
  const FourierProjectionKernel kernel(domain, hyper.ell);
  return run_chain_with_kernel(dataset, hyper, kernel, options);
}

}  // namespace pdpp
