#include "pdpp/summaries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pdpp/errors.hpp"
#include "pdpp/mixture.hpp"
#include "pdpp/rng.hpp"

namespace pdpp {

EssResult effective_sample_size(const Eigen::VectorXd& series) {
  const int n = static_cast<int>(series.size());
  if (n < 10) {
    throw ConfigError("effective sample size: need at least 10 values");
  }
  const double mean = series.mean();
  const Eigen::ArrayXd centered = series.array() - mean;
  const double var = centered.square().sum() / n;
  const double scale = std::max(1.0, mean * mean);
  if (!(var > 1e-24 * scale)) {
    return {static_cast<double>(n), true};
  }
  const auto rho = [&](int lag) {
    return centered.head(n - lag).matrix().dot(centered.tail(n - lag).matrix()) /
           (n * var);
  };
  // Paired autocorrelation sums: keep pairs while positive, forcing the
  // sequence nonincreasing, per the initial-monotone-positive-sequence rule.
  double tau = 0.0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (int k = 0; 2 * k + 1 < n; ++k) {
    double pair = rho(2 * k) + rho(2 * k + 1);
    if (!(pair > 0.0)) break;
    pair = std::min(pair, prev_pair);
    tau += 2.0 * pair;
    prev_pair = pair;
  }
  tau -= 1.0;  // the lag-0 term is counted once, not twice
  tau = std::max(tau, 1e-12);
  const double ess = std::clamp(static_cast<double>(n) / tau, 1.0,
                                static_cast<double>(n));
  return {ess, false};
}

Eigen::VectorXd k_posterior(const ChainTrace& trace) {
  if (trace.reports.empty()) {
    throw ConfigError("k posterior: empty trace");
  }
  Eigen::VectorXd hist = Eigen::VectorXd::Zero(trace.m);
  for (const SweepReport& report : trace.reports) {
    if (report.k < 1 || report.k > trace.m) {
      throw NumericalError("k posterior: cluster count outside {1..m}");
    }
    hist(report.k - 1) += 1.0;
  }
  hist /= static_cast<double>(trace.reports.size());
  return hist;
}

int k_mode(const Eigen::VectorXd& histogram) {
  int best = 1;
  for (int h = 1; h < histogram.size(); ++h) {
    if (histogram(h) > histogram(best - 1)) best = h + 1;
  }
  return best;
}

Eigen::MatrixXd similarity_matrix(const Eigen::MatrixXi& allocations) {
  const int rows = static_cast<int>(allocations.rows());
  const int n = static_cast<int>(allocations.cols());
  if (rows < 1) throw ConfigError("similarity matrix: empty trace");
  Eigen::MatrixXd sim = Eigen::MatrixXd::Zero(n, n);
  for (int t = 0; t < rows; ++t) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (allocations(t, i) == allocations(t, j)) sim(i, j) += 1.0;
      }
    }
  }
  sim /= static_cast<double>(rows);
  sim += sim.transpose().eval();
  sim.diagonal().setOnes();
  return sim;
}

namespace {

// Labels compressed to 0..K-1 in order of first appearance.
Eigen::VectorXi compress_labels(const Eigen::VectorXi& labels, int* k_out) {
  Eigen::VectorXi out(labels.size());
  std::vector<int> seen;
  for (int i = 0; i < labels.size(); ++i) {
    const auto it = std::find(seen.begin(), seen.end(), labels(i));
    if (it == seen.end()) {
      seen.push_back(labels(i));
      out(i) = static_cast<int>(seen.size()) - 1;
    } else {
      out(i) = static_cast<int>(it - seen.begin());
    }
  }
  *k_out = static_cast<int>(seen.size());
  return out;
}

// x log x with f(0) = 0.
class XLogXTable {
 public:
  explicit XLogXTable(int n) : table_(n + 1) {
    table_[0] = 0.0;
    for (int x = 1; x <= n; ++x) table_[x] = x * std::log(static_cast<double>(x));
  }
  double operator()(int x) const { return table_[x]; }

 private:
  std::vector<double> table_;
};

}  // namespace

double expected_vi(const Eigen::VectorXi& partition,
                   const Eigen::MatrixXi& allocations) {
  const int rows = static_cast<int>(allocations.rows());
  const int n = static_cast<int>(allocations.cols());
  if (partition.size() != n) {
    throw ConfigError("expected VI: partition length does not match trace");
  }
  int blocks = 0;
  const Eigen::VectorXi p = compress_labels(partition, &blocks);
  const XLogXTable f(n);
  double total = 0.0;
  Eigen::VectorXi p_sizes = Eigen::VectorXi::Zero(blocks);
  for (int i = 0; i < n; ++i) p_sizes(p(i))++;
  double h_p = 0.0;
  for (int a = 0; a < blocks; ++a) h_p += f(p_sizes(a));
  for (int t = 0; t < rows; ++t) {
    int kt = 0;
    const Eigen::VectorXi q = compress_labels(allocations.row(t).transpose(), &kt);
    Eigen::VectorXi q_sizes = Eigen::VectorXi::Zero(kt);
    Eigen::MatrixXi joint = Eigen::MatrixXi::Zero(blocks, kt);
    for (int i = 0; i < n; ++i) {
      q_sizes(q(i))++;
      joint(p(i), q(i))++;
    }
    double h_q = 0.0;
    for (int b = 0; b < kt; ++b) h_q += f(q_sizes(b));
    double h_joint = 0.0;
    for (int a = 0; a < blocks; ++a) {
      for (int b = 0; b < kt; ++b) h_joint += f(joint(a, b));
    }
    // VI = 2 H(joint) - H(p) - H(q), with H = log n - (1/n) sum f(counts).
    total += (h_p + h_q - 2.0 * h_joint) / n;
  }
  return total / rows;
}

Eigen::VectorXi point_estimate_vi(const Eigen::MatrixXi& allocations,
                                  int sweeps, std::uint64_t seed) {
  const int rows = static_cast<int>(allocations.rows());
  const int n = static_cast<int>(allocations.cols());
  if (rows < 1 || n < 1) throw ConfigError("point estimate: empty trace");
  if (sweeps < 1) throw ConfigError("point estimate: sweeps must be positive");

  // Compressed trace rows and the block budget (largest observed k).
  std::vector<Eigen::VectorXi> q_rows(rows);
  std::vector<int> q_k(rows);
  int budget = 1;
  for (int t = 0; t < rows; ++t) {
    q_rows[t] = compress_labels(allocations.row(t).transpose(), &q_k[t]);
    budget = std::max(budget, q_k[t]);
  }
  const XLogXTable f(n);
  RandomStream rng(seed);

  // Objective to minimize, scaled by n * rows and shifted by constants:
  //   J = rows * sum_a f(n_a) - 2 * sum_t sum_{a,b} f(joint_t(a,b)).
  const int restarts = std::min(3, rows);
  Eigen::VectorXi best_partition;
  double best_j = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < restarts; ++restart) {
    const int seed_row = restart == 0 ? 0 : rng.uniform_int(rows);
    int k0 = 0;
    Eigen::VectorXi part = compress_labels(q_rows[seed_row], &k0);

    Eigen::VectorXi sizes = Eigen::VectorXi::Zero(budget);
    for (int i = 0; i < n; ++i) sizes(part(i))++;
    // joint[t] is a budget x q_k[t] contingency table stored row-major.
    std::vector<Eigen::VectorXi> joint(rows);
    for (int t = 0; t < rows; ++t) {
      joint[t] = Eigen::VectorXi::Zero(budget * q_k[t]);
      for (int i = 0; i < n; ++i) joint[t](part(i) * q_k[t] + q_rows[t](i))++;
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int sweep = 0; sweep < sweeps; ++sweep) {
      for (int i = n - 1; i > 0; --i) {
        std::swap(order[i], order[rng.uniform_int(i + 1)]);
      }
      bool moved = false;
      for (const int i : order) {
        const int a = part(i);
        double best_delta = 0.0;
        int best_b = a;
        for (int b = 0; b < budget; ++b) {
          if (b == a) continue;
          // Change in J when i moves from block a to block b.
          double delta =
              static_cast<double>(rows) * (f(sizes(a) - 1) - f(sizes(a)) +
                                           f(sizes(b) + 1) - f(sizes(b)));
          for (int t = 0; t < rows; ++t) {
            const int qt = q_rows[t](i);
            const int ca = joint[t](a * q_k[t] + qt);
            const int cb = joint[t](b * q_k[t] + qt);
            delta -= 2.0 * (f(ca - 1) - f(ca) + f(cb + 1) - f(cb));
          }
          if (delta < best_delta - 1e-12) {
            best_delta = delta;
            best_b = b;
          }
        }
        if (best_b != a) {
          moved = true;
          sizes(a)--;
          sizes(best_b)++;
          for (int t = 0; t < rows; ++t) {
            const int qt = q_rows[t](i);
            joint[t](a * q_k[t] + qt)--;
            joint[t](best_b * q_k[t] + qt)++;
          }
          part(i) = best_b;
        }
      }
      if (!moved) break;
    }

    double j_value = 0.0;
    for (int a = 0; a < budget; ++a) j_value += rows * f(sizes(a));
    for (int t = 0; t < rows; ++t) {
      for (int idx = 0; idx < joint[t].size(); ++idx) {
        j_value -= 2.0 * f(joint[t](idx));
      }
    }
    if (j_value < best_j) {
      best_j = j_value;
      best_partition = part;
    }
  }

  int k_final = 0;
  Eigen::VectorXi labels = compress_labels(best_partition, &k_final);
  return labels.array() + 1;  // contiguous labels from 1
}

Eigen::VectorXd grid_axis(const Domain& domain, int dim, int count) {
  if (dim < 0 || dim >= domain.dim()) {
    throw ConfigError("grid axis: dimension out of range");
  }
  if (count < 2) throw ConfigError("grid axis: need at least 2 points");
  Eigen::VectorXd axis(count);
  const double lo = domain.lower()(dim);
  const double hi = domain.upper()(dim);
  for (int i = 0; i < count; ++i) {
    axis(i) = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  }
  return axis;
}

DensityEstimate density_estimate(const std::vector<AtomSnapshot>& snapshots,
                                 const std::vector<Eigen::VectorXd>& axes,
                                 const Domain& domain) {
  if (snapshots.empty()) {
    throw ConfigError("density estimate: no snapshots available");
  }
  const int d = domain.dim();
  if (static_cast<int>(axes.size()) != d || (d != 1 && d != 2)) {
    throw ConfigError(
        "density estimate: need one grid axis per dimension, d = 1 or 2");
  }
  for (const Eigen::VectorXd& axis : axes) {
    if (axis.size() < 2) {
      throw ConfigError("density estimate: each axis needs at least 2 points");
    }
    for (int i = 1; i < axis.size(); ++i) {
      if (!(axis(i) > axis(i - 1))) {
        throw ConfigError("density estimate: axis values must be increasing");
      }
    }
  }

  DensityEstimate out;
  out.grid_covers_domain = true;
  for (int e = 0; e < d; ++e) {
    const double span = domain.upper()(e) - domain.lower()(e);
    if (axes[e](0) > domain.lower()(e) + 1e-9 * span ||
        axes[e](axes[e].size() - 1) < domain.upper()(e) - 1e-9 * span) {
      out.grid_covers_domain = false;
    }
  }

  // Tensor grid, last axis fastest; trapezoid weight per point.
  const Eigen::Index p_total =
      d == 1 ? axes[0].size() : axes[0].size() * axes[1].size();
  out.points.resize(p_total, d);
  Eigen::VectorXd trap_weight(p_total);
  std::vector<Eigen::VectorXd> axis_w(d);
  for (int e = 0; e < d; ++e) {
    const Eigen::VectorXd& ax = axes[e];
    Eigen::VectorXd w = Eigen::VectorXd::Zero(ax.size());
    for (int i = 0; i + 1 < ax.size(); ++i) {
      const double half = 0.5 * (ax(i + 1) - ax(i));
      w(i) += half;
      w(i + 1) += half;
    }
    axis_w[e] = w;
  }
  if (d == 1) {
    out.points.col(0) = axes[0];
    trap_weight = axis_w[0];
  } else {
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < axes[0].size(); ++i) {
      for (Eigen::Index j = 0; j < axes[1].size(); ++j, ++row) {
        out.points(row, 0) = axes[0](i);
        out.points(row, 1) = axes[1](j);
        trap_weight(row) = axis_w[0](i) * axis_w[1](j);
      }
    }
  }

  out.values = Eigen::VectorXd::Zero(p_total);
  out.min_snapshot_mass = std::numeric_limits<double>::infinity();
  out.max_snapshot_mass = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd snapshot_values(p_total);
  for (const AtomSnapshot& snap : snapshots) {
    const int k = static_cast<int>(snap.weights.size());
    if (k < 1) throw ConfigError("density estimate: snapshot with no atoms");
    const double total_weight = snap.weights.sum();
    snapshot_values.setZero();
    for (int h = 0; h < k; ++h) {
      const MvnDensity density(snap.locations.row(h).transpose(),
                               snap.covariances[h]);
      const double weight = snap.weights(h) / total_weight;
      for (Eigen::Index p = 0; p < p_total; ++p) {
        snapshot_values(p) +=
            weight * std::exp(density.log_density(out.points.row(p).transpose()));
      }
    }
    const double mass = trap_weight.dot(snapshot_values);
    out.min_snapshot_mass = std::min(out.min_snapshot_mass, mass);
    out.max_snapshot_mass = std::max(out.max_snapshot_mass, mass);
    out.values += snapshot_values;
  }
  out.values /= static_cast<double>(snapshots.size());
  return out;
}

}  // namespace pdpp
