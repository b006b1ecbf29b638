#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pdpp/mixture.hpp"
#include "pdpp/samplers.hpp"

namespace pdpp {

// Hyperparameter fields given explicitly in a fit configuration. Fields left
// unset fall back to the dimension-dependent defaults once the data
// dimension is known.
struct HyperOverrides {
  std::optional<double> a_s;
  std::optional<int> ell;
  std::optional<double> tau;
  std::optional<Eigen::MatrixXd> omega;
  std::optional<double> domain_expansion;
  std::optional<double> proposal_local_weight;
  std::optional<double> proposal_local_var;
  std::optional<int> neal8_T;

  // Applies the explicit fields on top of `base` and returns the result.
  Hyperparameters apply(Hyperparameters base) const;
};

// Fully resolved fit configuration (defaults applied, not yet validated
// against the data dimension).
struct RunConfig {
  std::string input_path;
  std::string output_dir;
  SamplerKind sampler = SamplerKind::marginal_b;
  int iterations = 10000;
  int burn_in = 5000;
  int thin = 1;
  std::uint64_t seed = 1;
  int chains = 1;
  int workers = 0;  // 0: one worker per chain
  int snapshot_stride = 10;
  int mc_integral_points = 2048;
  HyperOverrides hyper;
  bool density_requested = false;
  int density_points = 1001;  // grid points per axis
};

// Parses and structurally validates a fit configuration document. Collects
// every violation and reports them together in one ConfigError.
RunConfig parse_run_config(const std::string& json_text);

// Entry point used by main(); returns the process exit code:
// 0 success, 2 configuration/usage error, 3 data error, 4 numerical failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace pdpp
