#include "pdpp/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdpp/csv.hpp"
#include "pdpp/domain.hpp"
#include "pdpp/dpp_sampler.hpp"
#include "pdpp/errors.hpp"
#include "pdpp/kernel.hpp"
#include "pdpp/rng.hpp"
#include "pdpp/summaries.hpp"

namespace pdpp {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string joined(const std::vector<std::string>& parts) {
  std::string text;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) text += "; ";
    text += parts[i];
  }
  return text;
}

std::string chain_dir_name(int chain_index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "chain_%02d", chain_index + 1);
  return buf;
}

void write_trace_csv(const std::string& path, const ChainTrace& trace,
                     int burn_in) {
  const int rows = static_cast<int>(trace.reports.size());
  Eigen::MatrixXd tbl(rows, 6);
  for (int r = 0; r < rows; ++r) {
    const SweepReport& rep = trace.reports[static_cast<std::size_t>(r)];
    tbl(r, 0) = burn_in + r + 1;  // absolute 1-based iteration number
    tbl(r, 1) = rep.k;
    tbl(r, 2) = rep.entropy;
    tbl(r, 3) = rep.u;
    tbl(r, 4) = rep.log_likelihood;
    tbl(r, 5) = rep.proposed_atom_moves > 0
                    ? static_cast<double>(rep.accepted_atom_moves) /
                          static_cast<double>(rep.proposed_atom_moves)
                    : 0.0;
  }
  write_matrix_csv(
      path, {"iteration", "k", "entropy", "u", "log_likelihood",
             "acceptance_rate"},
      tbl);
}

void write_allocations_csv(const std::string& path, const ChainTrace& trace,
                           int burn_in, int thin) {
  const int retained = static_cast<int>(trace.allocations.rows());
  const int n = static_cast<int>(trace.allocations.cols());
  const int rows = (retained + thin - 1) / thin;
  Eigen::MatrixXi tbl(rows, n + 1);
  int r = 0;
  for (int i = 0; i < retained; i += thin, ++r) {
    tbl(r, 0) = burn_in + i + 1;
    for (int c = 0; c < n; ++c) tbl(r, c + 1) = trace.allocations(i, c) + 1;
  }
  std::vector<std::string> header{"iteration"};
  for (int i = 1; i <= n; ++i) header.push_back("obs_" + std::to_string(i));
  write_matrix_csv(path, header, tbl);
}

json ess_report(const Eigen::VectorXd& series, double wall_time_seconds) {
  json entry;
  const int rows = static_cast<int>(series.size());
  if (rows < 10) {
    entry["count"] = nullptr;
    entry["per_iteration"] = nullptr;
    entry["per_second"] = nullptr;
    entry["degenerate"] = false;
    entry["note"] = "fewer than 10 retained iterations";
    return entry;
  }
  const EssResult result = effective_sample_size(series);
  entry["count"] = result.value;
  entry["per_iteration"] = result.value / rows;
  entry["per_second"] = wall_time_seconds > 0.0
                            ? json(result.value / wall_time_seconds)
                            : json(nullptr);
  entry["degenerate"] = result.degenerate;
  return entry;
}

json build_summary(const ChainTrace& trace, const RunConfig& cfg,
                   std::uint64_t chain_seed, const std::string& density_file) {
  const int retained = static_cast<int>(trace.reports.size());
  Eigen::VectorXd k_series(retained);
  Eigen::VectorXd entropy_series(retained);
  for (int r = 0; r < retained; ++r) {
    k_series(r) = trace.reports[static_cast<std::size_t>(r)].k;
    entropy_series(r) = trace.reports[static_cast<std::size_t>(r)].entropy;
  }

  json out;
  out["sampler"] = sampler_kind_name(trace.kind);
  out["iterations"] = cfg.iterations;
  out["burn_in"] = cfg.burn_in;
  out["thin"] = cfg.thin;
  out["seed"] = chain_seed;
  out["n"] = trace.n;
  out["m"] = trace.m;
  out["retained_iterations"] = retained;

  const Eigen::VectorXd hist = k_posterior(trace);
  out["k_posterior"] =
      std::vector<double>(hist.data(), hist.data() + hist.size());
  out["k_mode"] = k_mode(hist);

  json ess;
  ess["k"] = ess_report(k_series, trace.wall_time_seconds);
  ess["entropy"] = ess_report(entropy_series, trace.wall_time_seconds);
  out["ess"] = ess;

  const Eigen::VectorXi partition = point_estimate_vi(trace.allocations);
  out["point_partition"] =
      std::vector<int>(partition.data(), partition.data() + partition.size());
  out["wall_time_seconds"] = trace.wall_time_seconds;
  if (!density_file.empty()) out["density_file"] = density_file;
  return out;
}

// Returns the density file name (relative to the chain directory) when a
// density grid was written, otherwise an empty string.
std::string maybe_write_density(const fs::path& dir, const ChainTrace& trace,
                                const RunConfig& cfg, const Domain& domain) {
  if (!cfg.density_requested) return "";
  if (trace.snapshots.empty()) {
    std::fprintf(stderr,
                 "warning: density requested but no snapshots were retained; "
                 "skipping density.csv\n");
    return "";
  }
  const int d = domain.dim();
  std::vector<Eigen::VectorXd> axes;
  axes.reserve(static_cast<std::size_t>(d));
  for (int e = 0; e < d; ++e) {
    axes.push_back(grid_axis(domain, e, cfg.density_points));
  }
  const DensityEstimate est = density_estimate(trace.snapshots, axes, domain);
  Eigen::MatrixXd tbl(est.points.rows(), d + 1);
  tbl.leftCols(d) = est.points;
  tbl.col(d) = est.values;
  std::vector<std::string> header;
  for (int e = 1; e <= d; ++e) header.push_back("x" + std::to_string(e));
  header.push_back("density");
  write_matrix_csv((dir / "density.csv").string(), header, tbl);
  if (est.min_snapshot_mass < 0.99 || est.max_snapshot_mass > 1.01) {
    std::fprintf(stderr,
                 "warning: density grid mass range [%g, %g]; the grid may be "
                 "too coarse\n",
                 est.min_snapshot_mass, est.max_snapshot_mass);
  }
  return "density.csv";
}

int cmd_simulate(const std::string& generator, int n, std::uint64_t seed,
                 const std::string& output) {
  RandomStream rng(seed);
  const SimulatedData sim = simulate_benchmark(generator, n, rng);
  std::vector<std::string> header;
  for (int e = 1; e <= sim.y.cols(); ++e) {
    header.push_back("y" + std::to_string(e));
  }
  write_matrix_csv(output, header, sim.y);
  return 0;
}

int cmd_fit(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) throw DataError("cannot open config file '" + config_path + "'");
  const std::string text{std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>()};
  const RunConfig cfg = parse_run_config(text);

  const Eigen::MatrixXd y = read_matrix_csv(cfg.input_path);
  const Dataset data = make_dataset(y);
  const Hyperparameters hyper =
      cfg.hyper.apply(default_hyperparameters(data.d()));
  hyper.validate(data.d());
  if (cfg.density_requested && data.d() > 2) {
    throw ConfigError(
        "config: density output supports 1- and 2-dimensional data only");
  }
  const Domain domain = build_domain(data, hyper.domain_expansion);

  fs::create_directories(cfg.output_dir);

  const int n_chains = cfg.chains;
  std::vector<std::exception_ptr> failures(
      static_cast<std::size_t>(n_chains));
  std::atomic<int> next(0);
  auto work = [&]() {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= n_chains) return;
      try {
        RunOptions opt;
        opt.sampler.kind = cfg.sampler;
        opt.sampler.mc_integral_points = cfg.mc_integral_points;
        opt.iterations = cfg.iterations;
        opt.burn_in = cfg.burn_in;
        opt.seed = cfg.seed + static_cast<std::uint64_t>(idx);
        opt.snapshot_stride = cfg.snapshot_stride;
        const ChainTrace trace = run_chain(data, hyper, opt);

        const fs::path dir = fs::path(cfg.output_dir) / chain_dir_name(idx);
        fs::create_directories(dir);
        write_trace_csv((dir / "trace.csv").string(), trace, cfg.burn_in);
        write_allocations_csv((dir / "allocations.csv").string(), trace,
                              cfg.burn_in, cfg.thin);
        const std::string density_file =
            maybe_write_density(dir, trace, cfg, domain);
        const json summary = build_summary(trace, cfg, opt.seed, density_file);
        const fs::path summary_path = dir / "summary.json";
        std::ofstream out(summary_path);
        out << summary.dump(2) << "\n";
        if (!out) {
          throw DataError("cannot write '" + summary_path.string() + "'");
        }
      } catch (...) {
        failures[static_cast<std::size_t>(idx)] = std::current_exception();
      }
    }
  };
  const int n_workers =
      std::min(cfg.workers == 0 ? n_chains : cfg.workers, n_chains);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_workers));
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  for (int i = 0; i < n_chains; ++i) {
    if (failures[static_cast<std::size_t>(i)]) {
      std::rethrow_exception(failures[static_cast<std::size_t>(i)]);
    }
  }
  return 0;
}

int cmd_prior_sample(int ell, int dim, int draws, std::uint64_t seed,
                     std::vector<double> lower, std::vector<double> upper,
                     const std::string& output) {
  if (dim < 1) throw ConfigError("prior-sample: --dim must be at least 1");
  if (draws < 1) throw ConfigError("prior-sample: --draws must be at least 1");
  auto expand = [&](std::vector<double> v, double fallback,
                    const char* name) {
    if (v.empty()) {
      v.assign(static_cast<std::size_t>(dim), fallback);
    } else if (v.size() == 1) {
      v.assign(static_cast<std::size_t>(dim), v[0]);
    } else if (static_cast<int>(v.size()) != dim) {
      throw ConfigError(std::string("prior-sample: ") + name +
                        " needs 1 value or one per dimension");
    }
    return v;
  };
  lower = expand(std::move(lower), 0.0, "--lower");
  upper = expand(std::move(upper), 1.0, "--upper");
  const Domain domain(
      Eigen::Map<const Eigen::VectorXd>(lower.data(), dim),
      Eigen::Map<const Eigen::VectorXd>(upper.data(), dim));
  const FourierProjectionKernel kernel(domain, ell);
  const int m = kernel.rank();

  RandomStream rng(seed);
  Eigen::MatrixXd tbl(draws, 1 + m * dim);
  for (int r = 0; r < draws; ++r) {
    const DppSample sample = sample_projection_dpp(kernel, rng);
    tbl(r, 0) = r + 1;
    for (int i = 0; i < m; ++i) {
      for (int e = 0; e < dim; ++e) {
        tbl(r, 1 + i * dim + e) = sample.points(i, e);
      }
    }
  }
  std::vector<std::string> header{"draw"};
  for (int i = 1; i <= m; ++i) {
    for (int e = 1; e <= dim; ++e) {
      header.push_back("p" + std::to_string(i) + "_" + std::to_string(e));
    }
  }
  write_matrix_csv(output, header, tbl);
  return 0;
}

int cmd_diagnose(const std::vector<std::string>& trace_paths,
                 const std::string& output) {
  json chains = json::array();
  std::vector<std::map<int, double>> k_hists;

  for (const std::string& path : trace_paths) {
    std::vector<std::string> header;
    const Eigen::MatrixXd tbl = read_matrix_csv(path, &header);
    auto column = [&](const std::string& name) {
      for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == name) return static_cast<int>(c);
      }
      throw DataError("diagnose: " + path + ": missing column '" + name +
                      "'");
    };
    const int k_col = column("k");
    const int entropy_col = column("entropy");
    const int rows = static_cast<int>(tbl.rows());
    if (rows < 1) throw DataError("diagnose: " + path + ": no data rows");

    const Eigen::VectorXd k_series = tbl.col(k_col);
    const Eigen::VectorXd entropy_series = tbl.col(entropy_col);
    std::map<int, double> hist;
    for (int r = 0; r < rows; ++r) {
      const double kv = k_series(r);
      // Header occupies line 1, so data row r lives on line r + 2.
      if (!(kv >= 1.0) || std::abs(kv - std::round(kv)) > 1e-9) {
        throw DataError("diagnose: " + path + ":" + std::to_string(r + 2) +
                        ": k value '" + format_double(kv) +
                        "' is not a positive integer");
      }
      hist[static_cast<int>(std::llround(kv))] += 1.0;
    }
    for (auto& entry : hist) entry.second /= rows;
    k_hists.push_back(hist);

    double wall = -1.0;
    const fs::path sibling = fs::path(path).parent_path() / "summary.json";
    if (fs::exists(sibling)) {
      std::ifstream in(sibling);
      try {
        const json s = json::parse(in);
        if (s.contains("wall_time_seconds") &&
            s["wall_time_seconds"].is_number()) {
          wall = s["wall_time_seconds"].get<double>();
        }
      } catch (const json::exception&) {
        // A malformed sibling summary only suppresses the per-second rates.
      }
    }

    json entry;
    entry["trace"] = path;
    entry["iterations"] = rows;
    entry["ess"]["k"] = ess_report(k_series, wall);
    entry["ess"]["entropy"] = ess_report(entropy_series, wall);
    chains.push_back(entry);
  }

  json report;
  report["chains"] = chains;
  if (k_hists.size() >= 2) {
    json pairs = json::array();
    double max_tv = 0.0;
    for (std::size_t i = 0; i < k_hists.size(); ++i) {
      for (std::size_t j = i + 1; j < k_hists.size(); ++j) {
        std::set<int> support;
        for (const auto& kv : k_hists[i]) support.insert(kv.first);
        for (const auto& kv : k_hists[j]) support.insert(kv.first);
        double tv = 0.0;
        for (int k : support) {
          const auto a = k_hists[i].find(k);
          const auto b = k_hists[j].find(k);
          const double pa = a == k_hists[i].end() ? 0.0 : a->second;
          const double pb = b == k_hists[j].end() ? 0.0 : b->second;
          tv += std::abs(pa - pb);
        }
        tv *= 0.5;
        max_tv = std::max(max_tv, tv);
        pairs.push_back({{"chain_a", i + 1}, {"chain_b", j + 1}, {"tv", tv}});
      }
    }
    report["k_posterior_tv"] = {{"max", max_tv}, {"pairs", pairs}};
  } else {
    report["k_posterior_tv"] = nullptr;
  }

  const std::string text = report.dump(2) + "\n";
  if (output.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    std::ofstream out(output);
    out << text;
    if (!out) throw DataError("cannot write '" + output + "'");
  }
  return 0;
}

}  // namespace

Hyperparameters HyperOverrides::apply(Hyperparameters base) const {
  if (a_s) base.a_s = *a_s;
  if (ell) base.ell = *ell;
  if (tau) base.tau = *tau;
  if (omega) base.omega = *omega;
  if (domain_expansion) base.domain_expansion = *domain_expansion;
  if (proposal_local_weight) base.proposal_local_weight = *proposal_local_weight;
  if (proposal_local_var) base.proposal_local_var = *proposal_local_var;
  if (neal8_T) base.neal8_T = *neal8_T;
  return base;
}

RunConfig parse_run_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config: top-level value must be an object");
  }

  RunConfig cfg;
  std::vector<std::string> problems;
  auto note = [&problems](std::string msg) {
    problems.push_back(std::move(msg));
  };

  static const std::set<std::string> known{
      "input",   "output_dir", "sampler",         "iterations",
      "burn_in", "thin",       "seed",            "chains",
      "workers", "snapshot_stride", "mc_integral_points",
      "hyperparameters", "density"};
  for (const auto& item : doc.items()) {
    if (known.find(item.key()) == known.end()) {
      note("unknown field '" + item.key() + "'");
    }
  }

  auto take_string = [&](const char* key, std::string* out) {
    if (!doc.contains(key)) {
      note(std::string("'") + key + "' is required");
      return;
    }
    if (!doc[key].is_string() || doc[key].get<std::string>().empty()) {
      note(std::string("'") + key + "' must be a non-empty string");
      return;
    }
    *out = doc[key].get<std::string>();
  };
  take_string("input", &cfg.input_path);
  take_string("output_dir", &cfg.output_dir);

  auto take_count = [&](const json& obj, const std::string& prefix,
                        const char* key, long long lo, long long hi,
                        int* out) {
    if (!obj.contains(key)) return true;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
      note(prefix + "'" + key + "' must be an integer");
      return false;
    }
    const long long x = v.get<long long>();
    if (x < lo || x > hi) {
      note(prefix + "'" + key + "' must be in [" + std::to_string(lo) + ", " +
           std::to_string(hi) + "], got " + std::to_string(x));
      return false;
    }
    *out = static_cast<int>(x);
    return true;
  };

  take_count(doc, "", "iterations", 1, 1000000000, &cfg.iterations);
  take_count(doc, "", "burn_in", 0, 1000000000, &cfg.burn_in);
  take_count(doc, "", "thin", 1, 1000000000, &cfg.thin);
  take_count(doc, "", "chains", 1, 4096, &cfg.chains);
  take_count(doc, "", "workers", 0, 4096, &cfg.workers);
  take_count(doc, "", "snapshot_stride", 0, 1000000000,
             &cfg.snapshot_stride);
  take_count(doc, "", "mc_integral_points", 1, 100000000,
             &cfg.mc_integral_points);

  if (doc.contains("seed")) {
    const json& v = doc["seed"];
    if (v.is_number_unsigned()) {
      cfg.seed = v.get<std::uint64_t>();
    } else if (v.is_number_integer() && v.get<long long>() >= 0) {
      cfg.seed = static_cast<std::uint64_t>(v.get<long long>());
    } else {
      note("'seed' must be a non-negative integer");
    }
  }

  if (doc.contains("sampler")) {
    if (!doc["sampler"].is_string()) {
      note("'sampler' must be a string");
    } else {
      try {
        cfg.sampler = sampler_kind_from_name(doc["sampler"].get<std::string>());
      } catch (const ConfigError& e) {
        note(e.what());
      }
    }
  }

  if (doc.contains("hyperparameters")) {
    const json& h = doc["hyperparameters"];
    if (!h.is_object()) {
      note("'hyperparameters' must be an object");
    } else {
      static const std::set<std::string> hyper_known{
          "a_s",    "ell",
          "tau",    "omega",
          "domain_expansion", "proposal_local_weight",
          "proposal_local_var", "neal8_T"};
      for (const auto& item : h.items()) {
        if (hyper_known.find(item.key()) == hyper_known.end()) {
          note("hyperparameters: unknown field '" + item.key() + "'");
        }
      }
      auto take_number = [&](const char* key, std::optional<double>* out) {
        if (!h.contains(key)) return;
        if (!h.at(key).is_number()) {
          note(std::string("hyperparameters: '") + key +
               "' must be a number");
          return;
        }
        *out = h.at(key).get<double>();
      };
      take_number("a_s", &cfg.hyper.a_s);
      take_number("tau", &cfg.hyper.tau);
      take_number("domain_expansion", &cfg.hyper.domain_expansion);
      take_number("proposal_local_weight", &cfg.hyper.proposal_local_weight);
      take_number("proposal_local_var", &cfg.hyper.proposal_local_var);

      auto take_opt_count = [&](const char* key, long long lo, long long hi,
                                std::optional<int>* out) {
        if (!h.contains(key)) return;
        int value = 0;
        if (take_count(h, "hyperparameters: ", key, lo, hi, &value)) {
          *out = value;
        }
      };
      take_opt_count("ell", 0, 64, &cfg.hyper.ell);
      take_opt_count("neal8_T", 1, 100000, &cfg.hyper.neal8_T);

      if (h.contains("omega")) {
        const json& om = h["omega"];
        bool ok = false;
        if (om.is_number()) {
          Eigen::MatrixXd w(1, 1);
          w(0, 0) = om.get<double>();
          cfg.hyper.omega = w;
          ok = true;
        } else if (om.is_array() && !om.empty()) {
          const int dim = static_cast<int>(om.size());
          Eigen::MatrixXd w(dim, dim);
          ok = true;
          for (int r = 0; r < dim && ok; ++r) {
            const json& row = om[static_cast<std::size_t>(r)];
            if (!row.is_array() || static_cast<int>(row.size()) != dim) {
              ok = false;
              break;
            }
            for (int c = 0; c < dim; ++c) {
              if (!row[static_cast<std::size_t>(c)].is_number()) {
                ok = false;
                break;
              }
              w(r, c) = row[static_cast<std::size_t>(c)].get<double>();
            }
          }
          if (ok) cfg.hyper.omega = w;
        }
        if (!ok) {
          note("hyperparameters: 'omega' must be a number or a square array "
               "of numeric arrays");
        }
      }
    }
  }

  if (doc.contains("density")) {
    const json& dj = doc["density"];
    if (dj.is_boolean()) {
      cfg.density_requested = dj.get<bool>();
    } else if (dj.is_object()) {
      cfg.density_requested = true;
      for (const auto& item : dj.items()) {
        if (item.key() != "enabled" && item.key() != "points") {
          note("density: unknown field '" + item.key() + "'");
        }
      }
      if (dj.contains("enabled")) {
        if (!dj["enabled"].is_boolean()) {
          note("density: 'enabled' must be a boolean");
        } else {
          cfg.density_requested = dj["enabled"].get<bool>();
        }
      }
      take_count(dj, "density: ", "points", 2, 10000000,
                 &cfg.density_points);
    } else {
      note("'density' must be a boolean or an object");
    }
  }

  if (cfg.iterations <= cfg.burn_in) {
    note("iterations (" + std::to_string(cfg.iterations) +
         ") must exceed burn_in (" + std::to_string(cfg.burn_in) + ")");
  }
  if (cfg.density_requested && cfg.snapshot_stride <= 0) {
    note("density output requires snapshot_stride >= 1");
  }

  if (!problems.empty()) {
    throw ConfigError("config: " + joined(problems));
  }
  return cfg;
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{
      "Repulsive Gaussian mixture sampler driven by a projection "
      "determinantal point process"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand(
      "simulate", "Draw a benchmark dataset and write it as CSV");
  std::string sim_generator;
  int sim_n = 300;
  std::uint64_t sim_seed = 1;
  std::string sim_output;
  sim->add_option("--generator", sim_generator,
                  "one of: t3_1d, t3_2d, t3_4d")
      ->required();
  sim->add_option("--n", sim_n, "number of observations")->required();
  sim->add_option("--seed", sim_seed, "random seed");
  sim->add_option("--output", sim_output, "output CSV path")->required();

  auto* fit =
      app.add_subcommand("fit", "Run MCMC chains from a JSON config file");
  std::string fit_config;
  fit->add_option("--config", fit_config, "JSON configuration file")
      ->required();

  auto* prior = app.add_subcommand(
      "prior-sample",
      "Draw point configurations from the repulsive location prior");
  int prior_ell = 1;
  int prior_dim = 1;
  int prior_draws = 1;
  std::uint64_t prior_seed = 1;
  std::vector<double> prior_lower;
  std::vector<double> prior_upper;
  std::string prior_output;
  prior->add_option("--ell", prior_ell,
                    "per-axis frequency cutoff; rank is (2*ell+1)^dim");
  prior->add_option("--dim", prior_dim, "domain dimension");
  prior->add_option("--draws", prior_draws, "number of configurations");
  prior->add_option("--seed", prior_seed, "random seed");
  prior->add_option("--lower", prior_lower,
                    "domain lower bounds (one value or one per dimension)");
  prior->add_option("--upper", prior_upper,
                    "domain upper bounds (one value or one per dimension)");
  prior->add_option("--output", prior_output, "output CSV path")->required();

  auto* diag = app.add_subcommand(
      "diagnose", "Efficiency report for one or more trace files");
  std::vector<std::string> diag_traces;
  std::string diag_output;
  diag->add_option("--trace", diag_traces, "trace.csv path (repeatable)")
      ->required();
  diag->add_option("--output", diag_output, "report path (default: stdout)");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("pdpp");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) {
      if (sim_n < 1) throw ConfigError("simulate: --n must be at least 1");
      return cmd_simulate(sim_generator, sim_n, sim_seed, sim_output);
    }
    if (fit->parsed()) return cmd_fit(fit_config);
    if (prior->parsed()) {
      return cmd_prior_sample(prior_ell, prior_dim, prior_draws, prior_seed,
                              prior_lower, prior_upper, prior_output);
    }
    if (diag->parsed()) return cmd_diagnose(diag_traces, diag_output);
    std::fputs("error: no subcommand given\n", stderr);
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 4;
  }
}

}  // namespace pdpp
