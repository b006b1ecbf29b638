#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "pdpp/cli.hpp"
#include "pdpp/csv.hpp"
#include "pdpp/errors.hpp"
#include "pdpp/mixture.hpp"
#include "pdpp/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pdpp;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "pdpp_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

int line_count(const std::string& text) {
  int lines = 0;
  for (const char c : text) {
    if (c == '\n') ++lines;
  }
  return lines;
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

}  // namespace

TEST_CASE("run config: defaults fill in around the required fields") {
  const RunConfig cfg =
      parse_run_config(R"({"input": "a.csv", "output_dir": "out"})");
  CHECK(cfg.input_path == "a.csv");
  CHECK(cfg.output_dir == "out");
  CHECK(cfg.sampler == SamplerKind::marginal_b);
  CHECK(cfg.iterations == 10000);
  CHECK(cfg.burn_in == 5000);
  CHECK(cfg.thin == 1);
  CHECK(cfg.seed == 1);
  CHECK(cfg.chains == 1);
  CHECK(cfg.workers == 0);
  CHECK(cfg.snapshot_stride == 10);
  CHECK(cfg.mc_integral_points == 2048);
  CHECK_FALSE(cfg.density_requested);
  CHECK(cfg.density_points == 1001);
  CHECK_FALSE(cfg.hyper.a_s.has_value());
  CHECK_FALSE(cfg.hyper.omega.has_value());
}

TEST_CASE("run config: every violation is reported at once") {
  try {
    parse_run_config(R"({
      "output_dir": "out",
      "iterations": 0,
      "thin": 0,
      "sampler": "bogus",
      "mystery": 1
    })");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("config: ") == 0);
    CHECK(msg.find("'input' is required") != std::string::npos);
    CHECK(msg.find("'iterations' must be in") != std::string::npos);
    CHECK(msg.find("'thin' must be in") != std::string::npos);
    CHECK(msg.find("bogus") != std::string::npos);
    CHECK(msg.find("unknown field 'mystery'") != std::string::npos);
    CHECK(msg.find("; ") != std::string::npos);
  }
}

TEST_CASE("run config: iteration budget and density preconditions") {
  try {
    parse_run_config(R"({
      "input": "a.csv", "output_dir": "o",
      "iterations": 100, "burn_in": 100,
      "snapshot_stride": 0, "density": true
    })");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("iterations (100) must exceed burn_in (100)") !=
          std::string::npos);
    CHECK(msg.find("density output requires snapshot_stride >= 1") !=
          std::string::npos);
  }
}

TEST_CASE("run config: hyperparameter block and omega forms") {
  const RunConfig cfg = parse_run_config(R"({
    "input": "a.csv", "output_dir": "o",
    "sampler": "marginal_a",
    "hyperparameters": {
      "a_s": 0.7, "ell": 2, "tau": 4.0,
      "omega": [[2.0, 0.5], [0.5, 3.0]],
      "neal8_T": 7
    },
    "density": {"enabled": true, "points": 501}
  })");
  CHECK(cfg.sampler == SamplerKind::marginal_a);
  REQUIRE(cfg.hyper.a_s.has_value());
  CHECK(*cfg.hyper.a_s == doctest::Approx(0.7));
  REQUIRE(cfg.hyper.ell.has_value());
  CHECK(*cfg.hyper.ell == 2);
  REQUIRE(cfg.hyper.omega.has_value());
  CHECK(cfg.hyper.omega->rows() == 2);
  CHECK((*cfg.hyper.omega)(0, 1) == doctest::Approx(0.5));
  REQUIRE(cfg.hyper.neal8_T.has_value());
  CHECK(*cfg.hyper.neal8_T == 7);
  CHECK(cfg.density_requested);
  CHECK(cfg.density_points == 501);

  // Scalar omega becomes a 1 x 1 matrix.
  const RunConfig scalar = parse_run_config(R"({
    "input": "a.csv", "output_dir": "o",
    "hyperparameters": {"omega": 4.5}
  })");
  REQUIRE(scalar.hyper.omega.has_value());
  CHECK(scalar.hyper.omega->rows() == 1);
  CHECK((*scalar.hyper.omega)(0, 0) == doctest::Approx(4.5));

  // Ragged omega is rejected.
  CHECK_THROWS_AS(parse_run_config(R"({
    "input": "a.csv", "output_dir": "o",
    "hyperparameters": {"omega": [[1.0, 2.0]]}
  })"),
                  ConfigError);

  // Unknown hyperparameter key.
  CHECK_THROWS_AS(parse_run_config(R"({
    "input": "a.csv", "output_dir": "o",
    "hyperparameters": {"a": 1.0}
  })"),
                  ConfigError);

  // Invalid JSON.
  CHECK_THROWS_AS(parse_run_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[1, 2]"), ConfigError);
}

TEST_CASE("hyperparameter overrides apply on top of the defaults") {
  HyperOverrides over;
  over.a_s = 0.7;
  over.ell = 2;
  const Hyperparameters base = default_hyperparameters(1);
  const Hyperparameters merged = over.apply(base);
  CHECK(merged.a_s == doctest::Approx(0.7));
  CHECK(merged.ell == 2);
  CHECK(merged.tau == doctest::Approx(base.tau));
  CHECK(merged.omega(0, 0) == doctest::Approx(base.omega(0, 0)));
  CHECK(merged.neal8_T == base.neal8_T);
}

TEST_CASE("simulate subcommand is deterministic and round-trips") {
  const fs::path dir = fresh_dir("simulate");
  const fs::path p1 = dir / "a.csv";
  const fs::path p2 = dir / "b.csv";

  CHECK(run_cli({"simulate", "--generator", "t3_1d", "--n", "12", "--seed",
                 "3", "--output", p1.string()}) == 0);
  CHECK(run_cli({"simulate", "--generator", "t3_1d", "--n", "12", "--seed",
                 "3", "--output", p2.string()}) == 0);
  const std::string text = slurp(p1);
  CHECK(text == slurp(p2));
  CHECK(first_line(text) == "y1");
  CHECK(line_count(text) == 13);  // header + 12 rows

  // Written values read back bit-for-bit.
  std::vector<std::string> header;
  const Eigen::MatrixXd back = read_matrix_csv(p1.string(), &header);
  RandomStream rng(3);
  const SimulatedData sim = simulate_benchmark("t3_1d", 12, rng);
  REQUIRE(back.rows() == 12);
  CHECK((back - sim.y).cwiseAbs().maxCoeff() == 0.0);

  // Two-dimensional generator writes one column per coordinate.
  const fs::path p3 = dir / "c.csv";
  CHECK(run_cli({"simulate", "--generator", "t3_2d", "--n", "4", "--seed",
                 "1", "--output", p3.string()}) == 0);
  CHECK(first_line(slurp(p3)) == "y1,y2");

  CHECK(run_cli({"simulate", "--generator", "nope", "--n", "4", "--seed",
                 "1", "--output", (dir / "d.csv").string()}) == 2);
  CHECK(run_cli({"simulate", "--generator", "t3_1d", "--n", "0", "--seed",
                 "1", "--output", (dir / "e.csv").string()}) == 2);
}

TEST_CASE("fit subcommand writes the full per-chain layout") {
  const fs::path dir = fresh_dir("fit");
  const fs::path data = dir / "data.csv";
  REQUIRE(run_cli({"simulate", "--generator", "t3_1d", "--n", "40", "--seed",
                   "5", "--output", data.string()}) == 0);

  const fs::path out = dir / "run";
  json cfg;
  cfg["input"] = data.string();
  cfg["output_dir"] = out.string();
  cfg["sampler"] = "conditional";
  cfg["iterations"] = 80;
  cfg["burn_in"] = 30;
  cfg["thin"] = 2;
  cfg["seed"] = 9;
  cfg["chains"] = 2;
  cfg["snapshot_stride"] = 5;
  cfg["hyperparameters"] = {{"a_s", 0.3}, {"ell", 1}};
  cfg["density"] = {{"enabled", true}, {"points", 51}};
  const fs::path cfg_path = dir / "config.json";
  spit(cfg_path, cfg.dump());

  CHECK(run_cli({"fit", "--config", cfg_path.string()}) == 0);

  for (const std::string chain : {"chain_01", "chain_02"}) {
    const fs::path cdir = out / chain;
    REQUIRE(fs::exists(cdir / "trace.csv"));
    REQUIRE(fs::exists(cdir / "allocations.csv"));
    REQUIRE(fs::exists(cdir / "summary.json"));
    REQUIRE(fs::exists(cdir / "density.csv"));

    const std::string trace = slurp(cdir / "trace.csv");
    CHECK(first_line(trace) ==
          "iteration,k,entropy,u,log_likelihood,acceptance_rate");
    CHECK(line_count(trace) == 51);  // header + 50 retained iterations

    std::vector<std::string> theader;
    const Eigen::MatrixXd ttbl =
        read_matrix_csv((cdir / "trace.csv").string(), &theader);
    CHECK(ttbl(0, 0) == doctest::Approx(31.0));  // first kept iteration
    CHECK(ttbl(49, 0) == doctest::Approx(80.0));

    std::vector<std::string> aheader;
    const Eigen::MatrixXd atbl =
        read_matrix_csv((cdir / "allocations.csv").string(), &aheader);
    CHECK(atbl.rows() == 25);  // every second retained iteration
    REQUIRE(aheader.size() == 41);
    CHECK(aheader[0] == "iteration");
    CHECK(aheader[1] == "obs_1");
    CHECK(aheader[40] == "obs_40");
    CHECK(atbl.rightCols(40).minCoeff() >= 1.0);  // serialized 1-based
    CHECK(atbl.rightCols(40).maxCoeff() <= 3.0);  // m = 3 for ell = 1

    const json summary = json::parse(slurp(cdir / "summary.json"));
    CHECK(summary["sampler"] == "conditional");
    CHECK(summary["retained_iterations"] == 50);
    CHECK(summary["n"] == 40);
    CHECK(summary["m"] == 3);
    CHECK(summary["k_posterior"].size() == 3);
    CHECK(summary["k_mode"].is_number_integer());
    CHECK(summary["ess"]["entropy"].contains("per_iteration"));
    CHECK(summary["point_partition"].size() == 40);
    CHECK(summary["density_file"] == "density.csv");
    CHECK(summary["wall_time_seconds"].is_number());
    const int expected_seed = summary["seed"].get<int>();
    CHECK(expected_seed == (chain == "chain_01" ? 9 : 10));

    const std::string density = slurp(cdir / "density.csv");
    CHECK(first_line(density) == "x1,density");
    CHECK(line_count(density) == 52);  // header + 51 grid rows
  }

  // The two chains use different seeds and must not be identical.
  CHECK(slurp(out / "chain_01" / "trace.csv") !=
        slurp(out / "chain_02" / "trace.csv"));
}

TEST_CASE("fit subcommand maps failures onto exit codes") {
  const fs::path dir = fresh_dir("fit_errors");

  // Missing config file: a data error.
  CHECK(run_cli({"fit", "--config", (dir / "nope.json").string()}) == 3);

  // Config violations: a config error.
  const fs::path bad = dir / "bad.json";
  spit(bad, R"({"input": "x.csv", "output_dir": "o", "iterations": 10,
                "burn_in": 10})");
  CHECK(run_cli({"fit", "--config", bad.string()}) == 2);

  // Valid config pointing at a missing dataset: a data error.
  const fs::path missing_data = dir / "missing_data.json";
  spit(missing_data, json{{"input", (dir / "absent.csv").string()},
                          {"output_dir", (dir / "o").string()},
                          {"iterations", 20},
                          {"burn_in", 5}}
                         .dump());
  CHECK(run_cli({"fit", "--config", missing_data.string()}) == 3);

  // Density is limited to one or two dimensions.
  const fs::path data4 = dir / "d4.csv";
  REQUIRE(run_cli({"simulate", "--generator", "t3_4d", "--n", "10", "--seed",
                   "2", "--output", data4.string()}) == 0);
  const fs::path density4 = dir / "density4.json";
  spit(density4, json{{"input", data4.string()},
                      {"output_dir", (dir / "o4").string()},
                      {"iterations", 20},
                      {"burn_in", 5},
                      {"density", true}}
                     .dump());
  CHECK(run_cli({"fit", "--config", density4.string()}) == 2);

  // Hyperparameters that fail joint validation: a config error.
  const fs::path data1 = dir / "d1.csv";
  REQUIRE(run_cli({"simulate", "--generator", "t3_1d", "--n", "10", "--seed",
                   "2", "--output", data1.string()}) == 0);
  const fs::path badhyper = dir / "badhyper.json";
  spit(badhyper, json{{"input", data1.string()},
                      {"output_dir", (dir / "oh").string()},
                      {"iterations", 20},
                      {"burn_in", 5},
                      {"hyperparameters", {{"a_s", -1.0}}}}
                     .dump());
  CHECK(run_cli({"fit", "--config", badhyper.string()}) == 2);
}

TEST_CASE("prior-sample subcommand writes one configuration per row") {
  const fs::path dir = fresh_dir("prior");
  const fs::path out = dir / "draws.csv";
  CHECK(run_cli({"prior-sample", "--ell", "1", "--dim", "1", "--draws", "5",
                 "--seed", "4", "--lower", "-2", "--upper", "2", "--output",
                 out.string()}) == 0);
  const std::string text = slurp(out);
  CHECK(first_line(text) == "draw,p1_1,p2_1,p3_1");
  CHECK(line_count(text) == 6);

  std::vector<std::string> header;
  const Eigen::MatrixXd tbl = read_matrix_csv(out.string(), &header);
  REQUIRE(tbl.rows() == 5);
  REQUIRE(tbl.cols() == 4);
  for (int r = 0; r < 5; ++r) {
    CHECK(tbl(r, 0) == doctest::Approx(r + 1.0));
    for (int c = 1; c < 4; ++c) {
      CHECK(tbl(r, c) >= -2.0);
      CHECK(tbl(r, c) <= 2.0);
    }
  }

  // Mismatched bounds length and invalid counts.
  CHECK(run_cli({"prior-sample", "--dim", "2", "--draws", "1", "--lower",
                 "-1", "--upper", "1", "--upper", "2", "--upper", "3",
                 "--output", (dir / "x.csv").string()}) == 2);
  CHECK(run_cli({"prior-sample", "--draws", "0", "--output",
                 (dir / "y.csv").string()}) == 2);
}

TEST_CASE("diagnose subcommand summarizes traces and compares chains") {
  const fs::path dir = fresh_dir("diagnose");
  const fs::path data = dir / "data.csv";
  REQUIRE(run_cli({"simulate", "--generator", "t3_1d", "--n", "30", "--seed",
                   "7", "--output", data.string()}) == 0);
  const fs::path out = dir / "run";
  spit(dir / "config.json", json{{"input", data.string()},
                                 {"output_dir", out.string()},
                                 {"sampler", "marginal_b"},
                                 {"iterations", 60},
                                 {"burn_in", 20},
                                 {"chains", 2},
                                 {"hyperparameters", {{"ell", 1}}}}
                                .dump());
  REQUIRE(run_cli({"fit", "--config", (dir / "config.json").string()}) == 0);

  const fs::path report_path = dir / "report.json";
  CHECK(run_cli({"diagnose", "--trace",
                 (out / "chain_01" / "trace.csv").string(), "--trace",
                 (out / "chain_02" / "trace.csv").string(), "--output",
                 report_path.string()}) == 0);
  const json report = json::parse(slurp(report_path));
  REQUIRE(report["chains"].size() == 2);
  CHECK(report["chains"][0]["iterations"] == 40);
  CHECK(report["chains"][0]["ess"].contains("k"));
  CHECK(report["chains"][0]["ess"].contains("entropy"));
  // Wall time is available from the sibling summary, so rates are numbers.
  CHECK(report["chains"][0]["ess"]["entropy"]["per_second"].is_number());
  REQUIRE(report.contains("k_posterior_tv"));
  const double tv = report["k_posterior_tv"]["max"].get<double>();
  CHECK(tv >= 0.0);
  CHECK(tv <= 1.0);

  // A single trace has no pairwise comparison.
  const fs::path single = dir / "single.json";
  CHECK(run_cli({"diagnose", "--trace",
                 (out / "chain_01" / "trace.csv").string(), "--output",
                 single.string()}) == 0);
  CHECK(json::parse(slurp(single))["k_posterior_tv"].is_null());

  // Non-integer cluster counts are rejected with the line number.
  const fs::path broken = dir / "broken.csv";
  spit(broken, "iteration,k,entropy\n1,2,0.5\n2,2.5,0.6\n");
  CHECK(run_cli({"diagnose", "--trace", broken.string(), "--output",
                 (dir / "ignored.json").string()}) == 3);

  // Missing columns are rejected.
  const fs::path nocol = dir / "nocol.csv";
  spit(nocol, "iteration,clusters\n1,2\n");
  CHECK(run_cli({"diagnose", "--trace", nocol.string(), "--output",
                 (dir / "ignored2.json").string()}) == 3);
}

TEST_CASE("top-level argument handling") {
  CHECK(run_cli({"--help"}) == 0);
  CHECK(run_cli({}) == 2);               // a subcommand is required
  CHECK(run_cli({"frobnicate"}) == 2);   // unknown subcommand
  CHECK(run_cli({"fit"}) == 2);          // missing required --config
}
