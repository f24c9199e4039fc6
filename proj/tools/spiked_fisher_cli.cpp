// spiked-fisher: command-line front end to the spiked_fisher library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "spiked_fisher/spiked_fisher.hpp"

namespace sf = spiked_fisher;
using sf::Json;

namespace {

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

Json moments_json(const sf::StieltjesMoments& m) {
  return {{"lambda", m.lambda}, {"m", m.m},   {"m_under", m.m_under},
          {"m2", m.m2},         {"m2_under", m.m2_under}, {"m3", m.m3}};
}

sf::BulkMeasure bulk_or_unit(const std::string& file) {
  if (file.empty()) return {};
  return sf::BulkMeasure::empirical(sf::read_values(file));
}

Eigen::Index dof_from_ratio(Eigen::Index p, double c, const char* name) {
  if (!(c > 0.0)) sf::fail(sf::ErrorCode::InvalidArgument, std::string(name) + " must be positive");
  return static_cast<Eigen::Index>(std::llround(static_cast<double>(p) / c));
}

struct Grid {
  double lo = 1.0, step = 0.25, hi = 8.0;
};

/// "beta1=a:step:b"
Grid parse_grid(const std::string& text) {
  const auto eq = text.find('=');
  const std::string body = eq == std::string::npos ? text : text.substr(eq + 1);
  if (eq != std::string::npos && text.substr(0, eq) != "beta1") {
    sf::fail(sf::ErrorCode::InvalidArgument, "grid variable must be beta1");
  }
  Grid g;
  char c1 = 0, c2 = 0;
  std::istringstream in(body);
  if (!(in >> g.lo >> c1 >> g.step >> c2 >> g.hi) || c1 != ':' || c2 != ':' || !(g.step > 0.0) ||
      g.hi < g.lo) {
    sf::fail(sf::ErrorCode::InvalidArgument, "grid must look like beta1=a:step:b");
  }
  return g;
}

int run_psi(double alpha, double c1, double c2, const std::string& bulk_file) {
  const sf::BulkMeasure bulk = bulk_or_unit(bulk_file);
  const sf::PhaseResult r = sf::classify_spike(alpha, c1, c2, bulk);
  Json j{{"alpha", r.alpha},
         {"psi", r.psi},
         {"psi_prime", r.psi_prime},
         {"classification", sf::to_string(r.classification)},
         {"rho", r.rho}};
  j["critical_point"] = std::isnan(r.critical_point) ? Json(nullptr) : Json(r.critical_point);
  print(j);
  return 0;
}

int run_clt_params(const std::string& config, int spike) {
  const sf::RunFile file = sf::load_run_file(config);
  const auto& spikes = file.run.spec.spikes;
  if (spike < 1 || static_cast<std::size_t>(spike) > spikes.size()) {
    sf::fail(sf::ErrorCode::InvalidArgument, "spike index must be in 1.." + std::to_string(spikes.size()));
  }
  const sf::PreparedRun run(file.run);
  const sf::CltParams& p = run.params()[static_cast<std::size_t>(spike - 1)];
  print({{"alpha", p.alpha},
         {"psi_n", p.psi},
         {"theta", p.theta},
         {"phi", p.phi},
         {"nu1", p.nu1},
         {"nu2", p.nu2},
         {"sigma_sq", p.sigma_sq_single},
         {"block_var_diag", p.block_var_diag},
         {"block_var_offdiag", p.block_var_offdiag}});
  return 0;
}

int run_infer(const std::string& spectrum_file, double c1, double c2, double j1_threshold,
              bool outside_j1) {
  std::vector<double> values = sf::read_values(spectrum_file);
  std::sort(values.begin(), values.end(), std::greater<>());
  const auto p = static_cast<Eigen::Index>(values.size());
  const sf::FisherSpectrum spectrum(Eigen::Map<const Eigen::VectorXd>(values.data(), p),
                                    dof_from_ratio(p, c1, "c1"), dof_from_ratio(p, c2, "c2"));
  sf::InferenceOptions opts;
  opts.j1_threshold = j1_threshold;
  opts.psi_sum = outside_j1 ? sf::PsiPointSum::OutsideJ1 : sf::PsiPointSum::InsideJ1;
  const sf::SpikeEstimate e = sf::estimate_spike(spectrum, opts);
  print({{"alpha_hat", e.alpha_hat},
         {"psi_hat", e.psi_hat},
         {"J1", e.J1},
         {"theta_hat", e.theta_hat},
         {"phi_hat", e.phi_hat},
         {"nu1_hat", e.nu1_hat},
         {"nu2_hat", e.nu2_hat},
         {"sigma_hat", e.sigma_hat},
         {"lambda1_stat", e.lambda1_stat},
         {"moments_at_l1", moments_json(e.moments_at_l1)},
         {"moments_at_psi", moments_json(e.moments_at_psi)}});
  return 0;
}

Json setup_json(const sf::RoySetup& s) {
  return {{"p", s.p},           {"c1_tilde", s.c1_tilde}, {"c2_tilde", s.c2_tilde}, {"h", s.h},
          {"psi0", s.psi0},     {"sigma_tw", s.sigma_tw}, {"tw_quantile", s.tw_quantile},
          {"level", s.level}};
}

int run_roy_test(const std::string& responses, const std::string& design, Eigen::Index q1,
                 const std::string& b10_file, double level) {
  const Eigen::MatrixXd W = sf::read_matrix(responses);
  const Eigen::MatrixXd Z = sf::read_matrix(design);
  std::optional<Eigen::MatrixXd> b10;
  if (!b10_file.empty()) b10 = sf::read_matrix(b10_file);
  const sf::RoySetup setup = sf::make_roy_setup(W.rows(), W.cols(), Z.rows(), q1, level);
  const sf::RoyProjector projector(Z, q1);
  const double l1 = projector.spectrum(W, b10)[0];
  const double thr = sf::roy_threshold(setup);
  Json geometry = setup_json(setup);
  geometry["n"] = setup.n;
  geometry["q0"] = setup.q0;
  geometry["q1"] = setup.q1;
  print({{"l1", l1}, {"threshold", thr}, {"reject", sf::roy_decide(l1, thr)}, {"p_geometry", geometry}});
  return 0;
}

int run_signal_test(const std::string& y_file, const std::string& z_file, double level) {
  const Eigen::MatrixXd Y = sf::read_matrix(y_file);
  const Eigen::MatrixXd Z = sf::read_matrix(z_file);
  const sf::RoySetup setup = sf::make_pencil_setup(Y.rows(), Y.cols(), Z.cols(), level);
  const double l1 = sf::signal_fisher(Y, Z)[0];
  const double thr = sf::roy_threshold(setup);
  Json geometry = setup_json(setup);
  geometry["m"] = Y.cols();
  geometry["T"] = Z.cols();
  print({{"l1", l1}, {"threshold", thr}, {"reject", sf::roy_decide(l1, thr)}, {"p_geometry", geometry}});
  return 0;
}

int run_power(const std::string& mode, const std::string& config, const std::string& grid_text) {
  if (mode != "roy" && mode != "signal") sf::fail(sf::ErrorCode::InvalidArgument, "mode must be roy or signal");
  const Json j = sf::load_json(config);
  const bool signal_keys = j.contains("m") || j.contains("T");
  if ((mode == "signal") != signal_keys) {
    sf::fail(sf::ErrorCode::Config, mode == "signal" ? "signal mode needs p, m, T"
                                                     : "roy mode needs p, n, q0, q1");
  }
  const sf::RoySetup setup = sf::roy_setup_from_json(j);
  const Grid g = parse_grid(grid_text);
  std::cout << "beta1,psi_n1,power\n";
  const auto steps = static_cast<long>(std::floor((g.hi - g.lo) / g.step + 1e-9));
  for (long i = 0; i <= steps; ++i) {
    const double b = g.lo + static_cast<double>(i) * g.step;
    const sf::SpikePower sp = sf::spike_power(b, setup);
    std::cout << sf::format_number(b) << ',' << sf::format_number(sp.psi_n1) << ','
              << sf::format_number(sp.power) << '\n';
  }
  return 0;
}

void report_summary(const sf::McReport& report, const std::filesystem::path& out) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"statistic", r.statistic}, {"case", r.case_label}, {"ks", r.row.ks},
                    {"median", r.row.values[4]}});
  }
  print({{"n_effective", report.n_effective}, {"failures", report.failures}, {"rows", rows},
         {"out", out.string()}});
}

int run_simulate(const std::string& config, const std::string& out_override, int threads) {
  sf::RunFile file = sf::load_run_file(config);
  if (!out_override.empty()) file.outputs.dir = out_override;
  if (threads > 0) file.run.threads = threads;
  const sf::RunOutcome r = sf::simulate(file.run, file.outputs);
  report_summary(r.report, file.outputs.dir);
  return 0;
}

struct ReproduceOptions {
  std::string panel = "gaussian";
  std::string case_name = "I";
  std::string rows = "all";
  std::string out;
  int reps = 1000;
  std::uint64_t seed = 20240601;
  int threads = 1;
};

int run_table1(const ReproduceOptions& o) {
  if (o.out.empty()) sf::fail(sf::ErrorCode::InvalidArgument, "--out is required");
  sf::RunConfig cfg = sf::table1_config(sf::parse_law(o.panel), sf::parse_case(o.case_name));
  cfg.replications = o.reps;
  cfg.base_seed = o.seed;
  cfg.threads = o.threads;
  sf::OutputPaths outputs;
  outputs.dir = o.out;
  const sf::RunOutcome r = sf::simulate(cfg, outputs);
  report_summary(r.report, outputs.dir);
  return 0;
}

int run_table2(const ReproduceOptions& o) {
  if (o.out.empty()) sf::fail(sf::ErrorCode::InvalidArgument, "--out is required");
  const auto results = sf::reproduce_size_power(o.rows, o.reps, o.seed, o.threads);
  std::filesystem::create_directories(o.out);
  const std::filesystem::path file = std::filesystem::path(o.out) / "sizepower.csv";
  sf::write_sizepower(file, results);
  print({{"rows", results.size()}, {"out", file.string()}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spiked eigenvalues of Fisher matrices: limits, fluctuations and tests"};
  app.require_subcommand(1);

  double alpha = 0.0, c1 = 0.0, c2 = 0.0, level = 0.05, j1_threshold = 0.2;
  std::string bulk, config, spectrum, responses, design, b10, y_file, z_file, mode = "roy",
                                                                          grid = "beta1=1:0.25:8", out;
  int spike = 1, threads = 0;
  Eigen::Index q1 = 0;
  bool outside_j1 = false;
  ReproduceOptions rep;

  auto* psi = app.add_subcommand("psi", "Limit of a spiked sample eigenvalue");
  psi->add_option("--alpha", alpha, "Population spike")->required();
  psi->add_option("--c1", c1, "p / n1")->required();
  psi->add_option("--c2", c2, "p / n2")->required();
  psi->add_option("--bulk", bulk, "File of bulk eigenvalues (default: all ones)");

  auto* clt = app.add_subcommand("clt-params", "Fluctuation parameters of one spike");
  clt->add_option("--config", config, "Run config (JSON)")->required();
  clt->add_option("--spike", spike, "1-based spike index")->required();

  auto* infer = app.add_subcommand("infer", "Estimate the largest spike from a spectrum");
  infer->add_option("--spectrum", spectrum, "File of Fisher eigenvalues")->required();
  infer->add_option("--c1", c1, "p / n1")->required();
  infer->add_option("--c2", c2, "p / n2")->required();
  infer->add_option("--j1-threshold", j1_threshold, "Relative radius of the top cluster");
  infer->add_flag("--outside-j1", outside_j1, "Evaluate moments at psi_hat over the eigenvalues outside J1");

  auto* roy = app.add_subcommand("roy-test", "Largest-root test in a multivariate linear model");
  roy->add_option("--responses", responses, "p x n response matrix")->required();
  roy->add_option("--design", design, "q0 x n design matrix, tested rows first")->required();
  roy->add_option("--q1", q1, "Number of tested design rows")->required();
  roy->add_option("--b10", b10, "Hypothesised p x q1 coefficient block (default 0)");
  roy->add_option("--level", level, "Significance level");

  auto* sig = app.add_subcommand("signal-test", "Largest-root signal detection");
  sig->add_option("--y", y_file, "p x m signal-bearing sample")->required();
  sig->add_option("--z", z_file, "p x T noise-only sample")->required();
  sig->add_option("--level", level, "Significance level");

  auto* power = app.add_subcommand("power", "Analytic power curve as CSV");
  power->add_option("--mode", mode, "roy or signal")->check(CLI::IsMember({"roy", "signal"}));
  power->add_option("--config", config, "Geometry (JSON)")->required();
  power->add_option("--grid", grid, "beta1=a:step:b");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo run from a config");
  sim->add_option("--config", config, "Run config (JSON)")->required();
  sim->add_option("--out", out, "Output directory (overrides the config)");
  sim->add_option("--threads", threads, "Worker threads (overrides the config)");

  auto* reproduce = app.add_subcommand("reproduce", "Regenerate a reference table");
  reproduce->require_subcommand(1);
  auto* t1 = reproduce->add_subcommand("table1", "Percentiles and KS of standardized eigenvalues");
  t1->add_option("--panel", rep.panel, "gaussian, binary or t4")
      ->check(CLI::IsMember({"gaussian", "binary", "rademacher", "t4", "t4scaled"}));
  t1->add_option("--case", rep.case_name, "I or II")->check(CLI::IsMember({"I", "II"}));
  auto* t2 = reproduce->add_subcommand("table2", "Empirical size and power of the largest-root test");
  t2->add_option("--rows", rep.rows, "all, or a filter such as p=50,c1=2");
  for (auto* t : {t1, t2}) {
    t->add_option("--out", rep.out, "Output directory")->required();
    t->add_option("--reps", rep.reps, "Replications");
    t->add_option("--seed", rep.seed, "Base seed");
    t->add_option("--threads", rep.threads, "Worker threads");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*psi) return run_psi(alpha, c1, c2, bulk);
    if (*clt) return run_clt_params(config, spike);
    if (*infer) return run_infer(spectrum, c1, c2, j1_threshold, outside_j1);
    if (*roy) return run_roy_test(responses, design, q1, b10, level);
    if (*sig) return run_signal_test(y_file, z_file, level);
    if (*power) return run_power(mode, config, grid);
    if (*sim) return run_simulate(config, out, threads);
    if (*t1) return run_table1(rep);
    if (*t2) return run_table2(rep);
  } catch (const sf::Error& e) {
    std::cerr << Json{{"error", sf::to_string(e.code())}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return 3;
  }
  return 1;
}
