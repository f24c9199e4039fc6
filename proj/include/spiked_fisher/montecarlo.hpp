#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "spiked_fisher/clt.hpp"
#include "spiked_fisher/covariance.hpp"
#include "spiked_fisher/error.hpp"
#include "spiked_fisher/fisher.hpp"
#include "spiked_fisher/linear_model.hpp"
#include "spiked_fisher/phase_transition.hpp"
#include "spiked_fisher/populations.hpp"
#include "spiked_fisher/random.hpp"
#include "spiked_fisher/signal.hpp"
#include "spiked_fisher/stats.hpp"

namespace spiked_fisher {

/// Runs fn(i) for i in [0, count) on `threads` workers. Each index is handled
/// exactly once; the first exception is rethrown after all workers join.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

enum class CovarianceCase { I, II };

inline std::string case_name(CovarianceCase c) { return c == CovarianceCase::I ? "I" : "II"; }

struct RunConfig {
  CovarianceCase covariance_case = CovarianceCase::I;
  double rho = 0.5;
  SpikeSpec spec;
  Eigen::Index n1 = 0;
  Eigen::Index n2 = 0;
  PopulationKind population_x;
  PopulationKind population_y;
  int replications = 1000;
  std::uint64_t base_seed = 20240601;
  bool truncate = false;
  double eta = 2.0;
  int threads = 1;
  Eigen::Index reference_draws = 1000000;

  void validate() const {
    spec.validate();
    if (replications < 1) fail(ErrorCode::Config, "replications must be >= 1");
    if (n1 < 1) fail(ErrorCode::Config, "n1 must be positive");
    if (n2 <= spec.p) fail(ErrorCode::Config, "n2 must exceed p");
    if (reference_draws < 1) fail(ErrorCode::Config, "reference_draws must be positive");
  }
};

/// Scenario behind `reproduce table1`: spikes (20, 0.2, 0.1) with multiplicities
/// (1, 2, 1), p = 200, n1 = 1000, n2 = 400.
inline RunConfig table1_config(Law law, CovarianceCase c) {
  RunConfig cfg;
  cfg.covariance_case = c;
  cfg.rho = 0.5;
  cfg.spec.p = 200;
  cfg.spec.spikes = {{20.0, 1}, {0.2, 2}, {0.1, 1}};
  cfg.n1 = 1000;
  cfg.n2 = 400;
  cfg.population_x = {law, 1};
  cfg.population_y = {law, 1};
  return cfg;
}

/// Everything that does not change between replications.
class PreparedRun {
 public:
  explicit PreparedRun(RunConfig cfg)
      : cfg_(std::move(cfg)),
        pair_(cfg_.covariance_case == CovarianceCase::I ? build_case1(cfg_.spec)
                                                        : build_case2(cfg_.spec, cfg_.rho)),
        roots_(pair_),
        tp_(decompose_tp(pair_, cfg_.spec)) {
    cfg_.validate();
    const double p = static_cast<double>(cfg_.spec.p);
    const double c1 = p / static_cast<double>(cfg_.n1);
    const double c2 = p / static_cast<double>(cfg_.n2);
    fx_ = fourth_moment_params(cfg_.population_x, {cfg_.eta, cfg_.n1});
    fy_ = fourth_moment_params(cfg_.population_y, {cfg_.eta, cfg_.n2});
    for (std::size_t k = 0; k < cfg_.spec.spikes.size(); ++k) {
      const Spike& s = cfg_.spec.spikes[k];
      const Eigen::Index start = tp_.block_start[k];
      const Eigen::MatrixXd bx = beta_matrix(fourth_power_sums(tp_.U.middleCols(start, s.mult)), fx_.beta);
      const Eigen::MatrixXd by = beta_matrix(fourth_power_sums(tp_.V.middleCols(start, s.mult)), fy_.beta);
      params_.push_back(make_clt_params(s.alpha, s.mult, c1, c2, cfg_.spec.bulk,
                                        NoiseModel::GeneralFourthMoment, bx, by,
                                        cfg_.population_x.q_flag));
      psi_.push_back(params_.back().psi);
    }
  }

  const RunConfig& config() const { return cfg_; }
  const CovariancePair& pair() const { return pair_; }
  const CovarianceRoots& roots() const { return roots_; }
  const TpDecomposition& decomposition() const { return tp_; }
  const std::vector<CltParams>& params() const { return params_; }
  const std::vector<double>& psi_values() const { return psi_; }
  const FourthMoment& fourth_x() const { return fx_; }
  const FourthMoment& fourth_y() const { return fy_; }

 private:
  RunConfig cfg_;
  CovariancePair pair_;
  CovarianceRoots roots_;
  TpDecomposition tp_;
  FourthMoment fx_;
  FourthMoment fy_;
  std::vector<CltParams> params_;
  std::vector<double> psi_;
};

struct ReplicationRecord {
  std::size_t index = 0;
  bool failed = false;
  std::string error;
  std::vector<std::vector<double>> gamma;  // per spike, descending eigenvalue order
};

inline ReplicationRecord run_one(const PreparedRun& run, std::size_t r) {
  const RunConfig& cfg = run.config();
  ReplicationRecord rec;
  rec.index = r;
  try {
    const Eigen::Index p = cfg.spec.p;
    Eigen::MatrixXd X = sample_matrix(cfg.population_x, p, cfg.n1, derive_seed(cfg.base_seed, r, 0));
    Eigen::MatrixXd Y = sample_matrix(cfg.population_y, p, cfg.n2, derive_seed(cfg.base_seed, r, 1));
    if (cfg.truncate) {
      X = truncate_center_rescale(X, {cfg.eta, cfg.n1});
      Y = truncate_center_rescale(Y, {cfg.eta, cfg.n2});
    }
    const SampleCovariances s = sample_covariances(X, Y, run.roots());
    const FisherSpectrum spectrum = fisher_eigenvalues(s.S1, s.S2, cfg.n1, cfg.n2);
    const auto groups = largest_group(spectrum, cfg.spec, run.psi_values());
    const Eigen::Index M = cfg.spec.total_multiplicity();
    for (std::size_t k = 0; k < groups.size(); ++k) {
      std::vector<double> g;
      for (Eigen::Index i : groups[k]) {
        g.push_back(standardize(spectrum[i], run.psi_values()[k], p, M));
      }
      rec.gamma.push_back(std::move(g));
    }
  } catch (const Error& e) {
    rec.failed = true;
    rec.error = e.what();
    rec.gamma.clear();
  }
  return rec;
}

/// Records in replication order; more than 1% failed replications aborts.
inline std::vector<ReplicationRecord> run_replications(const PreparedRun& run) {
  const auto count = static_cast<std::size_t>(run.config().replications);
  std::vector<ReplicationRecord> out(count);
  parallel_for(count, run.config().threads, [&](std::size_t r) { out[r] = run_one(run, r); });
  const auto failures = static_cast<std::size_t>(
      std::count_if(out.begin(), out.end(), [](const ReplicationRecord& r) { return r.failed; }));
  if (failures * 100 > count) {
    fail(ErrorCode::RunAborted, std::to_string(failures) + " of " + std::to_string(count) +
                                    " replications failed");
  }
  return out;
}

/// One standardized statistic with its reference cdf.
struct StatisticSeries {
  std::string name;
  std::vector<double> values;
  std::function<double(double)> reference;
};

/// Sample of (lambda_1 + ... + lambda_m)/m for -Omega/phi, standardized by its
/// analytic sd sqrt(sum_i Var(omega_ii)) / (m |phi|).
inline std::vector<double> multiplicity_reference(const CltParams& params, Eigen::Index draws,
                                                  std::uint64_t seed) {
  const Eigen::MatrixXd eig = multi_spike_law(params.block, params.phi, draws, seed);
  const double m = static_cast<double>(params.block.size());
  const double sd = std::sqrt(params.block.variance.diagonal().sum()) / (m * std::abs(params.phi));
  std::vector<double> out(static_cast<std::size_t>(draws));
  for (Eigen::Index r = 0; r < draws; ++r) out[static_cast<std::size_t>(r)] = eig.row(r).mean() / sd;
  return out;
}

/// gamma_k / sigma_k for simple spikes and the averaged, standardized
/// gamma_k^* for multiple ones.
inline std::vector<StatisticSeries> standardized_statistics(
    const PreparedRun& run, const std::vector<ReplicationRecord>& records) {
  std::vector<StatisticSeries> out;
  const auto& spikes = run.config().spec.spikes;
  for (std::size_t k = 0; k < spikes.size(); ++k) {
    const CltParams& prm = run.params()[k];
    StatisticSeries series;
    const std::string base = "gamma" + std::to_string(k + 1);
    if (spikes[k].mult == 1) {
      series.name = base;
      const double sigma = std::sqrt(prm.sigma_sq_single);
      for (const auto& rec : records) {
        if (!rec.failed) series.values.push_back(rec.gamma[k][0] / sigma);
      }
      series.reference = [](double x) { return normal_cdf(x); };
    } else {
      series.name = base + "_star";
      const double m = static_cast<double>(spikes[k].mult);
      const double sd = std::sqrt(prm.block.variance.diagonal().sum()) / (m * std::abs(prm.phi));
      for (const auto& rec : records) {
        if (rec.failed) continue;
        double mean = 0.0;
        for (double g : rec.gamma[k]) mean += g;
        series.values.push_back(mean / m / sd);
      }
      auto cdf = std::make_shared<EmpiricalCdf>(multiplicity_reference(
          prm, run.config().reference_draws, derive_seed(run.config().base_seed, k, 99)));
      series.reference = [cdf](double x) { return (*cdf)(x); };
    }
    out.push_back(std::move(series));
  }
  return out;
}

struct ReportRow {
  std::string statistic;
  std::string case_label;
  std::string method = "new";
  PercentileRow row;
};

struct McReport {
  std::vector<ReportRow> rows;
  std::size_t n_effective = 0;
  std::size_t failures = 0;
};

inline McReport summarize(const PreparedRun& run, const std::vector<ReplicationRecord>& records,
                          const std::vector<StatisticSeries>& series) {
  McReport report;
  for (const auto& rec : records) (rec.failed ? report.failures : report.n_effective) += 1;
  for (const auto& s : series) {
    ReportRow row;
    row.statistic = s.name;
    row.case_label = case_name(run.config().covariance_case);
    row.row = percentile_table(s.values, s.reference);
    report.rows.push_back(std::move(row));
  }
  return report;
}

/// Two-sample KS p-value between the first standardized statistic of two
/// runs that differ only in their population laws (and seeds).
inline TwoSampleKs invariance_ab_test(const RunConfig& a, const RunConfig& b) {
  const bool same = a.covariance_case == b.covariance_case && a.rho == b.rho &&
                    a.spec.p == b.spec.p && a.n1 == b.n1 && a.n2 == b.n2 &&
                    a.spec.spikes.size() == b.spec.spikes.size() &&
                    std::equal(a.spec.spikes.begin(), a.spec.spikes.end(), b.spec.spikes.begin(),
                               [](const Spike& x, const Spike& y) {
                                 return x.alpha == y.alpha && x.mult == y.mult;
                               });
  if (!same) fail(ErrorCode::Config, "A/B runs must share scenario and geometry");
  const PreparedRun ra(a), rb(b);
  const auto sa = standardized_statistics(ra, run_replications(ra));
  const auto sb = standardized_statistics(rb, run_replications(rb));
  if (sa.empty()) fail(ErrorCode::Config, "no spikes to compare");
  return ks_two_sample(sa.front().values, sb.front().values);
}

// ---------------------------------------------------------------------------
// Largest-root test experiments.

struct RoyGeometry {
  Eigen::Index p = 0;
  double c1_tilde = 0.0;
  double c2_tilde = 0.0;
  double q1_ratio = 0.0;  // q1 / q0
  Eigen::Index q1 = 0;
  Eigen::Index q0 = 0;
  Eigen::Index n = 0;
};

/// q1 = round(p / c1), q0 = floor(q1 / ratio), n - q0 = floor(p / c2).
inline RoyGeometry make_roy_geometry(Eigen::Index p, double c1_tilde, double c2_tilde,
                                     double q1_ratio) {
  if (!(c1_tilde > 0.0) || !(c2_tilde > 0.0 && c2_tilde < 1.0) ||
      !(q1_ratio > 0.0 && q1_ratio <= 1.0)) {
    fail(ErrorCode::Config, "need c1 > 0, 0 < c2 < 1 and 0 < q1/q0 <= 1");
  }
  RoyGeometry g;
  g.p = p;
  g.c1_tilde = c1_tilde;
  g.c2_tilde = c2_tilde;
  g.q1_ratio = q1_ratio;
  g.q1 = std::max<Eigen::Index>(1, std::lround(static_cast<double>(p) / c1_tilde));
  g.q0 = std::max(g.q1, static_cast<Eigen::Index>(std::floor(static_cast<double>(g.q1) / q1_ratio + 1e-9)));
  g.n = g.q0 + static_cast<Eigen::Index>(std::floor(static_cast<double>(p) / c2_tilde + 1e-9));
  if (g.n - g.q0 <= p) fail(ErrorCode::Config, "geometry leaves n - q0 <= p");
  return g;
}

struct SizePowerConfig {
  RoyGeometry geometry;
  int replications = 1000;
  std::uint64_t seed = 20240601;
  double level = 0.05;
  int threads = 1;
  double z_mean = 1.0;
  double z_sd = 0.5;
  double b1_mean = 0.5;
  double b1_sd = 1.0;
  std::optional<double> threshold_override;
};

struct SizePowerResult {
  RoyGeometry geometry;
  RoySetup setup;
  double threshold = 0.0;
  double size = 0.0;
  double power = 0.0;
  double expected_beta1 = 1.0;
  double analytic_power = 0.0;
};

/// Fixed design: q0 x n entries N(z_mean, z_sd^2).
inline Eigen::MatrixXd roy_design(const SizePowerConfig& cfg) {
  const RoyGeometry& g = cfg.geometry;
  Eigen::MatrixXd z = sample_matrix({}, g.q0, g.n, derive_seed(cfg.seed, 0, 10));
  return (z.array() * cfg.z_sd + cfg.z_mean).matrix();
}

/// Tested block under the alternative: the first ceil(p/2) rows of column 1
/// drawn from N(b1_mean, b1_sd^2), everything else zero.
inline Eigen::MatrixXd roy_alternative(const SizePowerConfig& cfg, std::uint64_t seed) {
  const RoyGeometry& g = cfg.geometry;
  const Eigen::Index half = (g.p + 1) / 2;
  Eigen::MatrixXd b1 = Eigen::MatrixXd::Zero(g.p, g.q1);
  const Eigen::MatrixXd draw = sample_matrix({}, half, 1, seed);
  b1.col(0).head(half) = (draw.array() * cfg.b1_sd + cfg.b1_mean).matrix();
  return b1;
}

/// Empirical size and power of the largest-root test. B2 Z2 lies in the row
/// space of Z and cancels exactly from G and H, so only (E, B1) are drawn.
inline SizePowerResult size_power_run(const SizePowerConfig& cfg) {
  const RoyGeometry& g = cfg.geometry;
  if (cfg.replications < 1) fail(ErrorCode::Config, "replications must be >= 1");
  SizePowerResult out;
  out.geometry = g;
  out.setup = make_roy_setup(g.p, g.n, g.q0, g.q1, cfg.level);
  out.threshold = cfg.threshold_override.value_or(roy_threshold(out.setup));
  const RoyProjector projector(roy_design(cfg), g.q1);

  const auto reps = static_cast<std::size_t>(cfg.replications);
  std::vector<char> null_reject(reps, 0), alt_reject(reps, 0);
  const Eigen::MatrixXd no_effect = Eigen::MatrixXd::Zero(g.p, g.q1);
  parallel_for(reps, cfg.threads, [&](std::size_t r) {
    const Eigen::MatrixXd e0 = sample_matrix({}, g.p, g.n, derive_seed(cfg.seed, r, 1));
    null_reject[r] = roy_decide(projector.spectrum_from_noise(e0, no_effect)[0], out.threshold);
    const Eigen::MatrixXd e1 = sample_matrix({}, g.p, g.n, derive_seed(cfg.seed, r, 2));
    const Eigen::MatrixXd b1 = roy_alternative(cfg, derive_seed(cfg.seed, r, 3));
    alt_reject[r] = roy_decide(projector.spectrum_from_noise(e1, b1)[0], out.threshold);
  });
  const double n = static_cast<double>(reps);
  out.size = static_cast<double>(std::count(null_reject.begin(), null_reject.end(), 1)) / n;
  out.power = static_cast<double>(std::count(alt_reject.begin(), alt_reject.end(), 1)) / n;

  // Analytic counterpart at the expected squared norm of the alternative column.
  const double a11 = projector.z1q1().row(0).squaredNorm();
  const double half = static_cast<double>((g.p + 1) / 2);
  const double norm_sq = half * (cfg.b1_mean * cfg.b1_mean + cfg.b1_sd * cfg.b1_sd);
  out.expected_beta1 = 1.0 + a11 * norm_sq / static_cast<double>(g.q1);
  out.analytic_power = spike_power(out.expected_beta1, out.setup).power;
  return out;
}

/// Grid behind `reproduce table2`: q1/q0 in {0.2, 0.8}, c1 in {5, 2, 0.5}, c2 in {0.8, 0.5, 0.2}.
inline std::vector<RoyGeometry> table2_geometries(const std::vector<Eigen::Index>& dims = {50, 100}) {
  static constexpr double c1s[] = {5.0, 2.0, 0.5};
  static constexpr double c2s[] = {0.8, 0.5, 0.2};
  static constexpr double ratios[] = {0.2, 0.8};
  std::vector<RoyGeometry> out;
  for (double ratio : ratios) {
    for (double c1 : c1s) {
      for (double c2 : c2s) {
        for (Eigen::Index p : dims) out.push_back(make_roy_geometry(p, c1, c2, ratio));
      }
    }
  }
  return out;
}

/// Seed of a size/power row depends only on its geometry, so filtering rows does
/// not change any other row's numbers.
inline std::uint64_t geometry_seed(std::uint64_t base, const RoyGeometry& g) {
  const auto key = static_cast<std::uint64_t>(g.p) * 1000000ULL +
                   static_cast<std::uint64_t>(std::lround(g.c1_tilde * 100.0)) * 1000ULL +
                   static_cast<std::uint64_t>(std::lround(g.c2_tilde * 10.0)) * 10ULL +
                   static_cast<std::uint64_t>(std::lround(g.q1_ratio * 10.0));
  return derive_seed(base, key, 7);
}

/// Largest null roots of the regression statistic and of an independent
/// Wishart pair with the same (p, q1, n - q0).
struct NullRootSamples {
  std::vector<double> regression;
  std::vector<double> wishart;
};

inline NullRootSamples roy_null_roots(const SizePowerConfig& cfg) {
  const RoyGeometry& g = cfg.geometry;
  const RoyProjector projector(roy_design(cfg), g.q1);
  const auto reps = static_cast<std::size_t>(cfg.replications);
  NullRootSamples out{std::vector<double>(reps), std::vector<double>(reps)};
  const Eigen::MatrixXd no_effect = Eigen::MatrixXd::Zero(g.p, g.q1);
  const Eigen::Index n2 = g.n - g.q0;
  parallel_for(reps, cfg.threads, [&](std::size_t r) {
    const Eigen::MatrixXd e = sample_matrix({}, g.p, g.n, derive_seed(cfg.seed, r, 4));
    out.regression[r] = projector.spectrum_from_noise(e, no_effect)[0];
    const Eigen::MatrixXd x = sample_matrix({}, g.p, g.q1, derive_seed(cfg.seed, r, 5));
    const Eigen::MatrixXd y = sample_matrix({}, g.p, n2, derive_seed(cfg.seed, r, 6));
    out.wishart[r] = fisher_eigenvalues(detail::gram(x), detail::gram(y), g.q1, n2)[0];
  });
  return out;
}

/// Empirical rejection rate of the signal-detection test.
inline double signal_rejection_rate(const SignalSetup& setup, int replications,
                                    std::uint64_t seed, int threads = 1, double level = 0.05) {
  const double thr = roy_threshold(signal_roy_setup(setup, level));
  const auto reps = static_cast<std::size_t>(replications);
  std::vector<char> reject(reps, 0);
  parallel_for(reps, threads, [&](std::size_t r) {
    const SignalSample s = signal_simulate(setup, derive_seed(seed, r, 0));
    reject[r] = roy_decide(signal_fisher(s.Y, s.Z)[0], thr);
  });
  return static_cast<double>(std::count(reject.begin(), reject.end(), 1)) /
         static_cast<double>(reps);
}

}  // namespace spiked_fisher
