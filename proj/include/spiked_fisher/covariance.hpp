#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spiked_fisher/bulk.hpp"
#include "spiked_fisher/error.hpp"

namespace spiked_fisher {

struct Spike {
  double alpha = 1.0;
  int mult = 1;
};

/// Population spikes of T_p^* T_p plus the bulk measure of the rest.
struct SpikeSpec {
  std::vector<Spike> spikes;
  BulkMeasure bulk;
  Eigen::Index p = 0;

  int total_multiplicity() const {
    return std::accumulate(spikes.begin(), spikes.end(), 0,
                           [](int acc, const Spike& s) { return acc + s.mult; });
  }

  void validate() const {
    if (p < 1) fail(ErrorCode::InvalidSpec, "dimension p must be positive");
    for (std::size_t k = 0; k < spikes.size(); ++k) {
      const Spike& s = spikes[k];
      if (!(s.alpha > 0.0)) fail(ErrorCode::InvalidSpec, "spike values must be positive");
      if (s.mult < 1) fail(ErrorCode::InvalidSpec, "spike multiplicities must be >= 1");
      if (bulk.in_support(s.alpha)) {
        fail(ErrorCode::InvalidSpec, "spike " + std::to_string(s.alpha) +
                                         " lies inside the bulk support");
      }
      if (k > 0 && !(spikes[k - 1].alpha > s.alpha)) {
        fail(ErrorCode::InvalidSpec, "spikes must be distinct and listed in descending order");
      }
    }
    if (total_multiplicity() > p) {
      fail(ErrorCode::InvalidSpec, "total spike multiplicity exceeds p");
    }
  }

  /// The p - M non-spiked population values. A point mass repeats its atom;
  /// an empirical list must already have exactly p - M entries.
  std::vector<double> bulk_values() const {
    const auto rest = static_cast<std::size_t>(p - total_multiplicity());
    if (bulk.kind() == BulkMeasure::Kind::PointMass) {
      return std::vector<double>(rest, bulk.atoms().front());
    }
    if (bulk.atoms().size() != rest) {
      fail(ErrorCode::InvalidSpec, "empirical bulk must list exactly p - M values");
    }
    return bulk.atoms();
  }

  /// Every population eigenvalue of T_p^* T_p in descending order.
  Eigen::VectorXd eigenvalues_descending() const {
    std::vector<double> all = bulk_values();
    for (const Spike& s : spikes) all.insert(all.end(), static_cast<std::size_t>(s.mult), s.alpha);
    std::sort(all.begin(), all.end(), std::greater<>());
    return Eigen::Map<Eigen::VectorXd>(all.data(), static_cast<Eigen::Index>(all.size()));
  }
};

struct CovariancePair {
  Eigen::MatrixXd sigma1;
  Eigen::MatrixXd sigma2;
};

/// Symmetric square root (or inverse square root) by eigen-decomposition.
inline Eigen::MatrixXd symmetric_power(const Eigen::MatrixXd& a, double exponent) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) fail(ErrorCode::Decomposition, "eigen-decomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  if (ev.minCoeff() <= 0.0) fail(ErrorCode::Decomposition, "matrix is not positive definite");
  const Eigen::VectorXd powered = ev.array().pow(exponent).matrix();
  return es.eigenvectors() * powered.asDiagonal() * es.eigenvectors().transpose();
}

/// Sigma1 = diag(spectrum in descending order), Sigma2 = I.
inline CovariancePair build_case1(const SpikeSpec& spec) {
  spec.validate();
  const Eigen::VectorXd lambda = spec.eigenvalues_descending();
  return {lambda.asDiagonal(), Eigen::MatrixXd::Identity(spec.p, spec.p)};
}

/// Eigenvectors of the Toeplitz matrix (rho^{|i-j|}), columns ordered by
/// descending Toeplitz eigenvalue.
inline Eigen::MatrixXd toeplitz_eigenvectors(Eigen::Index p, double rho) {
  Eigen::MatrixXd toe(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      toe(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(toe);
  if (es.info() != Eigen::Success) fail(ErrorCode::Decomposition, "Toeplitz eigensolve failed");
  return es.eigenvectors().rowwise().reverse();
}

/// Sigma1 = U0 Lambda U0^T with U0 the Toeplitz eigenvectors, Sigma2 = I.
inline CovariancePair build_case2(const SpikeSpec& spec, double rho) {
  spec.validate();
  if (!(rho > 0.0 && rho < 1.0)) fail(ErrorCode::InvalidSpec, "rho must lie in (0, 1)");
  const Eigen::VectorXd lambda = spec.eigenvalues_descending();
  const Eigen::MatrixXd u0 = toeplitz_eigenvectors(spec.p, rho);
  Eigen::MatrixXd sigma1 = u0 * lambda.asDiagonal() * u0.transpose();
  sigma1 = 0.5 * (sigma1 + sigma1.transpose()).eval();
  return {sigma1, Eigen::MatrixXd::Identity(spec.p, spec.p)};
}

/// T_p = U diag(D1, D2)^{1/2} V^T. The first M columns of U and V belong to
/// the spikes (spike by spike, in SpikeSpec order); the rest to the bulk.
struct TpDecomposition {
  Eigen::MatrixXd U;
  Eigen::MatrixXd V;
  Eigen::VectorXd D1;
  Eigen::VectorXd D2;
  std::vector<Eigen::Index> block_start;  // first column of spike k

  Eigen::Index spiked_count() const { return D1.size(); }

  Eigen::MatrixXd reconstruct() const {
    Eigen::VectorXd d(D1.size() + D2.size());
    d << D1, D2;
    return U * d.cwiseSqrt().asDiagonal() * V.transpose();
  }
};

inline Eigen::MatrixXd transfer_matrix(const CovariancePair& pair) {
  return symmetric_power(pair.sigma1, 0.5) * symmetric_power(pair.sigma2, -0.5);
}

/// SVD of T_p with spikes designated by the declared spike values rather
/// than by rank: spike k claims the m_k squared singular values nearest to
/// alpha_k in relative distance.
inline TpDecomposition decompose_tp(const CovariancePair& pair, const SpikeSpec& spec) {
  const Eigen::Index p = pair.sigma1.rows();
  if (pair.sigma1.cols() != p || pair.sigma2.rows() != p || pair.sigma2.cols() != p) {
    fail(ErrorCode::InvalidDimension, "covariance pair must be two p x p matrices");
  }
  const int m_total = spec.total_multiplicity();
  if (m_total > p) {
    fail(ErrorCode::InvalidSpec, "more spikes than dimensions");
  }
  const Eigen::MatrixXd t = transfer_matrix(pair);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd sq = svd.singularValues().array().square().matrix();

  std::vector<bool> taken(static_cast<std::size_t>(p), false);
  std::vector<Eigen::Index> order;
  order.reserve(static_cast<std::size_t>(p));
  TpDecomposition out;
  for (const Spike& s : spec.spikes) {
    out.block_start.push_back(static_cast<Eigen::Index>(order.size()));
    for (int r = 0; r < s.mult; ++r) {
      Eigen::Index best = -1;
      double best_dist = 0.0;
      for (Eigen::Index i = 0; i < p; ++i) {
        if (taken[static_cast<std::size_t>(i)]) continue;
        const double dist = std::abs(sq(i) - s.alpha) / s.alpha;
        if (best < 0 || dist < best_dist) {
          best = i;
          best_dist = dist;
        }
      }
      taken[static_cast<std::size_t>(best)] = true;
      order.push_back(best);
    }
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    if (!taken[static_cast<std::size_t>(i)]) order.push_back(i);
  }

  out.U.resize(p, p);
  out.V.resize(p, p);
  out.D1.resize(m_total);
  out.D2.resize(p - m_total);
  for (Eigen::Index c = 0; c < p; ++c) {
    const Eigen::Index src = order[static_cast<std::size_t>(c)];
    out.U.col(c) = svd.matrixU().col(src);
    out.V.col(c) = svd.matrixV().col(src);
    if (c < m_total) {
      out.D1(c) = sq(src);
    } else {
      out.D2(c - m_total) = sq(src);
    }
  }
  return out;
}

/// Coordinate sums sum_t u_ti^2 u_tj^2 over the columns of one spike block.
/// The diagonal holds sum_t u_ti^4.
inline Eigen::MatrixXd fourth_power_sums(const Eigen::MatrixXd& block) {
  const Eigen::MatrixXd sq = block.array().square().matrix();
  return sq.transpose() * sq;
}

}  // namespace spiked_fisher
