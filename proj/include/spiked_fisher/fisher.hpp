#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "spiked_fisher/covariance.hpp"
#include "spiked_fisher/error.hpp"

namespace spiked_fisher {

/// Descending eigenvalues of F = S1 S2^{-1} with the dimension ratios.
class FisherSpectrum {
 public:
  FisherSpectrum(Eigen::VectorXd eigs, Eigen::Index n1, Eigen::Index n2)
      : eigs_(std::move(eigs)), n1_(n1), n2_(n2) {
    if (eigs_.size() < 1) fail(ErrorCode::InvalidDimension, "empty spectrum");
    if (n1_ < 1 || n2_ < 1) fail(ErrorCode::InvalidDimension, "sample sizes must be positive");
    if (n2_ <= p()) fail(ErrorCode::SingularMatrix, "n2 must exceed p so that S2 is invertible");
  }

  const Eigen::VectorXd& eigs() const { return eigs_; }
  double operator[](Eigen::Index i) const { return eigs_(i); }
  Eigen::Index p() const { return eigs_.size(); }
  Eigen::Index n1() const { return n1_; }
  Eigen::Index n2() const { return n2_; }
  double c_n1() const { return static_cast<double>(p()) / static_cast<double>(n1_); }
  double c_n2() const { return static_cast<double>(p()) / static_cast<double>(n2_); }

 private:
  Eigen::VectorXd eigs_;
  Eigen::Index n1_;
  Eigen::Index n2_;
};

/// Symmetric square roots of a covariance pair, computed once and reused
/// across replications.
struct CovarianceRoots {
  Eigen::MatrixXd root1;
  Eigen::MatrixXd root2;
  bool identity2 = false;

  explicit CovarianceRoots(const CovariancePair& pair)
      : root1(symmetric_power(pair.sigma1, 0.5)),
        root2(symmetric_power(pair.sigma2, 0.5)),
        identity2(pair.sigma2.isIdentity(0.0)) {}
};

struct SampleCovariances {
  Eigen::MatrixXd S1;
  Eigen::MatrixXd S2;
};

namespace detail {

inline Eigen::MatrixXd gram(const Eigen::MatrixXd& x) {
  const Eigen::Index p = x.rows();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(p, p);
  g.selfadjointView<Eigen::Lower>().rankUpdate(x, 1.0 / static_cast<double>(x.cols()));
  g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
  return g;
}

}  // namespace detail

inline SampleCovariances sample_covariances(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                                            const CovarianceRoots& roots) {
  const Eigen::Index p = roots.root1.rows();
  if (X.rows() != p || Y.rows() != p) {
    fail(ErrorCode::InvalidDimension, "data arrays must have p rows");
  }
  if (Y.cols() <= p) fail(ErrorCode::SingularMatrix, "n2 must exceed p so that S2 is invertible");
  SampleCovariances out;
  out.S1 = roots.root1 * detail::gram(X) * roots.root1;
  out.S2 = detail::gram(Y);
  if (!roots.identity2) out.S2 = roots.root2 * out.S2 * roots.root2;
  return out;
}

inline SampleCovariances sample_covariances(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                                            const CovariancePair& pair) {
  return sample_covariances(X, Y, CovarianceRoots(pair));
}

/// Descending generalized eigenvalues of the pencil (S1, S2) via Cholesky of
/// S2 and a symmetric eigensolve of L^{-1} S1 L^{-T}.
inline Eigen::VectorXd pencil_eigenvalues(const Eigen::MatrixXd& S1, const Eigen::MatrixXd& S2) {
  const Eigen::Index p = S1.rows();
  if (S1.cols() != p || S2.rows() != p || S2.cols() != p) {
    fail(ErrorCode::InvalidDimension, "pencil matrices must be square and the same size");
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(S2);
  if (llt.info() != Eigen::Success) fail(ErrorCode::IllConditioned, "S2 is not positive definite");
  if (llt.rcond() < 1e-12) fail(ErrorCode::IllConditioned, "S2 condition number exceeds 1e12");
  const auto L = llt.matrixL();
  Eigen::MatrixXd c = L.solve(S1);
  c = L.solve(c.transpose()).eval();
  c = 0.5 * (c + c.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorCode::Decomposition, "symmetric eigensolve failed");
  // Exact pencil is PSD; round-off negatives on a rank-deficient S1 are clamped.
  return es.eigenvalues().reverse().cwiseMax(0.0);
}

inline FisherSpectrum fisher_eigenvalues(const Eigen::MatrixXd& S1, const Eigen::MatrixXd& S2,
                                         Eigen::Index n1, Eigen::Index n2) {
  return FisherSpectrum(pencil_eigenvalues(S1, S2), n1, n2);
}

/// For spike k, the m_k sample indices (0-based, ascending) whose eigenvalues
/// are nearest to psi_values[k] in relative distance.
inline std::vector<std::vector<Eigen::Index>> largest_group(const FisherSpectrum& spectrum,
                                                            const SpikeSpec& spec,
                                                            const std::vector<double>& psi_values) {
  if (psi_values.size() != spec.spikes.size()) {
    fail(ErrorCode::InvalidArgument, "one predicted limit per spike is required");
  }
  const Eigen::Index p = spectrum.p();
  std::vector<std::vector<Eigen::Index>> groups;
  std::set<Eigen::Index> claimed;
  for (std::size_t k = 0; k < spec.spikes.size(); ++k) {
    const double target = psi_values[k];
    const auto m = static_cast<std::size_t>(spec.spikes[k].mult);
    if (m > static_cast<std::size_t>(p)) fail(ErrorCode::GroupingConflict, "multiplicity exceeds p");
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(p));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    auto dist = [&](Eigen::Index i) { return std::abs(spectrum[i] - target) / std::abs(target); };
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(m), idx.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                        const double da = dist(a), db = dist(b);
                        return da < db || (da == db && a < b);
                      });
    idx.resize(m);
    std::sort(idx.begin(), idx.end());
    for (Eigen::Index i : idx) {
      if (!claimed.insert(i).second) {
        fail(ErrorCode::GroupingConflict,
             "sample eigenvalue " + std::to_string(i + 1) + " claimed by two spikes");
      }
    }
    groups.push_back(std::move(idx));
  }
  return groups;
}

}  // namespace spiked_fisher
