#include "latqfi/linalg.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace latqfi {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::None: return "None";
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::InvalidOccupation: return "InvalidOccupation";
    case ErrorCode::InvalidSize: return "InvalidSize";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NegativeResult: return "NegativeResult";
    case ErrorCode::DegenerateDistribution: return "DegenerateDistribution";
    case ErrorCode::StateCrossing: return "StateCrossing";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidZ: return "InvalidZ";
    case ErrorCode::InvalidR: return "InvalidR";
    case ErrorCode::OutsideTopologicalPhase: return "OutsideTopologicalPhase";
    case ErrorCode::NoGapIsolation: return "NoGapIsolation";
    case ErrorCode::NoLowerBand: return "NoLowerBand";
    case ErrorCode::NonMonotonic: return "NonMonotonic";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotAProjector: return "NotAProjector";
    case ErrorCode::OddL: return "OddL";
    case ErrorCode::AtCriticality: return "AtCriticality";
    case ErrorCode::GaplessInput: return "GaplessInput";
    case ErrorCode::AllExcluded: return "AllExcluded";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::FlatLikelihood: return "FlatLikelihood";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

double hermiticity_defect(const Matrix& A) {
  double scale = A.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double defect = (A - A.adjoint()).cwiseAbs().maxCoeff();
  return defect / scale;
}

namespace {

double first_site_weight(const Vector& v, int site_dim) {
  double w = 0.0;
  for (int m = 0; m < site_dim && m < v.size(); ++m) w += std::norm(v[m]);
  return w;
}

int first_significant_index(const Vector& v) {
  double vmax = v.cwiseAbs().maxCoeff();
  double thresh = 1e-8 * vmax;
  for (int i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > thresh) return i;
  return 0;
}

void canonical_phase(Vector& v) {
  int imax = 0;
  double amax = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    double a = std::abs(v[i]);
    if (a > amax) { amax = a; imax = i; }
  }
  if (amax == 0.0) return;
  v *= std::conj(v[imax]) / amax;
}

} // namespace

EigenDecomposition hermitian_eig(const Matrix& A, int site_dim) {
  if (A.rows() != A.cols()) raise(ErrorCode::ShapeMismatch, "hermitian_eig: matrix not square");
  if (site_dim < 1) raise(ErrorCode::InvalidParams, "hermitian_eig: site_dim must be positive");
  if (hermiticity_defect(A) > 1e-12)
    raise(ErrorCode::NonHermitianInput, "hermitian_eig: Hermiticity defect exceeds 1e-12");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(A);
  if (solver.info() != Eigen::Success)
    raise(ErrorCode::ConvergenceFailure, "hermitian_eig: eigensolver did not converge");

  EigenDecomposition out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();

  const int n = static_cast<int>(out.eigenvalues.size());
  double scale = std::max(out.eigenvalues.cwiseAbs().maxCoeff(), 1.0);
  double cluster_tol = 1e-12 * scale;

  // Reorder inside numerically degenerate clusters; ascending order is already
  // guaranteed by the solver.
  int lo = 0;
  while (lo < n) {
    int hi = lo + 1;
    while (hi < n && out.eigenvalues[hi] - out.eigenvalues[hi - 1] <= cluster_tol) ++hi;
    if (hi - lo > 1) {
      std::vector<int> idx(hi - lo);
      std::iota(idx.begin(), idx.end(), lo);
      std::vector<double> weight(hi - lo);
      std::vector<int> first(hi - lo);
      for (int i = lo; i < hi; ++i) {
        Vector col = out.eigenvectors.col(i);
        weight[i - lo] = first_site_weight(col, site_dim);
        first[i - lo] = first_significant_index(col);
      }
      std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        double wa = weight[a - lo], wb = weight[b - lo];
        if (std::abs(wa - wb) > 1e-12) return wa > wb;
        return first[a - lo] < first[b - lo];
      });
      Matrix block(out.eigenvectors.rows(), hi - lo);
      RealVector vals(hi - lo);
      for (int j = 0; j < hi - lo; ++j) {
        block.col(j) = out.eigenvectors.col(idx[j]);
        vals[j] = out.eigenvalues[idx[j]];
      }
      out.eigenvectors.middleCols(lo, hi - lo) = block;
      out.eigenvalues.segment(lo, hi - lo) = vals;
    }
    lo = hi;
  }

  for (int i = 0; i < n; ++i) {
    Vector col = out.eigenvectors.col(i);
    canonical_phase(col);
    out.eigenvectors.col(i) = col;
  }
  return out;
}

Matrix spectral_projector(const EigenDecomposition& eig, int n_occ) {
  const int n = static_cast<int>(eig.eigenvalues.size());
  if (n_occ <= 0 || n_occ > n)
    raise(ErrorCode::InvalidOccupation, "spectral_projector: n_occ out of range");
  const auto& V = eig.eigenvectors;
  return V.leftCols(n_occ) * V.leftCols(n_occ).adjoint();
}

double operator_norm(const Matrix& A) {
  if (A.rows() != A.cols()) raise(ErrorCode::ShapeMismatch, "operator_norm: matrix not square");
  if (A.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(A);
  return svd.singularValues()(0);
}

} // namespace latqfi
