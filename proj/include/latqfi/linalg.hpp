#pragma once

#include <complex>
#include <Eigen/Dense>

#include "latqfi/errors.hpp"

namespace latqfi {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct EigenDecomposition {
  RealVector eigenvalues; // ascending
  Matrix eigenvectors;    // columns, orthonormal, ordering and phase canonical
};

// Relative Hermiticity defect max|A - A^dag| / max|A|.
double hermiticity_defect(const Matrix& A);

// Full spectrum with deterministic ordering: ascending eigenvalue; inside a
// degenerate cluster descending weight on the first lattice site (the first
// site_dim components), then ascending index of the first component with
// magnitude above threshold. Each eigenvector's phase is fixed so its largest
// component is real positive.
EigenDecomposition hermitian_eig(const Matrix& A, int site_dim = 1);

// P = sum_{l < n_occ} v_l v_l^dag over the lowest-eigenvalue states.
Matrix spectral_projector(const EigenDecomposition& eig, int n_occ);

// Largest singular value.
double operator_norm(const Matrix& A);

} // namespace latqfi
