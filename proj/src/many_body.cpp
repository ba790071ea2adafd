#include "latqfi/many_body.hpp"

#include <cmath>

namespace latqfi {

namespace {

constexpr double kPi = 3.14159265358979323846;

double bloch_gap(const ModelFamily& family, double lambda, const std::array<double, 2>& k) {
  EigenDecomposition eig = hermitian_eig(bloch_matrix(family, lambda, k));
  return eig.eigenvalues[1] - eig.eigenvalues[0];
}

PureState lower_band_state(const ModelFamily& family, double lambda, const std::array<double, 2>& k) {
  EigenDecomposition eig = hermitian_eig(bloch_matrix(family, lambda, k));
  return {Vector(eig.eigenvectors.col(0))};
}

} // namespace

OccupiedSubspace occupied_subspace(const EigenDecomposition& eig, int n_occ) {
  const int n = static_cast<int>(eig.eigenvalues.size());
  if (n_occ <= 0 || n_occ > n)
    raise(ErrorCode::InvalidOccupation, "occupied_subspace: n_occ out of range");
  OccupiedSubspace occ;
  occ.states = eig.eigenvectors.leftCols(n_occ);
  occ.projector = occ.states * occ.states.adjoint();
  occ.N = n_occ;
  occ.filling = static_cast<double>(n_occ) / n;
  return occ;
}

double qfi_slater_states(const OccupiedSubspace& occ, const std::vector<Vector>& derivs) {
  if (static_cast<int>(derivs.size()) != occ.N)
    raise(ErrorCode::DimensionMismatch, "qfi_slater_states: need one derivative per occupied state");
  const Eigen::Index dim = occ.states.rows();
  double sum = 0.0;
  for (const Vector& dpsi : derivs) {
    if (dpsi.size() != dim)
      raise(ErrorCode::DimensionMismatch, "qfi_slater_states: derivative dimension mismatch");
    Vector residual = dpsi - occ.projector * dpsi;
    sum += std::real(dpsi.dot(residual));
  }
  return 4.0 * sum;
}

double qfi_slater_projector(const Matrix& P_minus, const Matrix& P_plus, double h) {
  if (P_minus.rows() != P_plus.rows() || P_minus.cols() != P_plus.cols())
    raise(ErrorCode::DimensionMismatch, "qfi_slater_projector: projector dimensions differ");
  if (h <= 0) raise(ErrorCode::InvalidParams, "qfi_slater_projector: step must be positive");
  if ((P_minus * P_minus - P_minus).norm() > 1e-8 || (P_plus * P_plus - P_plus).norm() > 1e-8)
    raise(ErrorCode::NotAProjector, "qfi_slater_projector: input is not idempotent within 1e-8");
  Matrix diff = P_plus - P_minus;
  Matrix dP = (diff + diff.adjoint()) / (4.0 * h); // symmetrized central difference
  return 2.0 * dP.squaredNorm();                   // Tr[dP^2] for Hermitian dP
}

KGrid momentum_grid(const ModelFamily& family, double lambda, int L, double gap_floor) {
  if (L < 2) raise(ErrorCode::InvalidSize, "momentum_grid: L must be >= 2");
  KGrid grid;
  grid.gap_floor = gap_floor;
  if (family.dimension() == 1) {
    for (int kappa = 0; kappa < L; ++kappa)
      grid.points.push_back({{(2.0 * kPi * kappa) / L, 0.0}, {kappa, 0}});
  } else {
    for (int kx = 0; kx < L; ++kx)
      for (int ky = 0; ky < L; ++ky)
        grid.points.push_back({{(2.0 * kPi * kx) / L, (2.0 * kPi * ky) / L}, {kx, ky}});
  }
  for (int i = 0; i < static_cast<int>(grid.points.size()); ++i)
    if (bloch_gap(family, lambda, grid.points[i].k) < gap_floor) grid.excluded.push_back(i);
  return grid;
}

PbcSumResult qfi_pbc_sum(const ModelFamily& family, double lambda, int L, double gap_floor) {
  PbcSumResult result;
  result.grid = momentum_grid(family, lambda, L, gap_floor);
  if (result.grid.excluded.size() == result.grid.points.size())
    raise(ErrorCode::AllExcluded, "qfi_pbc_sum: every momentum is gapless");

  const double h = default_fd_step(lambda);
  auto excluded_it = result.grid.excluded.begin();
  for (int i = 0; i < static_cast<int>(result.grid.points.size()); ++i) {
    if (excluded_it != result.grid.excluded.end() && *excluded_it == i) {
      ++excluded_it;
      continue;
    }
    const auto& k = result.grid.points[i].k;
    StateDerivative sd = numerical_state_derivative(
        [&](double lam) { return lower_band_state(family, lam, k); }, lambda, h);
    result.value += qfi_pure(sd);
  }
  return result;
}

double ssh_tpt_closed_form(int L) {
  if (L < 2 || L % 2 != 0) raise(ErrorCode::OddL, "ssh_tpt_closed_form: L must be even and >= 2");
  double dL = L;
  return (dL * dL - 3.0 * dL + 2.0) / 12.0;
}

double ssh_continuum_limit(double lambda) {
  if (lambda < 0) raise(ErrorCode::InvalidParams, "ssh_continuum_limit: lambda must be >= 0");
  if (std::abs(lambda - 1.0) < 1e-9)
    raise(ErrorCode::AtCriticality, "ssh_continuum_limit: diverges at lambda = 1");
  double l2 = lambda * lambda;
  if (lambda < 1.0) return 1.0 / (2.0 * (1.0 - l2));
  return 1.0 / (2.0 * (l2 * l2 - l2));
}

double chern_tpt_sum(int L, double t1, double t2) {
  if (L < 2) raise(ErrorCode::InvalidSize, "chern_tpt_sum: L must be >= 2");
  if (t2 == 0.0) raise(ErrorCode::InvalidParams, "chern_tpt_sum: t2 must be nonzero");
  double sum = 0.0;
  for (int ix = 0; ix < L; ++ix) {
    double kx = (2.0 * kPi * ix) / L;
    for (int iy = 0; iy < L; ++iy) {
      double ky = (2.0 * kPi * iy) / L;
      Eigen::Vector3d B = chern_bloch_field(kx, ky, -4.0, t1, t2);
      double s = B[0] * B[0] + B[1] * B[1];
      double e2 = s + B[2] * B[2];
      if (e2 < 1e-24) continue; // Dirac point
      sum += s / (4.0 * e2 * e2);
    }
  }
  return sum;
}

double qfi_mode_upper_bound(double dH_norm, double gap) {
  if (gap <= 0) raise(ErrorCode::GaplessInput, "qfi_mode_upper_bound: gap must be positive");
  return 4.0 * dH_norm * dH_norm / (gap * gap);
}

double band_inversion_lowest_modes(int L, double alpha, double lambda, double lambda_c) {
  if (alpha == 0.0) raise(ErrorCode::InvalidParams, "band_inversion_lowest_modes: alpha must be nonzero");
  if (L < 1) raise(ErrorCode::InvalidSize, "band_inversion_lowest_modes: L must be >= 1");
  // Lower eigenvector of B = (alpha k, 0, m) has Bloch angle gamma with
  // tan(gamma) = alpha k / m; per-mode QFI (d gamma/d lambda)^2 =
  // (alpha k)^2 / (m^2 + (alpha k)^2)^2. The k = 0 mode contributes 0.
  double a = alpha / L; // lowest nonzero mode k_1 = 1/L
  double m = lambda - lambda_c;
  double denom = m * m + a * a;
  return (a * a) / (denom * denom);
}

double qfi_manybody_obc(const ModelFamily& family, double lambda, int L, double h) {
  if (h <= 0) raise(ErrorCode::InvalidParams, "qfi_manybody_obc: step must be positive");
  auto half_filled_projector = [](const Matrix& H) {
    EigenDecomposition eig = hermitian_eig(H);
    return spectral_projector(eig, static_cast<int>(H.rows()) / 2);
  };
  switch (family.kind) {
    case ModelFamily::Kind::SSH: {
      auto H_at = [&](double lam) { return assemble_dense(build_ssh(lam, L, false)); };
      return qfi_slater_projector(half_filled_projector(H_at(lambda - h)),
                                  half_filled_projector(H_at(lambda + h)), h);
    }
    case ModelFamily::Kind::ChernWire: {
      auto H_at = [&](double lam) {
        return assemble_dense(build_chern_wire(family.kx, lam, family.t1, family.t2, L));
      };
      return qfi_slater_projector(half_filled_projector(H_at(lambda - h)),
                                  half_filled_projector(H_at(lambda + h)), h);
    }
    case ModelFamily::Kind::ChernBloch: {
      double sum = 0.0;
      for (int kappa = 0; kappa < L; ++kappa) {
        double kx = (2.0 * kPi * kappa) / L;
        auto H_at = [&](double lam) {
          return assemble_dense(build_chern_wire(kx, lam, family.t1, family.t2, L));
        };
        sum += qfi_slater_projector(half_filled_projector(H_at(lambda - h)),
                                    half_filled_projector(H_at(lambda + h)), h);
      }
      return sum;
    }
    default:
      break;
  }
  raise(ErrorCode::InvalidParams, "qfi_manybody_obc: unsupported family");
}

} // namespace latqfi
