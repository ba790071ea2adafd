#pragma once

#include <array>
#include <vector>

#include "latqfi/estimation.hpp"
#include "latqfi/models.hpp"

namespace latqfi {

struct OccupiedSubspace {
  Matrix states;    // dim x N orthonormal columns
  Matrix projector; // P = states states^dag
  int N = 0;
  double filling = 0.0;
};

OccupiedSubspace occupied_subspace(const EigenDecomposition& eig, int n_occ);

struct KPoint {
  std::array<double, 2> k;
  std::array<int, 2> kappa;
};

struct KGrid {
  std::vector<KPoint> points;    // row-major kappa order
  std::vector<int> excluded;     // indices into points with gap < gap_floor
  double gap_floor = 1e-12;
};

KGrid momentum_grid(const ModelFamily& family, double lambda, int L, double gap_floor = 1e-12);

// 4 sum_l <d psi_l|(1 - P)|d psi_l>.
double qfi_slater_states(const OccupiedSubspace& occ, const std::vector<Vector>& derivs);

// 2 Tr[(dP)^2] with dP = (P_plus - P_minus)/(2h); gauge-free equivalent of the
// per-state sum.
double qfi_slater_projector(const Matrix& P_minus, const Matrix& P_plus, double h);

struct PbcSumResult {
  double value = 0.0;
  KGrid grid;
};

// Sum over non-excluded momenta of the lower-band eigenvector's pure-state QFI
// (gauge-fixed numerical lambda-derivative per mode).
PbcSumResult qfi_pbc_sum(const ModelFamily& family, double lambda, int L, double gap_floor = 1e-12);

// (L^2 - 3L + 2)/12 for even L.
double ssh_tpt_closed_form(int L);

// QFI per site: 1/(2(1 - lambda^2)) below criticality, 1/(2(lambda^4 - lambda^2)) above.
double ssh_continuum_limit(double lambda);

// Critical Chern sum over the L x L grid at m_z = -4 t2, Dirac point excluded:
// sum (Bx^2 + By^2)/(4 E^4). Note: the true per-mode QFI is 4x this summand;
// qfi_pbc_sum at lambda = -4 returns 4x this value.
double chern_tpt_sum(int L, double t1, double t2);

// 4 dH_norm^2 / gap^2.
double qfi_mode_upper_bound(double dH_norm, double gap);

// F at k = 0 plus k = 1/L for H_k = alpha k sigma_x + (lambda - lambda_c) sigma_z,
// from the exact lower eigenvector; equals L^2/alpha^2 at lambda = lambda_c.
double band_inversion_lowest_modes(int L, double alpha, double lambda, double lambda_c);

// Open-boundary many-body QFI via the projector method at half filling.
// SSH: plain open chain (no decoupling), dimension 2L. ChernBloch: strip
// geometry, deterministic sum of wire contributions over the kx grid.
double qfi_manybody_obc(const ModelFamily& family, double lambda, int L, double h = 1e-5);

} // namespace latqfi
