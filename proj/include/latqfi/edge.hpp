#pragma once

#include "latqfi/estimation.hpp"
#include "latqfi/models.hpp"

namespace latqfi {

struct EdgeAnsatz {
  Complex z;           // |z| < 1
  Vector u;            // unit internal vector of length d
  int L = 0;           // site count
  Complex dz_dlambda;
  Vector du_dlambda;   // zero for every family provided here
};

// Normalized geometric amplitudes sqrt((1-|z|^2)/(1-|z|^(2L))) * z^j.
PureState phi_z_state(Complex z, int L);

// Closed-form QFI of phi_z for real localization parameter r = |z|.
double qfi_phi_z_closed_form(double r, double dr_dlambda, int L);

// Complex-z form: qfi_phi_z_closed_form(r, 1, L) * (dr^2 + dtheta^2).
double qfi_phi_z_complex(double r, double theta, double dr_dlambda, double dtheta_dlambda, int L);

// Delocalization limit (L^2 - 1) * (dr^2 + dtheta^2) / 3.
double qfi_tpt_limit(double dr_dlambda, double dtheta_dlambda, int L);

EdgeAnsatz ssh_edge_family(double lambda, int L);

// Exact semi-infinite edge solution of the virtual wire, valid at
// kx = +/- pi/2 with t1 == t2: u = (1,1)/sqrt(2), z = -i(mz + 2 t2 sin kx)/(t1 + t2).
EdgeAnsatz chern_wire_edge_family(double kx, double lambda, double t1, double t2, int L2);
bool chern_wire_ansatz_valid(double kx, double lambda, double t1, double t2);

PureState materialize(const EdgeAnsatz& ansatz);
StateDerivative materialize_with_derivative(const EdgeAnsatz& ansatz);
double qfi(const EdgeAnsatz& ansatz);

// Eigenstate of minimal |E|; candidates within 1e-8 of the minimum are
// disambiguated by weight on the first ceil(L/4) sites.
std::pair<PureState, double> extract_edge_state(const Matrix& H, int d);

// Top of the lower band: largest eigenvalue strictly below zero (zero modes at
// +/-1e-16 excluded by a -1e-10 relative threshold).
PureState extract_bulk_state(const Matrix& H);

// Geometric-mean decay ratio over sites [1, L/2]; |z| for exact phi_z states.
double localization_parameter(const PureState& psi, int d);

// Restriction of a full L*d vector to the rows kept by the block Hamiltonian;
// components on decoupled orbitals must vanish.
Vector drop_decoupled(const Vector& full, const BlockHamiltonian1D& h);

} // namespace latqfi
