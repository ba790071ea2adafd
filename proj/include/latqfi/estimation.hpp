#pragma once

#include <functional>

#include "latqfi/linalg.hpp"

namespace latqfi {

struct PureState {
  Vector amplitudes; // unit norm within 1e-10
};

struct StateDerivative {
  PureState base;
  Vector derivative; // gauge: Im<base|derivative> = 0 within 1e-8
  double step = 0.0; // finite-difference step, 0 for analytic
};

struct ProbabilityVector {
  RealVector p;  // p_j >= 0, sums to 1 within 1e-10
  RealVector dp; // sums to 0 within 1e-8
};

ProbabilityVector make_probability_vector(RealVector p, RealVector dp);

// F = 4(<d psi|d psi> - |<psi|d psi>|^2); clamped to 0 above -1e-8.
double qfi_pure(const StateDerivative& sd);

// Sum of dp^2/p over entries with p > 1e-14.
double cfi(const ProbabilityVector& pv);

// Central difference with the phase of psi(lambda +/- h) fixed so its overlap
// with psi(lambda) is real positive.
StateDerivative numerical_state_derivative(const std::function<PureState(double)>& state_at,
                                           double lambda, double h);

double default_fd_step(double lambda);

// Site marginals p_j = sum_m |psi_{j,m}|^2; a trailing site may carry fewer
// than d orbitals (decoupled orbitals contribute zero weight).
RealVector site_marginal(const PureState& psi, int d);
ProbabilityVector position_probabilities(const StateDerivative& sd, int d);

// L = 2(|d psi><psi| + |psi><d psi|) kept in factored form.
struct SldOperator {
  Vector psi;
  Vector dpsi;
  Matrix dense() const;
  // Orthonormal eigenbasis of the rank-<=2 operator padded to a full basis;
  // measurement probabilities in this basis give CFI = QFI.
  Matrix eigenbasis() const;
};

SldOperator sld_pure(const StateDerivative& sd);

// CFI of the measurement defined by the columns of `basis` applied to sd.
double cfi_in_basis(const StateDerivative& sd, const Matrix& basis);

} // namespace latqfi
