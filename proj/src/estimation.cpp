#include "latqfi/estimation.hpp"

#include <cmath>

namespace latqfi {

namespace {

constexpr double kProbFloor = 1e-14;

void check_normalized(const Vector& psi, const char* who) {
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    raise(ErrorCode::InvalidParams, std::string(who) + ": state is not normalized");
}

} // namespace

ProbabilityVector make_probability_vector(RealVector p, RealVector dp) {
  if (p.size() != dp.size())
    raise(ErrorCode::ShapeMismatch, "probability vector: p and dp lengths differ");
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] < -1e-12) raise(ErrorCode::InvalidParams, "probability vector: negative entry");
    if (p[i] < 0) p[i] = 0.0;
  }
  if (std::abs(p.sum() - 1.0) > 1e-10)
    raise(ErrorCode::InvalidParams, "probability vector: probabilities do not sum to 1");
  if (std::abs(dp.sum()) > 1e-8)
    raise(ErrorCode::InvalidParams, "probability vector: derivative does not sum to 0");
  return {std::move(p), std::move(dp)};
}

double qfi_pure(const StateDerivative& sd) {
  check_normalized(sd.base.amplitudes, "qfi_pure");
  const Vector& psi = sd.base.amplitudes;
  const Vector& dpsi = sd.derivative;
  if (psi.size() != dpsi.size())
    raise(ErrorCode::ShapeMismatch, "qfi_pure: derivative length differs from state");
  double dd = dpsi.squaredNorm();
  Complex overlap = psi.dot(dpsi);
  double f = 4.0 * (dd - std::norm(overlap));
  if (f < -1e-8) raise(ErrorCode::NegativeResult, "qfi_pure: negative value signals a broken derivative");
  return f < 0 ? 0.0 : f;
}

double cfi(const ProbabilityVector& pv) {
  bool any = false;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < pv.p.size(); ++i) {
    if (pv.p[i] > kProbFloor) {
      any = true;
      sum += pv.dp[i] * pv.dp[i] / pv.p[i];
    }
  }
  if (!any) raise(ErrorCode::DegenerateDistribution, "cfi: all probabilities below 1e-14");
  return sum;
}

double default_fd_step(double lambda) { return 1e-5 * std::max(1.0, std::abs(lambda)); }

StateDerivative numerical_state_derivative(const std::function<PureState(double)>& state_at,
                                           double lambda, double h) {
  if (h <= 0) raise(ErrorCode::InvalidParams, "numerical_state_derivative: step must be positive");
  PureState psi0 = state_at(lambda);
  PureState psi_p = state_at(lambda + h);
  PureState psi_m = state_at(lambda - h);
  check_normalized(psi0.amplitudes, "numerical_state_derivative");
  check_normalized(psi_p.amplitudes, "numerical_state_derivative");
  check_normalized(psi_m.amplitudes, "numerical_state_derivative");

  Complex op = psi0.amplitudes.dot(psi_p.amplitudes);
  Complex om = psi0.amplitudes.dot(psi_m.amplitudes);
  if (std::abs(op) < 0.5 || std::abs(om) < 0.5)
    raise(ErrorCode::StateCrossing,
          "numerical_state_derivative: overlap below 0.5, selector jumped branch");

  Vector plus = psi_p.amplitudes * (std::conj(op) / std::abs(op));
  Vector minus = psi_m.amplitudes * (std::conj(om) / std::abs(om));
  StateDerivative sd;
  sd.base = std::move(psi0);
  sd.derivative = (plus - minus) / (2.0 * h);
  sd.step = h;
  return sd;
}

RealVector site_marginal(const PureState& psi, int d) {
  if (d <= 0) raise(ErrorCode::ShapeMismatch, "site_marginal: orbital count must be positive");
  const Eigen::Index n = psi.amplitudes.size();
  if (n == 0) raise(ErrorCode::ShapeMismatch, "site_marginal: empty state");
  const Eigen::Index sites = (n + d - 1) / d;
  RealVector p = RealVector::Zero(sites);
  for (Eigen::Index i = 0; i < n; ++i) p[i / d] += std::norm(psi.amplitudes[i]);
  return p;
}

ProbabilityVector position_probabilities(const StateDerivative& sd, int d) {
  if (d <= 0) raise(ErrorCode::ShapeMismatch, "position_probabilities: orbital count must be positive");
  if (sd.base.amplitudes.size() != sd.derivative.size())
    raise(ErrorCode::ShapeMismatch, "position_probabilities: derivative length differs from state");
  RealVector p = site_marginal(sd.base, d);
  RealVector dp = RealVector::Zero(p.size());
  for (Eigen::Index i = 0; i < sd.base.amplitudes.size(); ++i)
    dp[i / d] += 2.0 * std::real(std::conj(sd.base.amplitudes[i]) * sd.derivative[i]);
  return make_probability_vector(std::move(p), std::move(dp));
}

Matrix SldOperator::dense() const {
  return 2.0 * (dpsi * psi.adjoint() + psi * dpsi.adjoint());
}

Matrix SldOperator::eigenbasis() const {
  const Eigen::Index n = psi.size();
  Vector w = dpsi - psi * psi.dot(dpsi);
  Matrix span(n, 2);
  span.col(0) = psi;
  span.col(1) = w.norm() > 1e-14 ? Vector(w / w.norm()) : Vector(Vector::Zero(n));
  Eigen::HouseholderQR<Matrix> qr(span);
  Matrix basis = qr.householderQ();
  // Rotate the first two columns into SLD eigenvectors; the orthogonal
  // complement is annihilated by the rank-2 operator.
  Matrix q2 = basis.leftCols(2);
  Matrix m(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Complex qid = q2.col(i).dot(dpsi);
      Complex qip = q2.col(i).dot(psi);
      m(i, j) = 2.0 * (qid * std::conj(q2.col(j).dot(psi)) + qip * std::conj(q2.col(j).dot(dpsi)));
    }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  basis.leftCols(2) = q2 * solver.eigenvectors();
  return basis;
}

SldOperator sld_pure(const StateDerivative& sd) {
  check_normalized(sd.base.amplitudes, "sld_pure");
  return {sd.base.amplitudes, sd.derivative};
}

double cfi_in_basis(const StateDerivative& sd, const Matrix& basis) {
  const Eigen::Index n = basis.cols();
  RealVector p(n), dp(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Complex a = basis.col(i).dot(sd.base.amplitudes);
    Complex da = basis.col(i).dot(sd.derivative);
    p[i] = std::norm(a);
    dp[i] = 2.0 * std::real(std::conj(a) * da);
  }
  return cfi(make_probability_vector(std::move(p), std::move(dp)));
}

} // namespace latqfi
