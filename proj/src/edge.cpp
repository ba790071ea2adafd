#include "latqfi/edge.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace latqfi {

namespace {

const Complex I(0.0, 1.0);
constexpr double kPi = 3.14159265358979323846;

double norm_factor(double r, int L) {
  // (1 - r^2) / (1 - r^(2L)). 1 - r is exact for r in [0.5, 1); forming
  // 1 - r*r or log(r) directly loses half the digits there.
  if (r == 0.0) return 1.0;
  const double om = 1.0 - r;
  const double one_minus_q = -std::expm1(2.0 * L * std::log1p(-om));
  return om * (1.0 + r) / one_minus_q;
}

} // namespace

PureState phi_z_state(Complex z, int L) {
  if (L < 1) raise(ErrorCode::InvalidSize, "phi_z_state: L must be >= 1");
  double r = std::abs(z);
  if (r >= 1.0) raise(ErrorCode::InvalidZ, "phi_z_state: |z| must be < 1");
  double n = std::sqrt(norm_factor(r, L));
  Vector amp(L);
  Complex zj = 1.0;
  for (int j = 0; j < L; ++j) {
    amp[j] = n * zj;
    zj *= z;
  }
  return {amp};
}

double qfi_phi_z_closed_form(double r, double dr_dlambda, int L) {
  if (r < 0.0 || r >= 1.0) raise(ErrorCode::InvalidR, "qfi_phi_z_closed_form: r must lie in [0,1)");
  if (L < 1) raise(ErrorCode::InvalidSize, "qfi_phi_z_closed_form: L must be >= 1");
  const double om = 1.0 - r; // exact for r in [0.5, 1)
  const double one_minus_s = om * (1.0 + r);
  const double edge_term = 1.0 / (one_minus_s * one_minus_s);
  double tail;
  if (r == 0.0) {
    tail = (L == 1) ? 1.0 : 0.0; // r^(2L-2) at r = 0
  } else {
    const double log_r = std::log1p(-om);
    const double one_minus_q = -std::expm1(2.0 * L * log_r);
    const double g = L / one_minus_q;
    tail = std::exp((2.0 * L - 2.0) * log_r) * g * g;
  }
  return 4.0 * dr_dlambda * dr_dlambda * (edge_term - tail);
}

double qfi_phi_z_complex(double r, double /*theta*/, double dr_dlambda, double dtheta_dlambda, int L) {
  return qfi_phi_z_closed_form(r, 1.0, L) *
         (dr_dlambda * dr_dlambda + dtheta_dlambda * dtheta_dlambda);
}

double qfi_tpt_limit(double dr_dlambda, double dtheta_dlambda, int L) {
  if (L < 1) raise(ErrorCode::InvalidSize, "qfi_tpt_limit: L must be >= 1");
  double speed2 = dr_dlambda * dr_dlambda + dtheta_dlambda * dtheta_dlambda;
  return (static_cast<double>(L) * L - 1.0) * speed2 / 3.0;
}

EdgeAnsatz ssh_edge_family(double lambda, int L) {
  if (lambda < 0.0) raise(ErrorCode::InvalidParams, "ssh_edge_family: lambda must be >= 0");
  if (lambda >= 1.0)
    raise(ErrorCode::OutsideTopologicalPhase,
          "ssh_edge_family: no edge state for lambda >= 1");
  EdgeAnsatz a;
  a.z = Complex(-lambda, 0.0);
  a.u = Vector::Zero(2);
  a.u[0] = 1.0;
  a.L = L;
  a.dz_dlambda = Complex(-1.0, 0.0);
  a.du_dlambda = Vector::Zero(2);
  return a;
}

bool chern_wire_ansatz_valid(double kx, double lambda, double t1, double t2) {
  if (t2 == 0.0) return false;
  double scale = std::max(std::abs(t1), std::abs(t2));
  if (std::abs(t1 - t2) > 1e-12 * scale) return false;
  bool at_dirac_kx = std::abs(kx - kPi / 2) <= 1e-12 || std::abs(kx + kPi / 2) <= 1e-12;
  if (!at_dirac_kx) return false;
  double eps = lambda * t2 + 2.0 * t2 * std::sin(kx);
  return std::abs(eps / (t1 + t2)) < 1.0;
}

EdgeAnsatz chern_wire_edge_family(double kx, double lambda, double t1, double t2, int L2) {
  if (t2 == 0.0) raise(ErrorCode::InvalidParams, "chern_wire_edge_family: t2 must be nonzero");
  double scale = std::max(std::abs(t1), std::abs(t2));
  if (std::abs(t1 - t2) > 1e-12 * scale)
    raise(ErrorCode::InvalidParams, "chern_wire_edge_family: requires t1 == t2");
  if (std::abs(kx - kPi / 2) > 1e-12 && std::abs(kx + kPi / 2) > 1e-12)
    raise(ErrorCode::InvalidParams, "chern_wire_edge_family: requires kx = +/- pi/2");
  double eps = lambda * t2 + 2.0 * t2 * std::sin(kx);
  Complex z = -I * eps / (t1 + t2);
  if (std::abs(z) >= 1.0)
    raise(ErrorCode::OutsideTopologicalPhase,
          "chern_wire_edge_family: |z| >= 1, no normalizable edge state");
  EdgeAnsatz a;
  a.z = z;
  a.u = Vector::Constant(2, Complex(1.0 / std::sqrt(2.0), 0.0));
  a.L = L2;
  a.dz_dlambda = -I * t2 / (t1 + t2);
  a.du_dlambda = Vector::Zero(2);
  return a;
}

PureState materialize(const EdgeAnsatz& ansatz) {
  PureState spatial = phi_z_state(ansatz.z, ansatz.L);
  const int d = static_cast<int>(ansatz.u.size());
  Vector amp(ansatz.L * d);
  for (int j = 0; j < ansatz.L; ++j)
    for (int m = 0; m < d; ++m) amp[j * d + m] = spatial.amplitudes[j] * ansatz.u[m];
  return {amp};
}

StateDerivative materialize_with_derivative(const EdgeAnsatz& ansatz) {
  if (ansatz.du_dlambda.norm() > 1e-12)
    raise(ErrorCode::InvalidParams,
          "materialize_with_derivative: nonzero du_dlambda is not supported");
  const int L = ansatz.L;
  const Complex z = ansatz.z;
  const Complex dz = ansatz.dz_dlambda;
  const double r = std::abs(z);
  const double dr = r > 0.0 ? std::real(std::conj(z) * dz) / r : 0.0;

  double n2 = norm_factor(r, L);
  double n = std::sqrt(n2);
  // d(n^2)/dr, away from cancellation via the same expm1 denominator.
  double dn = 0.0;
  if (r > 0.0) {
    const double log_r = std::log1p(-(1.0 - r));
    const double one_minus_q = -std::expm1(2.0 * L * log_r);
    const double dn2 = (-2.0 * r * one_minus_q + (1.0 - r) * (1.0 + r) * 2.0 * L *
                                                     std::exp((2.0 * L - 1.0) * log_r)) /
                       (one_minus_q * one_minus_q);
    dn = dn2 / (2.0 * n);
  }

  Vector phi(L), dphi(L);
  Complex zj = 1.0;       // z^j
  Complex zjm1 = 0.0;     // z^(j-1), unused at j = 0
  for (int j = 0; j < L; ++j) {
    phi[j] = n * zj;
    dphi[j] = dn * dr * zj;
    if (j >= 1) dphi[j] += n * static_cast<double>(j) * zjm1 * dz;
    zjm1 = zj;
    zj *= z;
  }
  // Remove the imaginary part of <phi|dphi> (smooth-phase gauge).
  Complex overlap = phi.dot(dphi);
  dphi -= I * std::imag(overlap) * phi;

  const int d = static_cast<int>(ansatz.u.size());
  StateDerivative sd;
  sd.base.amplitudes = Vector(L * d);
  sd.derivative = Vector(L * d);
  for (int j = 0; j < L; ++j)
    for (int m = 0; m < d; ++m) {
      sd.base.amplitudes[j * d + m] = phi[j] * ansatz.u[m];
      sd.derivative[j * d + m] = dphi[j] * ansatz.u[m];
    }
  sd.step = 0.0;
  return sd;
}

double qfi(const EdgeAnsatz& ansatz) {
  double r = std::abs(ansatz.z);
  double dr, dtheta;
  if (r == 0.0) {
    dr = std::abs(ansatz.dz_dlambda);
    dtheta = 0.0;
  } else {
    Complex rotated = std::conj(ansatz.z) / r * ansatz.dz_dlambda;
    dr = std::real(rotated);
    dtheta = std::imag(rotated) / r;
  }
  return qfi_phi_z_complex(r, std::arg(ansatz.z), dr, dtheta, ansatz.L);
}

std::pair<PureState, double> extract_edge_state(const Matrix& H, int d) {
  EigenDecomposition eig = hermitian_eig(H, d);
  const int n = static_cast<int>(eig.eigenvalues.size());
  const int sites = (n + d - 1) / d;
  const int window = (sites + 3) / 4; // ceil(L/4)

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(eig.eigenvalues[a]) < std::abs(eig.eigenvalues[b]);
  });

  auto window_weight = [&](int i) {
    double w = 0.0;
    for (int row = 0; row < std::min(n, window * d); ++row)
      w += std::norm(eig.eigenvectors(row, i));
    return w;
  };

  if (n >= 2) {
    double e0 = std::abs(eig.eigenvalues[order[0]]);
    double e1 = std::abs(eig.eigenvalues[order[1]]);
    if (e1 - e0 < 1e-12 &&
        std::abs(window_weight(order[0]) - window_weight(order[1])) < 1e-6)
      raise(ErrorCode::NoGapIsolation,
            "extract_edge_state: two lowest |E| states are numerically indistinguishable");
  }

  double e_min = std::abs(eig.eigenvalues[order[0]]);
  int best = order[0];
  double best_w = window_weight(best);
  for (int rank = 1; rank < n; ++rank) {
    int i = order[rank];
    if (std::abs(eig.eigenvalues[i]) > e_min + 1e-8) break;
    double w = window_weight(i);
    if (w > best_w) { best = i; best_w = w; }
  }
  return {{Vector(eig.eigenvectors.col(best))}, eig.eigenvalues[best]};
}

PureState extract_bulk_state(const Matrix& H) {
  EigenDecomposition eig = hermitian_eig(H);
  const int n = static_cast<int>(eig.eigenvalues.size());
  double scale = std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
  int best = -1;
  for (int i = 0; i < n; ++i) {
    if (eig.eigenvalues[i] < -1e-10 * scale) best = i; // ascending order: last hit is the band top
    else break;
  }
  if (best < 0) raise(ErrorCode::NoLowerBand, "extract_bulk_state: no strictly negative eigenvalue");
  return {Vector(eig.eigenvectors.col(best))};
}

double localization_parameter(const PureState& psi, int d) {
  RealVector p = site_marginal(psi, d);
  const int sites = static_cast<int>(p.size());
  double tail = 0.0;
  for (int j = 1; j < sites; ++j) tail += p[j];
  if (tail <= 1e-28) return 0.0; // fully localized on site 0

  const int j_hi = std::min(sites / 2, sites - 2); // ratios p_{j+1}/p_j for j in [1, L/2]
  if (j_hi < 1) raise(ErrorCode::InvalidParams, "localization_parameter: chain too short");

  int violations = 0;
  int count = 0;
  double log_sum = 0.0;
  for (int j = 1; j <= j_hi; ++j) {
    double a = std::max(p[j], 1e-300);
    double b = std::max(p[j + 1], 1e-300);
    if (p[j + 1] > p[j]) ++violations;
    log_sum += 0.5 * std::log(b / a);
    ++count;
  }
  if (violations * 5 > count)
    raise(ErrorCode::NonMonotonic, "localization_parameter: profile is not decaying");
  return std::exp(log_sum / count);
}

Vector drop_decoupled(const Vector& full, const BlockHamiltonian1D& h) {
  if (full.size() != static_cast<Eigen::Index>(h.L) * h.d)
    raise(ErrorCode::ShapeMismatch, "drop_decoupled: vector does not match L*d");
  if (h.decoupled_orbitals.empty()) return full;
  std::vector<int> removed;
  for (const auto& [site, orb] : h.decoupled_orbitals) removed.push_back(site * h.d + orb);
  Vector out(full.size() - static_cast<Eigen::Index>(removed.size()));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < full.size(); ++i) {
    if (std::find(removed.begin(), removed.end(), static_cast<int>(i)) != removed.end()) continue;
    out[k++] = full[i];
  }
  return out;
}

} // namespace latqfi
