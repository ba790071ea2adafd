#include "latqfi/models.hpp"

#include <algorithm>
#include <cmath>

namespace latqfi {

namespace {

const Complex I(0.0, 1.0);

Matrix sigma_x() {
  Matrix s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

Matrix sigma_y() {
  Matrix s(2, 2);
  s << 0, -I, I, 0;
  return s;
}

Matrix sigma_z() {
  Matrix s(2, 2);
  s << 1, 0, 0, -1;
  return s;
}

} // namespace

ModelFamily family_from_id(const std::string& id) {
  ModelFamily f;
  if (id == "ssh") f.kind = ModelFamily::Kind::SSH;
  else if (id == "chern-wire") f.kind = ModelFamily::Kind::ChernWire;
  else if (id == "chern-bloch") f.kind = ModelFamily::Kind::ChernBloch;
  else if (id == "band-inversion") f.kind = ModelFamily::Kind::BandInversion;
  else raise(ErrorCode::InvalidParams, "unknown model id: " + id);
  return f;
}

std::string family_id(const ModelFamily& family) {
  switch (family.kind) {
    case ModelFamily::Kind::SSH: return "ssh";
    case ModelFamily::Kind::ChernWire: return "chern-wire";
    case ModelFamily::Kind::ChernBloch: return "chern-bloch";
    case ModelFamily::Kind::BandInversion: return "band-inversion";
    case ModelFamily::Kind::Custom: return "custom";
  }
  return "custom";
}

BlockHamiltonian1D build_ssh(double lambda, int L, bool decouple_last_b) {
  if (L < 2) raise(ErrorCode::InvalidSize, "build_ssh: L must be >= 2");
  if (lambda < 0) raise(ErrorCode::InvalidParams, "build_ssh: lambda must be >= 0");
  BlockHamiltonian1D h;
  h.L = L;
  h.d = 2;
  h.hop_blocks.resize(2);
  h.hop_blocks[0] = -lambda * sigma_x();
  Matrix h1(2, 2); // -(sigma_x - i sigma_y)/2
  h1 << 0, 0, -1, 0;
  h.hop_blocks[1] = h1;
  h.boundary = Boundary::open;
  if (decouple_last_b) h.decoupled_orbitals.push_back({L - 1, 1});
  return h;
}

Matrix ssh_bloch(double lambda, double k) {
  Matrix m(2, 2);
  m << 0.0, -(lambda + std::exp(-I * k)), -(lambda + std::exp(I * k)), 0.0;
  return m;
}

BlockHamiltonian1D build_chern_wire(double kx, double lambda, double t1, double t2, int L2) {
  if (t2 == 0.0) raise(ErrorCode::InvalidParams, "build_chern_wire: t2 must be nonzero");
  if (L2 < 2) raise(ErrorCode::InvalidSize, "build_chern_wire: L2 must be >= 2");
  const double mz = lambda * t2;
  BlockHamiltonian1D h;
  h.L = L2;
  h.d = 2;
  h.hop_blocks.resize(2);
  h.hop_blocks[0] = 2.0 * t1 * std::cos(kx) * sigma_x() + (mz + 2.0 * t2 * std::sin(kx)) * sigma_z();
  h.hop_blocks[1] = t1 * sigma_y() - I * t2 * sigma_z();
  h.boundary = Boundary::open;
  return h;
}

Eigen::Vector3d chern_bloch_field(double kx, double ky, double lambda, double t1, double t2) {
  if (t2 == 0.0) raise(ErrorCode::InvalidParams, "chern_bloch_field: t2 must be nonzero");
  const double mz = lambda * t2;
  return {2.0 * t1 * std::cos(kx), 2.0 * t1 * std::cos(ky),
          mz + 2.0 * t2 * (std::sin(kx) + std::sin(ky))};
}

Matrix chern_bloch(double kx, double ky, double lambda, double t1, double t2) {
  Eigen::Vector3d B = chern_bloch_field(kx, ky, lambda, t1, t2);
  return B[0] * sigma_x() + B[1] * sigma_y() + B[2] * sigma_z();
}

Matrix band_inversion_bloch(double k, double lambda, double alpha, double lambda_c) {
  if (alpha == 0.0) raise(ErrorCode::InvalidParams, "band_inversion_bloch: alpha must be nonzero");
  return alpha * k * sigma_x() + (lambda - lambda_c) * sigma_z();
}

Matrix assemble_dense(const BlockHamiltonian1D& h) {
  const int L = h.L;
  const int d = h.d;
  const int n = L * d;
  Matrix full = Matrix::Zero(n, n);
  for (int j = 0; j < L; ++j) full.block(j * d, j * d, d, d) = h.hop_blocks[0];
  for (int s = 1; s < static_cast<int>(h.hop_blocks.size()); ++s) {
    const Matrix& hs = h.hop_blocks[s];
    for (int j = 0; j < L; ++j) {
      int jp = j + s;
      if (jp >= L) {
        if (h.boundary != Boundary::periodic) continue;
        jp %= L;
      }
      full.block(j * d, jp * d, d, d) += hs;
      full.block(jp * d, j * d, d, d) += hs.adjoint();
    }
  }
  if (h.decoupled_orbitals.empty()) return full;

  std::vector<int> keep;
  keep.reserve(n);
  for (int i = 0; i < n; ++i) {
    bool removed = false;
    for (const auto& [site, orb] : h.decoupled_orbitals)
      if (site * d + orb == i) { removed = true; break; }
    if (!removed) keep.push_back(i);
  }
  Matrix out(keep.size(), keep.size());
  for (size_t r = 0; r < keep.size(); ++r)
    for (size_t c = 0; c < keep.size(); ++c) out(r, c) = full(keep[r], keep[c]);
  return out;
}

Matrix bloch_matrix(const ModelFamily& family, double lambda, const std::array<double, 2>& k) {
  switch (family.kind) {
    case ModelFamily::Kind::SSH:
      return ssh_bloch(lambda, k[0]);
    case ModelFamily::Kind::ChernWire: {
      BlockHamiltonian1D wire = build_chern_wire(family.kx, lambda, family.t1, family.t2, 2);
      const Matrix& h1 = wire.hop_blocks[1];
      return wire.hop_blocks[0] + std::exp(I * k[0]) * h1 + std::exp(-I * k[0]) * h1.adjoint();
    }
    case ModelFamily::Kind::ChernBloch:
      return chern_bloch(k[0], k[1], lambda, family.t1, family.t2);
    case ModelFamily::Kind::BandInversion:
      return band_inversion_bloch(k[0], lambda, family.alpha, family.lambda_c);
    case ModelFamily::Kind::Custom:
      break;
  }
  raise(ErrorCode::InvalidParams, "bloch_matrix: family has no Bloch form");
}

BlockHamiltonian1D build_chain(const ModelFamily& family, double lambda, int L) {
  switch (family.kind) {
    case ModelFamily::Kind::SSH:
      return build_ssh(lambda, L, family.decouple_last_b);
    case ModelFamily::Kind::ChernWire:
      return build_chern_wire(family.kx, lambda, family.t1, family.t2, L);
    default:
      break;
  }
  raise(ErrorCode::InvalidParams, "build_chain: family is not a 1D chain");
}

} // namespace latqfi
