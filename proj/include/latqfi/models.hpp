#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "latqfi/linalg.hpp"

namespace latqfi {

enum class Boundary { open, periodic };

struct BlockHamiltonian1D {
  int L = 0;
  int d = 1;
  std::vector<Matrix> hop_blocks; // h_0, h_1, ..., h_R; h_0 Hermitian
  Boundary boundary = Boundary::open;
  std::vector<std::pair<int, int>> decoupled_orbitals; // (site, orbital) removed
};

struct ModelFamily {
  enum class Kind { SSH, ChernWire, ChernBloch, BandInversion, Custom };
  Kind kind = Kind::SSH;
  double t1 = 1.0;
  double t2 = 1.0;
  double alpha = 1.0;
  double lambda_c = 0.0;
  double kx = 0.0;          // transverse momentum for ChernWire
  bool decouple_last_b = true; // SSH open-chain convention

  int dimension() const { return kind == Kind::ChernBloch ? 2 : 1; }
};

ModelFamily family_from_id(const std::string& id);
std::string family_id(const ModelFamily& family);

BlockHamiltonian1D build_ssh(double lambda, int L, bool decouple_last_b);
Matrix ssh_bloch(double lambda, double k);
BlockHamiltonian1D build_chern_wire(double kx, double lambda, double t1, double t2, int L2);
Eigen::Vector3d chern_bloch_field(double kx, double ky, double lambda, double t1, double t2);
Matrix chern_bloch(double kx, double ky, double lambda, double t1, double t2);
Matrix band_inversion_bloch(double k, double lambda, double alpha, double lambda_c);
Matrix assemble_dense(const BlockHamiltonian1D& h);

// Bloch matrix of a family at momentum k; 1D families read k[0], ChernBloch
// reads (k[0], k[1]). ChernWire momentum runs along the wire at fixed kx.
Matrix bloch_matrix(const ModelFamily& family, double lambda, const std::array<double, 2>& k);

// Open-boundary chain of a 1D family (SSH per its decouple flag, ChernWire at
// its fixed kx).
BlockHamiltonian1D build_chain(const ModelFamily& family, double lambda, int L);

} // namespace latqfi
