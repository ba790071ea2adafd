#pragma once

#include <string>
#include <utility>
#include <vector>

#include "latqfi/models.hpp"

namespace latqfi {

struct ScalingSeries {
  std::vector<std::pair<int, double>> samples; // (L, F), L strictly increasing
  std::string label;
};

struct FitResult {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double rms_residual = 0.0;
  double relative_residual = 0.0;
  bool degenerate = false; // constant series: b = 0, a = 0, c = mean
};

// Variable projection for F(L) = a L^b + c: (a, c) by linear least squares on
// the column-equilibrated basis {L^b, 1} per candidate b; b by golden-section
// with expanding brackets from starts {0, 1, 2}.
FitResult fit_power_law(const ScalingSeries& series,
                        std::pair<double, double> b_range = {-1.0, 4.0});

enum class ScanQuantity { edge, manybody_pbc, manybody_obc };

struct ScanRow {
  double lambda = 0.0;
  double b = 0.0;
  double a = 0.0;
  double c = 0.0;
  double rms_residual = 0.0;
  std::string flags; // empty, "degenerate", or an error name
};

// Edge-state QFI of a 1D family at one (lambda, L): the analytic ansatz where
// one exists (SSH topological phase; wire at kx = +/-pi/2, t1 = t2), the
// numerically extracted state otherwise (bulk band top for SSH lambda >= 1).
double edge_qfi_point(const ModelFamily& family, double lambda, int L);

std::vector<ScanRow> exponent_scan(const ModelFamily& family, ScanQuantity quantity,
                                   const std::vector<double>& lambda_grid,
                                   const std::vector<int>& L_grid);

} // namespace latqfi
