#include "latqfi/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "latqfi/edge.hpp"
#include "latqfi/many_body.hpp"

namespace latqfi {

namespace {

struct LinearSolve {
  double a = 0.0;
  double c = 0.0;
  double ssr = 0.0;
  double cond = 1.0;
};

// Least squares for F ~ a L^b + c at fixed b on the column-equilibrated basis;
// falls back to the rank-1 truncated solution when the equilibrated normal
// matrix is numerically singular (b near 0 makes the basis collinear).
LinearSolve solve_at_b(const std::vector<double>& L, const std::vector<double>& F, double b) {
  const size_t n = L.size();
  std::vector<double> x1(n);
  double s1sq = 0.0;
  for (size_t i = 0; i < n; ++i) {
    x1[i] = std::pow(L[i], b);
    s1sq += x1[i] * x1[i];
  }
  const double s1 = std::sqrt(s1sq);
  const double s2 = std::sqrt(static_cast<double>(n));

  // Normal system of the scaled basis {x1/s1, 1/s2}.
  double g11 = 1.0, g12 = 0.0, g22 = 1.0, r1 = 0.0, r2 = 0.0;
  for (size_t i = 0; i < n; ++i) {
    g12 += (x1[i] / s1) * (1.0 / s2);
    r1 += (x1[i] / s1) * F[i];
    r2 += (1.0 / s2) * F[i];
  }
  const double tr = g11 + g22;
  const double det = g11 * g22 - g12 * g12;
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  const double e_hi = tr / 2.0 + disc;
  const double e_lo = tr / 2.0 - disc;

  LinearSolve out;
  out.cond = e_hi / std::max(e_lo, 1e-300);
  double b1, b2; // scaled coefficients
  if (out.cond > 1e12) {
    // Dominant eigenvector of the 2x2 Gram matrix.
    double vx = g12, vy = e_hi - g11;
    if (std::abs(vx) + std::abs(vy) == 0.0) { vx = 1.0; vy = 0.0; }
    const double vn = std::hypot(vx, vy);
    vx /= vn; vy /= vn;
    const double proj = (vx * r1 + vy * r2) / e_hi;
    b1 = proj * vx;
    b2 = proj * vy;
  } else {
    b1 = (g22 * r1 - g12 * r2) / det;
    b2 = (g11 * r2 - g12 * r1) / det;
  }
  out.a = b1 / s1;
  out.c = b2 / s2;
  out.ssr = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double resid = F[i] - (out.a * x1[i] + out.c);
    out.ssr += resid * resid;
  }
  return out;
}

} // namespace

FitResult fit_power_law(const ScalingSeries& series, std::pair<double, double> b_range) {
  const size_t n = series.samples.size();
  if (n < 4) raise(ErrorCode::InvalidParams, "fit_power_law: need at least 4 samples");
  std::vector<double> L(n), F(n);
  for (size_t i = 0; i < n; ++i) {
    if (i > 0 && series.samples[i].first <= series.samples[i - 1].first)
      raise(ErrorCode::InvalidParams, "fit_power_law: L values must increase strictly");
    if (series.samples[i].second < 0)
      raise(ErrorCode::InvalidParams, "fit_power_law: F values must be nonnegative");
    L[i] = series.samples[i].first;
    F[i] = series.samples[i].second;
  }

  const double f_max = *std::max_element(F.begin(), F.end());
  const double f_min = *std::min_element(F.begin(), F.end());
  if (f_max - f_min <= 1e-14 * std::max(1.0, std::abs(f_max))) {
    FitResult flat;
    flat.degenerate = true;
    flat.c = std::accumulate(F.begin(), F.end(), 0.0) / n;
    double ssr = 0.0;
    for (double f : F) ssr += (f - flat.c) * (f - flat.c);
    flat.rms_residual = std::sqrt(ssr / n);
    flat.relative_residual = flat.rms_residual / std::max(std::abs(flat.c), 1e-300);
    return flat;
  }

  auto ssr_at = [&](double b) { return solve_at_b(L, F, b).ssr; };
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;

  double best_b = b_range.first;
  double best_ssr = std::numeric_limits<double>::infinity();
  for (double b0 : {0.0, 1.0, 2.0}) {
    double lo = std::clamp(b0, b_range.first, b_range.second);
    double hi = lo;
    double step = 0.5;
    while (lo > b_range.first) {
      const double cand = std::max(b_range.first, lo - step);
      if (ssr_at(cand) < ssr_at(lo)) { lo = cand; step *= 2.0; }
      else break;
    }
    step = 0.5;
    while (hi < b_range.second) {
      const double cand = std::min(b_range.second, hi + step);
      if (ssr_at(cand) < ssr_at(hi)) { hi = cand; step *= 2.0; }
      else break;
    }
    lo = std::max(b_range.first, lo - 0.5);
    hi = std::min(b_range.second, hi + 0.5);

    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = ssr_at(x1);
    double f2 = ssr_at(x2);
    for (int iter = 0; iter < 300 && hi - lo > 1e-10; ++iter) {
      if (f1 < f2) {
        hi = x2; x2 = x1; f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = ssr_at(x1);
      } else {
        lo = x1; x1 = x2; f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = ssr_at(x2);
      }
    }
    const double b_star = 0.5 * (lo + hi);
    const double s = ssr_at(b_star);
    if (s < best_ssr) { best_ssr = s; best_b = b_star; }
  }

  LinearSolve sol = solve_at_b(L, F, best_b);
  if (sol.cond > 1e12)
    raise(ErrorCode::IllConditioned,
          "fit_power_law: normal system condition exceeds 1e12 at the solution");
  FitResult fit;
  fit.a = sol.a;
  fit.b = best_b;
  fit.c = sol.c;
  fit.rms_residual = std::sqrt(sol.ssr / n);
  double scale = 0.0;
  for (double f : F) scale = std::max(scale, std::abs(f));
  fit.relative_residual = fit.rms_residual / std::max(scale, 1e-300);
  return fit;
}

double edge_qfi_point(const ModelFamily& family, double lambda, int L) {
  switch (family.kind) {
    case ModelFamily::Kind::SSH: {
      if (lambda < 1.0) return qfi(ssh_edge_family(lambda, L));
      auto bulk_at = [&](double lam) {
        return extract_bulk_state(assemble_dense(build_ssh(lam, L, family.decouple_last_b)));
      };
      StateDerivative sd =
          numerical_state_derivative(bulk_at, lambda, default_fd_step(lambda));
      return qfi_pure(sd);
    }
    case ModelFamily::Kind::ChernWire: {
      if (chern_wire_ansatz_valid(family.kx, lambda, family.t1, family.t2))
        return qfi(chern_wire_edge_family(family.kx, lambda, family.t1, family.t2, L));
      auto edge_at = [&](double lam) {
        return extract_edge_state(
                   assemble_dense(build_chern_wire(family.kx, lam, family.t1, family.t2, L)), 2)
            .first;
      };
      StateDerivative sd =
          numerical_state_derivative(edge_at, lambda, default_fd_step(lambda));
      return qfi_pure(sd);
    }
    default:
      break;
  }
  raise(ErrorCode::InvalidParams, "edge_qfi_point: family has no edge pipeline");
}

std::vector<ScanRow> exponent_scan(const ModelFamily& family, ScanQuantity quantity,
                                   const std::vector<double>& lambda_grid,
                                   const std::vector<int>& L_grid) {
  if (lambda_grid.empty() || L_grid.empty())
    raise(ErrorCode::InvalidParams, "exponent_scan: grids must be nonempty");
  if (L_grid.size() < 5)
    raise(ErrorCode::InvalidParams, "exponent_scan: need at least 5 sizes");
  for (size_t i = 1; i < L_grid.size(); ++i)
    if (L_grid[i] <= L_grid[i - 1])
      raise(ErrorCode::InvalidParams, "exponent_scan: sizes must increase strictly");
  const double ratio0 = static_cast<double>(L_grid[1]) / L_grid[0];
  for (size_t i = 1; i < L_grid.size(); ++i) {
    const double ratio = static_cast<double>(L_grid[i]) / L_grid[i - 1];
    if (std::abs(ratio - ratio0) > 0.1 * ratio0)
      raise(ErrorCode::InvalidParams, "exponent_scan: sizes must form a geometric grid");
  }

  std::vector<ScanRow> rows;
  for (double lambda : lambda_grid) {
    ScanRow row;
    row.lambda = lambda;
    try {
      ScalingSeries series;
      for (int L : L_grid) {
        double f = 0.0;
        switch (quantity) {
          case ScanQuantity::edge:
            f = edge_qfi_point(family, lambda, L);
            break;
          case ScanQuantity::manybody_pbc:
            f = qfi_pbc_sum(family, lambda, L).value;
            break;
          case ScanQuantity::manybody_obc:
            f = qfi_manybody_obc(family, lambda, L);
            break;
        }
        series.samples.push_back({L, f});
      }
      FitResult fit = fit_power_law(series);
      row.b = fit.b;
      row.a = fit.a;
      row.c = fit.c;
      row.rms_residual = fit.rms_residual;
      if (fit.degenerate) row.flags = "degenerate";
    } catch (const Error& err) {
      row.b = row.a = row.c = row.rms_residual = std::numeric_limits<double>::quiet_NaN();
      row.flags = error_code_name(err.code());
    }
    rows.push_back(row);
  }
  return rows;
}

} // namespace latqfi
