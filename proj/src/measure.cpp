#include "latqfi/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latqfi/edge.hpp"
#include "latqfi/rng.hpp"

namespace latqfi {

std::vector<long long> sample_positions(const PureState& psi, int d, long long M,
                                        std::uint64_t seed) {
  RealVector p = site_marginal(psi, d);
  const int sites = static_cast<int>(p.size());
  std::vector<double> cum(sites);
  double acc = 0.0;
  for (int j = 0; j < sites; ++j) {
    acc += p[j];
    cum[j] = acc;
  }
  std::vector<long long> counts(sites, 0);
  const std::uint64_t key = splitmix64(seed);
  for (long long t = 0; t < M; ++t) {
    const double u = u01(key, static_cast<std::uint64_t>(t)) * acc;
    const int j = static_cast<int>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
    ++counts[std::min(j, sites - 1)];
  }
  return counts;
}

StateDerivative edge_state_derivative(const ModelFamily& family, double lambda, int L) {
  switch (family.kind) {
    case ModelFamily::Kind::SSH:
      return materialize_with_derivative(ssh_edge_family(lambda, L));
    case ModelFamily::Kind::ChernWire:
      return materialize_with_derivative(
          chern_wire_edge_family(family.kx, lambda, family.t1, family.t2, L));
    default:
      break;
  }
  raise(ErrorCode::InvalidParams, "edge_state_derivative: family has no edge ansatz");
}

PositionModel position_model(const ModelFamily& family, int L) {
  switch (family.kind) {
    case ModelFamily::Kind::SSH:
      return [family, L](double lambda) {
        return site_marginal(materialize(ssh_edge_family(lambda, L)), 2);
      };
    case ModelFamily::Kind::ChernWire:
      return [family, L](double lambda) {
        if (chern_wire_ansatz_valid(family.kx, lambda, family.t1, family.t2))
          return site_marginal(
              materialize(chern_wire_edge_family(family.kx, lambda, family.t1, family.t2, L)), 2);
        return site_marginal(
            extract_edge_state(
                assemble_dense(build_chern_wire(family.kx, lambda, family.t1, family.t2, L)), 2)
                .first,
            2);
      };
    default:
      break;
  }
  raise(ErrorCode::InvalidParams, "position_model: family has no edge pipeline");
}

namespace {

double log_likelihood(const std::vector<long long>& counts, const RealVector& p) {
  double ll = 0.0;
  for (size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] == 0) continue;
    const double pj = j < static_cast<size_t>(p.size()) ? p[j] : 0.0;
    if (pj <= 0.0) return -std::numeric_limits<double>::infinity();
    ll += static_cast<double>(counts[j]) * std::log(pj);
  }
  return ll;
}

} // namespace

double mle_estimate(const std::vector<long long>& counts, const PositionModel& model,
                    std::pair<double, double> interval) {
  long long total = 0;
  for (long long n : counts) total += n;
  if (total < 1) raise(ErrorCode::InvalidParams, "mle_estimate: no counts");
  const auto [lo, hi] = interval;
  if (!(lo < hi)) raise(ErrorCode::InvalidParams, "mle_estimate: empty interval");

  constexpr int kGrid = 64;
  auto ll_at = [&](double lam) { return log_likelihood(counts, model(lam)); };

  int best = 0;
  double ll_best = -std::numeric_limits<double>::infinity();
  double ll_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    const double lam = lo + (hi - lo) * i / (kGrid - 1);
    const double ll = ll_at(lam);
    if (ll > ll_best) { ll_best = ll; best = i; }
    if (std::isfinite(ll)) ll_min = std::min(ll_min, ll);
  }
  if (!std::isfinite(ll_best) || ll_best - ll_min < 1e-12)
    raise(ErrorCode::FlatLikelihood, "mle_estimate: likelihood is flat on the interval");

  double a = lo + (hi - lo) * std::max(0, best - 1) / (kGrid - 1);
  double b = lo + (hi - lo) * std::min(kGrid - 1, best + 1) / (kGrid - 1);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = ll_at(x1);
  double f2 = ll_at(x2);
  while (b - a > 1e-8) {
    if (f1 > f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a);
      f1 = ll_at(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a);
      f2 = ll_at(x2);
    }
  }
  return 0.5 * (a + b);
}

double mle_estimate(const std::vector<long long>& counts, const ModelFamily& family, int L,
                    std::pair<double, double> interval) {
  return mle_estimate(counts, position_model(family, L), interval);
}

EstimationReport estimator_stats(const SimConfig& cfg) {
  if (cfg.M < 1 || cfg.R < 1)
    raise(ErrorCode::InvalidParams, "estimator_stats: M and R must be >= 1");
  if (!(cfg.search_interval.first < cfg.lambda_true &&
        cfg.lambda_true < cfg.search_interval.second))
    raise(ErrorCode::InvalidParams,
          "estimator_stats: lambda_true must lie strictly inside the search interval");

  StateDerivative sd = edge_state_derivative(cfg.family, cfg.lambda_true, cfg.L);
  const double f_c = cfi(position_probabilities(sd, 2));
  PositionModel model = position_model(cfg.family, cfg.L);
  const PureState state{sd.base.amplitudes};

  EstimationReport report;
  report.cfi_true = f_c;
  report.predicted_crb = 1.0 / (static_cast<double>(cfg.M) * f_c);
  report.estimates.reserve(cfg.R);

  double sum = 0.0;
  int ok = 0;
  for (int run = 0; run < cfg.R; ++run) {
    const std::uint64_t run_key = splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(run)));
    std::vector<long long> counts = sample_positions(state, 2, cfg.M, run_key);
    try {
      const double est = mle_estimate(counts, model, cfg.search_interval);
      report.estimates.push_back(est);
      sum += est;
      ++ok;
    } catch (const Error&) {
      report.estimates.push_back(std::numeric_limits<double>::quiet_NaN());
      ++report.run_failures;
    }
  }
  if (ok > 0) report.mean_estimate = sum / ok;
  if (ok > 1) {
    double ss = 0.0;
    for (double est : report.estimates)
      if (std::isfinite(est)) ss += (est - report.mean_estimate) * (est - report.mean_estimate);
    report.sample_variance = ss / (ok - 1);
  }
  report.ratio = report.sample_variance / report.predicted_crb;
  return report;
}

} // namespace latqfi
