#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "latqfi/estimation.hpp"
#include "latqfi/models.hpp"

namespace latqfi {

struct SimConfig {
  long long M = 10000;  // samples per experiment
  int R = 200;          // experiment repetitions
  std::uint64_t seed = 1;
  double lambda_true = 0.5;
  std::pair<double, double> search_interval{0.05, 0.95};
  int L = 32;
  ModelFamily family;
};

struct EstimationReport {
  double mean_estimate = 0.0;
  double sample_variance = 0.0;
  double predicted_crb = 0.0; // 1/(M * CFI(lambda_true))
  double ratio = 0.0;         // sample_variance / predicted_crb
  std::vector<double> estimates; // ordered by run index; NaN for failed runs
  int run_failures = 0;
  double cfi_true = 0.0;
};

// M independent draws from the site marginal of psi; counts are a pure
// function of (psi, d, M, seed) on every platform.
std::vector<long long> sample_positions(const PureState& psi, int d, long long M,
                                        std::uint64_t seed);

using PositionModel = std::function<RealVector(double)>; // lambda -> site probabilities

// Site distribution of a family's edge state (analytic ansatz where one
// exists, numerical extraction otherwise).
PositionModel position_model(const ModelFamily& family, int L);

// Analytic edge-state derivative of a family at lambda (ansatz families only).
StateDerivative edge_state_derivative(const ModelFamily& family, double lambda, int L);

// argmax over the interval of sum_j n_j ln p_j(lambda): 64-point grid bracket,
// then golden-section to |interval| <= 1e-8.
double mle_estimate(const std::vector<long long>& counts, const PositionModel& model,
                    std::pair<double, double> interval);
double mle_estimate(const std::vector<long long>& counts, const ModelFamily& family, int L,
                    std::pair<double, double> interval);

EstimationReport estimator_stats(const SimConfig& cfg);

} // namespace latqfi
