// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo link simulator: quasi-static Rayleigh channel, exact ML
// detection, reproducible counter-based random streams. Floating point
// enters the library here and nowhere else.

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stbc/design.hpp"
#include "stbc/metrics.hpp"

namespace stbc {

enum class PowerConstraint { PEAK, AVERAGE };

struct SimConfig {
  DesignMatrix design;
  Constellation constellation = Constellation::qpsk();
  int n_rx = 1;
  std::vector<double> snr_grid_db;
  PowerConstraint constraint = PowerConstraint::AVERAGE;
  long trials = 0;
  std::uint64_t seed = 0;
};

struct SnrPoint {
  double snr_db = 0.0;
  long symbol_errors = 0;
  long symbols_sent = 0;
  double ser = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct SimResult {
  std::vector<SnrPoint> points;
  // Worst relative gap between the float codeword energy and its exact
  // per-trial value; the energy audit requires this to stay below 1e-12.
  double max_energy_deviation = 0.0;
};

// Amplitude factor applied to codewords built from unit-mean-energy symbols.
// AVERAGE: expected total codeword energy equals p (unit average power per
// channel use). PEAK: the largest instantaneous per-antenna power over all
// slots and symbol assignments equals 1. Both are computed exactly and
// converted to double at the return boundary.
double normalize(const DesignMatrix& design, const Constellation& c, PowerConstraint constraint);

// Evaluates every entry at the given complex symbol values (x_iI, x_iQ are
// the real and imaginary parts of symbols[i]). No scaling is applied.
Eigen::MatrixXcd encode(const std::vector<std::complex<double>>& symbols,
                        const DesignMatrix& design);

// ML decode groups: connected components of the graph joining variables that
// share an entry. Singleton groups decode independently; pairs decode
// jointly over |constellation|^2 hypotheses.
std::vector<std::vector<int>> decode_groups(const DesignMatrix& design);

// Exact coherent ML decisions, group by group. received is p x n_rx,
// channel is n x n_rx, scale is the normalize() factor applied at encode
// time. Returns one constellation point index per variable.
std::vector<int> decode(const Eigen::MatrixXcd& received, const Eigen::MatrixXcd& channel,
                        const DesignMatrix& design, const Constellation& c, double scale);

// Reference decoder: full search over |constellation|^k codewords. Only
// sensible for small k; used to validate the group-wise decoder.
std::vector<int> decode_brute_force(const Eigen::MatrixXcd& received,
                                    const Eigen::MatrixXcd& channel,
                                    const DesignMatrix& design, const Constellation& c,
                                    double scale);

// Runs the Monte Carlo sweep. Deterministic for a fixed (config, seed):
// every trial draws from its own stream keyed by (seed, snr index, trial
// index), so the worker count cannot change any count. STBC_FORGE_THREADS
// caps the worker pool.
SimResult run(const SimConfig& config);

// CSV with header snr_db,errors,symbols,ser,ci_low,ci_high.
std::string to_csv(const SimResult& r);

}  // namespace stbc
