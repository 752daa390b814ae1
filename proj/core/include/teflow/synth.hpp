#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "teflow/sample_matrix.hpp"
#include "teflow/telemetry.hpp"

// Synthetic data with known ground truth. Nothing here depends on the
// estimators; the oracles are computed independently of them.
namespace teflow::synth {

struct GaussianCopulaSpec {
  SampleMatrix correlation;  // d x d, symmetric positive definite, unit diagonal
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
};

// Convenience: 2 x 2 correlation with off-diagonal rho.
SampleMatrix correlation_2d(double rho);

// T draws from N(0, correlation), one Rng stream, row-major draw order,
// colored by the lower Cholesky factor. Throws std::invalid_argument for an
// invalid correlation matrix.
SampleMatrix gen_gaussian_copula(const GaussianCopulaSpec& spec);

// -0.5 ln det(correlation); throws std::invalid_argument when singular.
double oracle_gaussian_mi(const SampleMatrix& correlation);

struct CoupledVarSpec {
  double self_coef = 0.5;      // a, |a| < 1
  double coupling = 0.8;       // b
  double noise_std = 0.1;      // sigma > 0
  std::size_t true_lag = 1;    // l
  std::size_t samples = 5000;  // T, after burn-in
  std::uint64_t seed = 0;

  static constexpr std::size_t kBurnIn = 1000;
  void validate() const;
};

struct CoupledSeries {
  std::vector<double> x;  // source, i.i.d. N(0, 1)
  std::vector<double> y;  // target
};

// y_t = a y_{t-l} + b x_{t-l} + sigma eta_t with y_t = 0 for t < l. Draws
// all T + burn-in x values first, then all eta values; the first kBurnIn
// samples are discarded.
CoupledSeries gen_coupled_var(const CoupledVarSpec& spec);

// Linear-Gaussian transfer entropy 0.5 ln(RSS_reduced / RSS_full) from
// least-squares fits (with intercept) of y_t on (y_{t-l}) and on
// (y_{t-l}, x_{t-l}), using a simulation of `oracle_samples` steps of the
// configured system under its seed.
double oracle_linear_te(const CoupledVarSpec& spec, std::size_t oracle_samples = 1'000'000);

struct CasSegment {
  std::size_t driver = 0;  // subsystem index
  std::size_t lag = 1;     // coupling lag in samples
  std::size_t windows = 1;
};

// Compressed-air plant stand-in: parallel subsystems whose currents are
// i.i.d. noise around a baseline. Within each segment the designated
// driver's current, delayed by the segment lag, moves the outlet flow:
//   flow_t     = flow_base + flow_gain (c_{D,t-L} - baseline) + flow_noise eta_t
//   pressure_t = pressure_base + pressure_noise nu_t
// Per time step the stream draws one normal per subsystem (in index order,
// also for constant subsystems), then the flow noise, then the pressure
// noise.
struct CasScenarioSpec {
  std::size_t subsystems = 2;
  std::vector<CasSegment> segments;
  std::size_t window_len = 180;
  std::vector<std::size_t> constant_subsystems;  // held exactly at baseline
  double current_baseline = 100.0;
  double current_noise = 5.0;
  double flow_base = 50.0;
  double flow_gain = 2.0;
  double flow_noise = 1.0;
  double pressure_base = 7.0;
  double pressure_noise = 0.05;
  double sample_period = 10.0;
  double start_time = 1653436800.0;  // 2022-05-25T00:00:00Z
  std::uint64_t seed = 0;

  void validate() const;
  std::size_t total_windows() const;
};

struct CasScenario {
  TelemetryFrame frame;  // columns: flow, pressure, <name>_current...
  std::vector<std::string> subsystem_names;
  std::vector<std::size_t> window_driver;  // ground truth per window
  std::vector<std::size_t> window_lag;

  ColumnMapping mapping() const;
  PlantSeries plant() const;
};

// Subsystems are named comp1, comp2, ...
CasScenario gen_cas_scenario(const CasScenarioSpec& spec);

}  // namespace teflow::synth
