#include "teflow/synth.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "teflow/random.hpp"

namespace teflow::synth {
namespace {

Eigen::MatrixXd to_eigen(const SampleMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c);
    }
  }
  return out;
}

void check_correlation(const SampleMatrix& rho) {
  if (rho.rows() == 0 || rho.rows() != rho.cols()) {
    throw std::invalid_argument("correlation matrix must be square and non-empty");
  }
  for (std::size_t i = 0; i < rho.rows(); ++i) {
    if (rho(i, i) != 1.0) {
      throw std::invalid_argument("correlation matrix must have a unit diagonal");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (rho(i, j) != rho(j, i) || !(std::abs(rho(i, j)) <= 1.0)) {
        throw std::invalid_argument("correlation matrix must be symmetric with entries in [-1, 1]");
      }
    }
  }
}

// Residual sum of squares of the least-squares fit of y on [1, X].
double residual_ss(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
  const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(y);
  return (y - design * beta).squaredNorm();
}

}  // namespace

SampleMatrix correlation_2d(double rho) {
  return SampleMatrix(2, 2, {1.0, rho, rho, 1.0});
}

SampleMatrix gen_gaussian_copula(const GaussianCopulaSpec& spec) {
  check_correlation(spec.correlation);
  const Eigen::LLT<Eigen::MatrixXd> llt(to_eigen(spec.correlation));
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("correlation matrix is not positive definite");
  }
  const Eigen::MatrixXd lower = llt.matrixL();
  const auto d = static_cast<Eigen::Index>(spec.correlation.rows());

  Rng rng(spec.seed);
  SampleMatrix out(spec.samples, spec.correlation.rows());
  Eigen::VectorXd z(d);
  for (std::size_t t = 0; t < spec.samples; ++t) {
    for (Eigen::Index j = 0; j < d; ++j) z(j) = rng.normal();
    const Eigen::VectorXd v = lower * z;
    for (Eigen::Index j = 0; j < d; ++j) out(t, static_cast<std::size_t>(j)) = v(j);
  }
  return out;
}

double oracle_gaussian_mi(const SampleMatrix& correlation) {
  check_correlation(correlation);
  const double det = to_eigen(correlation).determinant();
  if (!(det > 0.0)) {
    throw std::invalid_argument("correlation matrix is singular");
  }
  return -0.5 * std::log(det);
}

void CoupledVarSpec::validate() const {
  if (!(std::abs(self_coef) < 1.0)) throw std::invalid_argument("coupled VAR: need |a| < 1");
  if (!(noise_std > 0.0)) throw std::invalid_argument("coupled VAR: need sigma > 0");
  if (true_lag == 0) throw std::invalid_argument("coupled VAR: lag must be positive");
  if (samples == 0) throw std::invalid_argument("coupled VAR: samples must be positive");
}

CoupledSeries gen_coupled_var(const CoupledVarSpec& spec) {
  spec.validate();
  const std::size_t n = spec.samples + CoupledVarSpec::kBurnIn;
  const std::size_t l = spec.true_lag;
  Rng rng(spec.seed);
  std::vector<double> x(n);
  std::vector<double> y(n, 0.0);
  for (double& v : x) v = rng.normal();
  for (std::size_t t = 0; t < n; ++t) {
    const double eta = rng.normal();
    if (t >= l) {
      y[t] = spec.self_coef * y[t - l] + spec.coupling * x[t - l] + spec.noise_std * eta;
    }
  }
  const auto skip = static_cast<std::ptrdiff_t>(CoupledVarSpec::kBurnIn);
  return {std::vector<double>(x.begin() + skip, x.end()),
          std::vector<double>(y.begin() + skip, y.end())};
}

double oracle_linear_te(const CoupledVarSpec& spec, std::size_t oracle_samples) {
  CoupledVarSpec big = spec;
  big.samples = oracle_samples;
  const CoupledSeries s = gen_coupled_var(big);
  const std::size_t l = spec.true_lag;
  if (s.y.size() <= l + 3) {
    throw std::invalid_argument("oracle_linear_te: too few samples");
  }
  const auto rows = static_cast<Eigen::Index>(s.y.size() - l);
  Eigen::VectorXd target(rows);
  Eigen::MatrixXd reduced(rows, 2);
  Eigen::MatrixXd full(rows, 3);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto t = static_cast<std::size_t>(i) + l;
    target(i) = s.y[t];
    reduced(i, 0) = 1.0;
    reduced(i, 1) = s.y[t - l];
    full(i, 0) = 1.0;
    full(i, 1) = s.y[t - l];
    full(i, 2) = s.x[t - l];
  }
  return 0.5 * std::log(residual_ss(reduced, target) / residual_ss(full, target));
}

void CasScenarioSpec::validate() const {
  if (subsystems == 0) throw std::invalid_argument("cas scenario: need at least one subsystem");
  if (segments.empty()) throw std::invalid_argument("cas scenario: need at least one segment");
  if (window_len == 0) throw std::invalid_argument("cas scenario: window_len must be positive");
  for (const auto& seg : segments) {
    if (seg.driver >= subsystems) throw std::invalid_argument("cas scenario: driver out of range");
    if (seg.windows == 0) throw std::invalid_argument("cas scenario: empty segment");
    if (seg.lag == 0) throw std::invalid_argument("cas scenario: lag must be positive");
    if (std::find(constant_subsystems.begin(), constant_subsystems.end(), seg.driver) !=
        constant_subsystems.end()) {
      throw std::invalid_argument("cas scenario: a constant subsystem cannot drive a segment");
    }
  }
  for (const auto s : constant_subsystems) {
    if (s >= subsystems) throw std::invalid_argument("cas scenario: constant subsystem out of range");
  }
  if (!(current_baseline > 0.0) || current_noise < 0.0 || flow_noise < 0.0 ||
      pressure_noise < 0.0 || !(sample_period > 0.0)) {
    throw std::invalid_argument("cas scenario: invalid noise or baseline levels");
  }
}

std::size_t CasScenarioSpec::total_windows() const {
  std::size_t n = 0;
  for (const auto& seg : segments) n += seg.windows;
  return n;
}

ColumnMapping CasScenario::mapping() const {
  ColumnMapping m;
  m.timestamp = "timestamp";
  m.flow = "flow";
  m.pressure = "pressure";
  for (const auto& name : subsystem_names) m.subsystems.emplace_back(name, name + "_current");
  return m;
}

PlantSeries CasScenario::plant() const {
  PlantSeries p;
  p.flow = frame.column("flow");
  p.pressure = frame.column("pressure");
  for (const auto& name : subsystem_names) {
    p.subsystems.push_back({name, frame.column(name + "_current")});
  }
  return p;
}

CasScenario gen_cas_scenario(const CasScenarioSpec& spec) {
  spec.validate();
  const std::size_t n_sub = spec.subsystems;
  const std::size_t n = spec.total_windows() * spec.window_len;

  CasScenario out;
  for (std::size_t s = 0; s < n_sub; ++s) out.subsystem_names.push_back("comp" + std::to_string(s + 1));
  std::vector<std::uint8_t> constant(n_sub, 0);
  for (const auto s : spec.constant_subsystems) constant[s] = 1;

  // per-sample driver and lag
  std::vector<std::size_t> driver(n), lag(n);
  std::size_t t = 0;
  for (const auto& seg : spec.segments) {
    for (std::size_t w = 0; w < seg.windows; ++w) {
      out.window_driver.push_back(seg.driver);
      out.window_lag.push_back(seg.lag);
      for (std::size_t i = 0; i < spec.window_len; ++i, ++t) {
        driver[t] = seg.driver;
        lag[t] = seg.lag;
      }
    }
  }

  std::vector<std::vector<double>> currents(n_sub, std::vector<double>(n));
  std::vector<double> flow(n), pressure(n);
  Rng rng(spec.seed);
  for (t = 0; t < n; ++t) {
    for (std::size_t s = 0; s < n_sub; ++s) {
      const double z = rng.normal();
      currents[s][t] = constant[s] ? spec.current_baseline : spec.current_baseline + spec.current_noise * z;
    }
    const double eta = rng.normal();
    const double nu = rng.normal();
    const double deviation =
        t >= lag[t] ? currents[driver[t]][t - lag[t]] - spec.current_baseline : 0.0;
    flow[t] = spec.flow_base + spec.flow_gain * deviation + spec.flow_noise * eta;
    pressure[t] = spec.pressure_base + spec.pressure_noise * nu;
  }

  TelemetryFrame& f = out.frame;
  f.timestamps.resize(n);
  for (t = 0; t < n; ++t) f.timestamps[t] = spec.start_time + static_cast<double>(t) * spec.sample_period;
  f.names = {"flow", "pressure"};
  f.columns = {std::move(flow), std::move(pressure)};
  for (std::size_t s = 0; s < n_sub; ++s) {
    f.names.push_back(out.subsystem_names[s] + "_current");
    f.columns.push_back(std::move(currents[s]));
  }
  f.missing_counts.assign(f.columns.size(), 0);
  return out;
}

}  // namespace teflow::synth
