#pragma once

#include <cstddef>
#include <span>

#include "teflow/entropy.hpp"
#include "teflow/sample_matrix.hpp"

namespace teflow {

// Joint sample for one lag: rows (y[t+lag], y[t], x[t]) for t = 0 .. T-lag-1.
struct LagEmbedding {
  static constexpr std::size_t kFuture = 0;
  static constexpr std::size_t kPresent = 1;
  static constexpr std::size_t kSource = 2;

  SampleMatrix triples;
  std::size_t lag = 0;
};

struct TeEstimate {
  double value = 0.0;  // nats
  std::size_t lag = 0;
  std::size_t effective_samples = 0;  // T - lag

  // Copula entropies the value is assembled from:
  //   value = -joint + future_present + present_source - 0
  // (the univariate term Hc(y_t) is identically 0).
  double joint = 0.0;           // Hc(y[t+lag], y[t], x[t])
  double future_present = 0.0;  // Hc(y[t+lag], y[t])
  double present_source = 0.0;  // Hc(y[t], x[t])
};

// Throws DataError on length mismatch, or when lag is 0 or >= T.
LagEmbedding lag_embed(std::span<const double> source, std::span<const double> target,
                       std::size_t lag);

// Order-1 transfer entropy from `source` to `target` at `lag`, estimated
// from copula entropies of the lag embedding. The embedding must have more
// than cfg.k rows. Throws DegenerateSeriesError when the source column or
// either target column of the embedding is constant.
TeEstimate transfer_entropy(std::span<const double> source, std::span<const double> target,
                            std::size_t lag, const KnnConfig& cfg = {});

}  // namespace teflow
