#pragma once

#include <cstddef>

#include "teflow/sample_matrix.hpp"

namespace teflow {

struct KnnConfig {
  std::size_t k = 3;
  // Lower clamp applied to k-th neighbor distances; duplicate rows would
  // otherwise contribute log(0).
  double distance_floor = 1e-12;

  // Throws ConfigError if k == 0 or distance_floor is not positive.
  void validate() const;
};

// Empirical copula transform: each column replaced by its average ranks
// divided by the row count, so untied columns become {1/T, ..., T/T}.
// Ties receive the mean of their ordinal positions.
RankMatrix rank_transform(const SampleMatrix& x);

// Kozachenko-Leonenko differential entropy in nats under the max norm:
//   psi(T) - psi(k) + (d / T) * sum_t log(2 * eps_t)
// where eps_t is the distance from row t to its k-th nearest other row.
// The sum runs over the sorted log terms, so the result depends only on the
// set of rows.
double knn_entropy(const SampleMatrix& u, const KnnConfig& cfg = {});
double knn_entropy(const RankMatrix& u, const KnnConfig& cfg = {});

// Copula entropy: 0 for a single column, otherwise the kNN entropy of the
// rank-transformed sample. Non-positive in expectation; equals -MI.
double copula_entropy(const SampleMatrix& x, const KnnConfig& cfg = {});

double mutual_information(const SampleMatrix& x, const KnnConfig& cfg = {});

}  // namespace teflow
