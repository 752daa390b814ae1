#include "teflow/entropy.hpp"

#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "teflow/error.hpp"
#include "teflow/kdtree.hpp"

namespace teflow {

void KnnConfig::validate() const {
  if (k == 0) {
    throw ConfigError("knn: k must be positive");
  }
  if (!(distance_floor > 0.0) || !std::isfinite(distance_floor)) {
    throw ConfigError("knn: distance_floor must be a positive finite number");
  }
}

RankMatrix rank_transform(const SampleMatrix& x) {
  if (x.rows() == 0 || x.cols() == 0) {
    throw DataError("rank transform: empty sample");
  }
  x.require_finite();

  const std::size_t n = x.rows();
  const auto total = static_cast<double>(n);
  SampleMatrix ranks(n, x.cols());
  std::vector<std::size_t> order(n);
  for (std::size_t c = 0; c < x.cols(); ++c) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x(a, c) < x(b, c); });
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i + 1;
      while (j < n && x(order[j], c) == x(order[i], c)) {
        ++j;
      }
      // ordinal positions i+1 .. j share their mean
      const double avg = static_cast<double>(i + 1 + j) / 2.0;
      for (std::size_t m = i; m < j; ++m) {
        ranks(order[m], c) = avg / total;
      }
      i = j;
    }
  }
  return RankMatrix(std::move(ranks));
}

double knn_entropy(const SampleMatrix& u, const KnnConfig& cfg) {
  cfg.validate();
  if (u.cols() == 0) {
    throw DataError("knn entropy: sample has no columns");
  }
  const std::size_t n = u.rows();
  if (n <= cfg.k) {
    throw InsufficientSamplesError("knn entropy: " + std::to_string(n) +
                                   " samples, need more than k=" + std::to_string(cfg.k));
  }
  u.require_finite();

  const ChebyshevKdTree tree(u);
  std::vector<double> logs = tree.kth_neighbor_distances(cfg.k);
  for (double& eps : logs) {
    eps = std::log(2.0 * std::max(eps, cfg.distance_floor));
  }
  std::sort(logs.begin(), logs.end());
  const double sum = std::accumulate(logs.begin(), logs.end(), 0.0);

  const auto total = static_cast<double>(n);
  const auto dim = static_cast<double>(u.cols());
  return boost::math::digamma(total) - boost::math::digamma(static_cast<double>(cfg.k)) +
         dim * sum / total;
}

double knn_entropy(const RankMatrix& u, const KnnConfig& cfg) {
  return knn_entropy(u.values(), cfg);
}

double copula_entropy(const SampleMatrix& x, const KnnConfig& cfg) {
  cfg.validate();
  if (x.cols() == 1) {
    if (x.rows() <= cfg.k) {
      throw InsufficientSamplesError("copula entropy: " + std::to_string(x.rows()) +
                                     " samples, need more than k=" + std::to_string(cfg.k));
    }
    x.require_finite();
    return 0.0;
  }
  return knn_entropy(rank_transform(x), cfg);
}

double mutual_information(const SampleMatrix& x, const KnnConfig& cfg) {
  return -copula_entropy(x, cfg);
}

}  // namespace teflow
