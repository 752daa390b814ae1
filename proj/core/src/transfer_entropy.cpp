#include "teflow/transfer_entropy.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "teflow/error.hpp"

namespace teflow {
namespace {

bool constant_column(const SampleMatrix& m, std::size_t c) {
  for (std::size_t r = 1; r < m.rows(); ++r) {
    if (m(r, c) != m(0, c)) {
      return false;
    }
  }
  return true;
}

}  // namespace

LagEmbedding lag_embed(std::span<const double> source, std::span<const double> target,
                       std::size_t lag) {
  if (source.size() != target.size()) {
    throw DataError("lag embedding: source has " + std::to_string(source.size()) +
                    " samples, target has " + std::to_string(target.size()));
  }
  const std::size_t n = target.size();
  if (lag == 0 || lag >= n) {
    throw DataError("lag embedding: lag " + std::to_string(lag) + " leaves no rows out of " +
                    std::to_string(n) + " samples");
  }
  const std::size_t rows = n - lag;
  SampleMatrix triples(rows, 3);
  for (std::size_t t = 0; t < rows; ++t) {
    triples(t, LagEmbedding::kFuture) = target[t + lag];
    triples(t, LagEmbedding::kPresent) = target[t];
    triples(t, LagEmbedding::kSource) = source[t];
  }
  return {std::move(triples), lag};
}

TeEstimate transfer_entropy(std::span<const double> source, std::span<const double> target,
                            std::size_t lag, const KnnConfig& cfg) {
  cfg.validate();
  const LagEmbedding emb = lag_embed(source, target, lag);
  const SampleMatrix& m = emb.triples;
  if (m.rows() <= cfg.k) {
    throw InsufficientSamplesError("transfer entropy: lag " + std::to_string(lag) + " leaves " +
                                   std::to_string(m.rows()) + " rows, need more than k=" +
                                   std::to_string(cfg.k));
  }
  m.require_finite();
  if (constant_column(m, LagEmbedding::kSource)) {
    throw DegenerateSeriesError("source", "transfer entropy: source is constant over the "
                                          "embedding span");
  }
  if (constant_column(m, LagEmbedding::kFuture) || constant_column(m, LagEmbedding::kPresent)) {
    throw DegenerateSeriesError("target", "transfer entropy: target is constant over the "
                                          "embedding span");
  }

  constexpr std::array<std::size_t, 2> future_present{LagEmbedding::kFuture,
                                                      LagEmbedding::kPresent};
  constexpr std::array<std::size_t, 2> present_source{LagEmbedding::kPresent,
                                                      LagEmbedding::kSource};

  TeEstimate est;
  est.lag = lag;
  est.effective_samples = m.rows();
  est.joint = copula_entropy(m, cfg);
  est.future_present = copula_entropy(m.select_columns(future_present), cfg);
  est.present_source = copula_entropy(m.select_columns(present_source), cfg);
  constexpr std::array<std::size_t, 1> present{LagEmbedding::kPresent};
  const double univariate = copula_entropy(m.select_columns(present), cfg);
  est.value = -est.joint + est.future_present + est.present_source - univariate;
  return est;
}

}  // namespace teflow
