#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace teflow {

// Row-major T x d matrix of observations. Rows are samples, columns are
// variables.
class SampleMatrix {
 public:
  SampleMatrix() = default;
  SampleMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  // Builds a matrix whose columns are the given series. All series must
  // have the same length.
  static SampleMatrix from_column_views(const std::vector<std::span<const double>>& columns);
  static SampleMatrix from_columns(const std::vector<std::vector<double>>& columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<double> column(std::size_t c) const;
  SampleMatrix select_columns(std::span<const std::size_t> which) const;

  std::span<const double> values() const noexcept { return data_; }

  // Throws DataError naming the first non-finite cell.
  void require_finite() const;

  friend bool operator==(const SampleMatrix&, const SampleMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Normalized average ranks in (0, 1]; the empirical copula sample.
class RankMatrix {
 public:
  explicit RankMatrix(SampleMatrix ranks) : ranks_(std::move(ranks)) {}

  const SampleMatrix& values() const noexcept { return ranks_; }
  std::size_t rows() const noexcept { return ranks_.rows(); }
  std::size_t cols() const noexcept { return ranks_.cols(); }
  double operator()(std::size_t r, std::size_t c) const noexcept { return ranks_(r, c); }

  friend bool operator==(const RankMatrix&, const RankMatrix&) = default;

 private:
  SampleMatrix ranks_;
};

}  // namespace teflow
