#include "teflow/sample_matrix.hpp"

#include <cmath>
#include <string>

#include "teflow/error.hpp"

namespace teflow {

SampleMatrix::SampleMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

SampleMatrix::SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows * cols) {
    throw DataError("sample matrix: buffer holds " + std::to_string(data_.size()) +
                    " values, expected " + std::to_string(rows * cols));
  }
}

SampleMatrix SampleMatrix::from_column_views(const std::vector<std::span<const double>>& columns) {
  if (columns.empty()) {
    return {};
  }
  const std::size_t rows = columns.front().size();
  for (std::size_t c = 1; c < columns.size(); ++c) {
    if (columns[c].size() != rows) {
      throw DataError("sample matrix: column " + std::to_string(c) + " has " +
                      std::to_string(columns[c].size()) + " rows, expected " +
                      std::to_string(rows));
    }
  }
  SampleMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (std::size_t r = 0; r < rows; ++r) {
      m(r, c) = columns[c][r];
    }
  }
  return m;
}

SampleMatrix SampleMatrix::from_columns(const std::vector<std::vector<double>>& columns) {
  std::vector<std::span<const double>> views(columns.begin(), columns.end());
  return from_column_views(views);
}

std::vector<double> SampleMatrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    out[r] = (*this)(r, c);
  }
  return out;
}

SampleMatrix SampleMatrix::select_columns(std::span<const std::size_t> which) const {
  SampleMatrix m(rows_, which.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t j = 0; j < which.size(); ++j) {
      m(r, j) = (*this)(r, which[j]);
    }
  }
  return m;
}

void SampleMatrix::require_finite() const {
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (!std::isfinite((*this)(r, c))) {
        throw DataError("non-finite value at row " + std::to_string(r) + ", column " +
                        std::to_string(c));
      }
    }
  }
}

}  // namespace teflow
