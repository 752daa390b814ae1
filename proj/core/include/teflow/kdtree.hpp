#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "teflow/sample_matrix.hpp"

namespace teflow {

// Static kd-tree answering exact k-th nearest neighbor distances under the
// Chebyshev (max) norm. Points are the rows of the matrix given at
// construction; the tree keeps its own copy.
//
// Returned distances are exact: each is max_i |a_i - b_i| for some pair of
// stored points, so results do not depend on traversal order.
class ChebyshevKdTree {
 public:
  explicit ChebyshevKdTree(const SampleMatrix& points, std::size_t leaf_size = 16);

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }

  // Distance from point `index` to its k-th nearest other point. The query
  // point itself is excluded by index, so duplicates count at distance 0.
  // Requires 1 <= k < size().
  double kth_neighbor_distance(std::size_t index, std::size_t k) const;

  // kth_neighbor_distance for every stored point, in row order.
  std::vector<double> kth_neighbor_distances(std::size_t k) const;

 private:
  struct Node {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::int32_t node, std::span<const double> query, std::size_t self,
              std::vector<double>& best) const;
  double box_distance(std::int32_t node, std::span<const double> query) const;
  std::span<const double> point(std::size_t i) const noexcept {
    return {coords_.data() + i * d_, d_};
  }

  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::size_t leaf_size_ = 16;
  std::vector<double> coords_;        // row-major copy of the points
  std::vector<std::uint32_t> order_;  // point indices, partitioned by node
  std::vector<Node> nodes_;
  std::vector<double> bounds_;  // per node: d lows followed by d highs
};

}  // namespace teflow
