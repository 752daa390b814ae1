#include "teflow/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace teflow {

ChebyshevKdTree::ChebyshevKdTree(const SampleMatrix& points, std::size_t leaf_size)
    : n_(points.rows()),
      d_(points.cols()),
      leaf_size_(std::max<std::size_t>(leaf_size, 1)),
      coords_(points.values().begin(), points.values().end()),
      order_(points.rows()) {
  if (n_ > std::numeric_limits<std::uint32_t>::max() / 2) {
    throw std::length_error("kd-tree: too many points");
  }
  std::iota(order_.begin(), order_.end(), 0U);
  if (n_ > 0 && d_ > 0) {
    nodes_.reserve(2 * (n_ / leaf_size_ + 1));
    build(0, static_cast<std::uint32_t>(n_));
  }
}

std::int32_t ChebyshevKdTree::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({begin, end, -1, -1});
  bounds_.resize(bounds_.size() + 2 * d_);
  double* lo = bounds_.data() + static_cast<std::size_t>(id) * 2 * d_;
  double* hi = lo + d_;
  std::fill(lo, lo + d_, std::numeric_limits<double>::infinity());
  std::fill(hi, hi + d_, -std::numeric_limits<double>::infinity());
  for (std::uint32_t i = begin; i < end; ++i) {
    const auto p = point(order_[i]);
    for (std::size_t j = 0; j < d_; ++j) {
      lo[j] = std::min(lo[j], p[j]);
      hi[j] = std::max(hi[j], p[j]);
    }
  }

  if (end - begin <= leaf_size_) {
    return id;
  }

  std::size_t split_dim = 0;
  double widest = -1.0;
  for (std::size_t j = 0; j < d_; ++j) {
    if (hi[j] - lo[j] > widest) {
      widest = hi[j] - lo[j];
      split_dim = j;
    }
  }
  if (widest <= 0.0) {
    return id;  // all points coincide
  }

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double va = coords_[a * d_ + split_dim];
                     const double vb = coords_[b * d_ + split_dim];
                     return va < vb || (va == vb && a < b);
                   });

  const auto left = build(begin, mid);
  const auto right = build(mid, end);
  nodes_[static_cast<std::size_t>(id)].left = left;
  nodes_[static_cast<std::size_t>(id)].right = right;
  return id;
}

double ChebyshevKdTree::box_distance(std::int32_t node, std::span<const double> query) const {
  const double* lo = bounds_.data() + static_cast<std::size_t>(node) * 2 * d_;
  const double* hi = lo + d_;
  double dist = 0.0;
  for (std::size_t j = 0; j < d_; ++j) {
    if (query[j] < lo[j]) {
      dist = std::max(dist, lo[j] - query[j]);
    } else if (query[j] > hi[j]) {
      dist = std::max(dist, query[j] - hi[j]);
    }
  }
  return dist;
}

// `best` holds the k smallest distances seen so far, ascending.
void ChebyshevKdTree::search(std::int32_t node_id, std::span<const double> query,
                             std::size_t self, std::vector<double>& best) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_id)];
  if (node.left < 0) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const std::uint32_t idx = order_[i];
      if (idx == self) {
        continue;
      }
      const auto p = point(idx);
      double dist = 0.0;
      for (std::size_t j = 0; j < d_; ++j) {
        dist = std::max(dist, std::abs(p[j] - query[j]));
      }
      if (dist < best.back()) {
        auto pos = std::upper_bound(best.begin(), best.end() - 1, dist);
        std::move_backward(pos, best.end() - 1, best.end());
        *pos = dist;
      }
    }
    return;
  }

  double near_dist = box_distance(node.left, query);
  double far_dist = box_distance(node.right, query);
  std::int32_t near = node.left;
  std::int32_t far = node.right;
  if (far_dist < near_dist) {
    std::swap(near, far);
    std::swap(near_dist, far_dist);
  }
  if (near_dist <= best.back()) {
    search(near, query, self, best);
  }
  if (far_dist <= best.back()) {
    search(far, query, self, best);
  }
}

double ChebyshevKdTree::kth_neighbor_distance(std::size_t index, std::size_t k) const {
  if (k == 0 || k >= n_) {
    throw std::invalid_argument("kd-tree: k=" + std::to_string(k) + " needs 1 <= k < " +
                                std::to_string(n_));
  }
  if (index >= n_) {
    throw std::out_of_range("kd-tree: point index out of range");
  }
  std::vector<double> best(k, std::numeric_limits<double>::infinity());
  search(0, point(index), index, best);
  return best.back();
}

std::vector<double> ChebyshevKdTree::kth_neighbor_distances(std::size_t k) const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    out[i] = kth_neighbor_distance(i, k);
  }
  return out;
}

}  // namespace teflow
