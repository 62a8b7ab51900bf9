#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "modelset/error.hpp"

namespace modelset::detail {

/// Uniform bucket grid over the columns of a point matrix (dimension <= 4).
class CellGrid {
 public:
  CellGrid(const Eigen::MatrixXd& pts, double cell) : pts_(pts), cell_(cell), dim_(static_cast<int>(pts.rows())) {
    if (dim_ < 1 || dim_ > 4) throw Error("cell grid supports dimensions 1..4");
    if (!(cell > 0.0)) throw Error("cell size must be positive");
    std::vector<std::pair<std::int64_t, Eigen::Index>> keyed;
    keyed.reserve(static_cast<std::size_t>(pts.cols()));
    for (Eigen::Index i = 0; i < pts.cols(); ++i) keyed.emplace_back(key_of(cell_coords(pts.col(i))), i);
    std::sort(keyed.begin(), keyed.end());
    order_.reserve(keyed.size());
    for (std::size_t i = 0; i < keyed.size(); ++i) {
      order_.push_back(keyed[i].second);
      auto& range = buckets_[keyed[i].first];
      if (i == 0 || keyed[i - 1].first != keyed[i].first) range.first = i;
      range.second = i + 1;
    }
  }

  /// Calls fn(j) for each point j with |p_j - x| <= radius (radius <= cell).
  template <class Fn>
  void for_each_near(const Eigen::Ref<const Eigen::VectorXd>& x, double radius, Fn&& fn) const {
    std::array<std::int64_t, 4> c = cell_coords(x);
    std::array<std::int64_t, 4> off{};
    const double r2 = radius * radius;
    int total = 1;
    for (int d = 0; d < dim_; ++d) total *= 3;
    for (int t = 0; t < total; ++t) {
      int rem = t;
      for (int d = 0; d < dim_; ++d) {
        off[d] = c[d] + (rem % 3) - 1;
        rem /= 3;
      }
      auto it = buckets_.find(key_of(off));
      if (it == buckets_.end()) continue;
      for (std::size_t s = it->second.first; s < it->second.second; ++s) {
        Eigen::Index j = order_[s];
        if ((pts_.col(j) - x).squaredNorm() <= r2) fn(j);
      }
    }
  }

 private:
  std::array<std::int64_t, 4> cell_coords(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    std::array<std::int64_t, 4> c{};
    for (int d = 0; d < dim_; ++d) c[d] = static_cast<std::int64_t>(std::floor(x[d] / cell_));
    return c;
  }

  std::int64_t key_of(const std::array<std::int64_t, 4>& c) const {
    const int bits = std::min(64 / dim_, 62);
    const std::int64_t half = std::int64_t{1} << (bits - 2);
    std::uint64_t key = 0;
    for (int d = 0; d < dim_; ++d) {
      if (c[d] <= -half || c[d] >= half) throw Error("cell grid coordinate out of range");
      key = (key << bits) | static_cast<std::uint64_t>(c[d] + half);
    }
    return static_cast<std::int64_t>(key);
  }

  const Eigen::MatrixXd& pts_;
  double cell_;
  int dim_;
  std::vector<Eigen::Index> order_;
  std::unordered_map<std::int64_t, std::pair<std::size_t, std::size_t>> buckets_;
};

}  // namespace modelset::detail
