#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "modelset/quadratic.hpp"

namespace modelset {

using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// Full-rank lattice B * Z^d; column j of `columns` is the j-th generator.
/// When `exact` is present it holds the same matrix over Q(sqrt s).
class LatticeBasis {
 public:
  LatticeBasis() = default;
  explicit LatticeBasis(Eigen::MatrixXd columns);
  explicit LatticeBasis(QuadraticMatrix exact);

  int dim() const { return static_cast<int>(columns_.cols()); }
  const Eigen::MatrixXd& columns() const { return columns_; }
  const Eigen::MatrixXd& inverse() const { return inverse_; }
  const std::optional<QuadraticMatrix>& exact() const { return exact_; }
  bool has_exact() const { return exact_.has_value(); }

  Eigen::VectorXd point(const IntVector& k) const { return columns_ * k.cast<double>(); }
  /// Exact coordinates B k; requires has_exact().
  QuadraticVector exact_point(const IntVector& k) const;

 private:
  Eigen::MatrixXd columns_;
  Eigen::MatrixXd inverse_;
  std::optional<QuadraticMatrix> exact_;
};

/// Axis box [lower, upper], lower-closed box [lower, upper), or closed ball.
class Region {
 public:
  enum class Kind { Box, HalfOpenBox, Ball };

  Region() = default;
  static Region box(Eigen::VectorXd lower, Eigen::VectorXd upper);
  static Region half_open_box(Eigen::VectorXd lower, Eigen::VectorXd upper);
  static Region ball(Eigen::VectorXd center, double radius);
  /// Symmetric cube [-h, h]^d.
  static Region cube(int dim, double half_width);

  Kind kind() const { return kind_; }
  int dim() const { return static_cast<int>(lower_.size()); }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  const Eigen::VectorXd& center() const { return center_; }
  double radius() const { return radius_; }

  bool is_empty() const;
  bool is_bounded() const;
  bool contains(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double volume() const;
  /// True if every point within distance `margin` of this region lies in `outer`.
  bool inflated_within(double margin, const Region& outer) const;

 private:
  Kind kind_ = Kind::Box;
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  Eigen::VectorXd center_;
  double radius_ = 0.0;
};

struct LatticePoint {
  IntVector coords;
  Eigen::VectorXd point;
};

/// |det B|.
double covolume(const LatticeBasis& basis);

/// Inverse-transpose basis, so that <dual_i, primal_j> = delta_ij.
LatticeBasis dual_lattice(const LatticeBasis& basis);

/// Integer coordinate bounds of B^{-1} applied to the box [lower, upper].
std::pair<IntVector, IntVector> search_box(const LatticeBasis& basis, const Eigen::VectorXd& lower,
                                           const Eigen::VectorXd& upper);

/// Lattice points whose coordinates lie in the box [lower, upper] and satisfy `accept`,
/// in lexicographic order of integer coordinates.
std::vector<LatticePoint> enumerate_points_in_box(
    const LatticeBasis& basis, const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
    const std::function<bool(const Eigen::VectorXd&)>& accept);

/// Lattice points inside `region`, in lexicographic order of integer coordinates.
std::vector<LatticePoint> enumerate_points(const LatticeBasis& basis, const Region& region);

}  // namespace modelset
