#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace modelset {

using cplx = std::complex<double>;

/// A box (lower-closed, upper-open) or closed ball in internal space.
struct WindowPiece {
  enum class Kind { Box, Ball };
  Kind kind = Kind::Box;
  Eigen::VectorXd lower;   // box
  Eigen::VectorXd upper;   // box
  Eigen::VectorXd center;  // ball; box center is derived
  double radius = 0.0;     // ball

  static WindowPiece box(Eigen::VectorXd lower, Eigen::VectorXd upper);
  static WindowPiece ball(Eigen::VectorXd center, double radius);

  int dim() const { return static_cast<int>(kind == Kind::Box ? lower.size() : center.size()); }
  bool contains(const Eigen::Ref<const Eigen::VectorXd>& h) const;
  double volume() const;
  Eigen::VectorXd bbox_lower() const;
  Eigen::VectorXd bbox_upper() const;
  cplx ft(const Eigen::Ref<const Eigen::VectorXd>& xi) const;
  /// True if this piece is contained in `other` (closure inclusion).
  bool within(const WindowPiece& other) const;
  bool disjoint_from(const WindowPiece& other) const;
};

struct OverlapVolume {
  double value = 0.0;
  double stderr_ = 0.0;  // zero when computed in closed form
  bool exact = true;
};

/// Signed combination of pieces: a disjoint union of positive pieces minus
/// negative pieces, each contained in a positive piece. The indicator is
/// therefore sum(sign_i * 1_{piece_i}).
class Window {
 public:
  explicit Window(int dim = 1) : dim_(dim) {}
  static Window box(Eigen::VectorXd lower, Eigen::VectorXd upper);
  static Window ball(Eigen::VectorXd center, double radius);
  static Window interval(double lo, double hi);
  static Window empty(int dim) { return Window(dim); }

  /// Adds a piece disjoint from all current positive pieces.
  Window& unite(const WindowPiece& piece);
  /// Removes a piece lying inside one positive piece and disjoint from earlier holes.
  Window& subtract(const WindowPiece& piece);

  int dim() const { return dim_; }
  bool is_empty() const { return volume() <= 0.0; }
  const std::vector<WindowPiece>& pieces() const { return pieces_; }
  const std::vector<int>& signs() const { return signs_; }

  bool contains(const Eigen::Ref<const Eigen::VectorXd>& h) const;
  double volume() const;
  Eigen::VectorXd bbox_lower() const;
  Eigen::VectorXd bbox_upper() const;
  double diameter() const;
  /// Fourier transform of the indicator with kernel exp(-2 pi i <xi, h>).
  cplx ft(const Eigen::Ref<const Eigen::VectorXd>& xi) const;

  /// vol(W ∩ (W - s)). Closed form for box/box and ball/ball pairs in
  /// dimension <= 3, Monte Carlo with `samples` points otherwise.
  OverlapVolume overlap_volume(const Eigen::Ref<const Eigen::VectorXd>& s, std::uint64_t seed = 1,
                               std::int64_t samples = 1000000) const;

 private:
  int dim_;
  std::vector<WindowPiece> pieces_;
  std::vector<int> signs_;
};

/// Volume of the ball of radius r in dimension d.
double ball_volume(int d, double r);

}  // namespace modelset
