#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "modelset/test_function.hpp"

namespace modelset {

/// Finite group of orthogonal d x d matrices with its multiplication table.
class PointGroup {
 public:
  /// Closure of the generators under products; throws if a generator is not orthogonal
  /// or the closure exceeds `max_order` elements.
  static PointGroup generated(int dim, const std::vector<Eigen::MatrixXd>& generators, int max_order = 1024);
  static PointGroup trivial(int dim);
  /// {I, -I}.
  static PointGroup sign(int dim);
  /// Rotations by multiples of 2 pi / n in the plane.
  static PointGroup cyclic(int n);
  /// Dihedral group of order 2n in the plane; dihedral(4) is the symmetry group of the square.
  static PointGroup dihedral(int n);

  int dim() const { return dim_; }
  int order() const { return static_cast<int>(elements_.size()); }
  const std::vector<Eigen::MatrixXd>& elements() const { return elements_; }
  const Eigen::MatrixXd& operator[](int i) const { return elements_[static_cast<std::size_t>(i)]; }
  /// Index of elements[i] * elements[j].
  int product(int i, int j) const { return table_[static_cast<std::size_t>(i * order() + j)]; }
  int inverse(int i) const { return inverse_[static_cast<std::size_t>(i)]; }
  int identity() const { return identity_; }
  /// All entries are integers (signed permutation groups), so orbits of integer vectors are exact.
  bool is_integral() const { return integral_; }

 private:
  int dim_ = 0;
  int identity_ = 0;
  bool integral_ = true;
  std::vector<Eigen::MatrixXd> elements_;
  std::vector<int> table_;
  std::vector<int> inverse_;
};

inline constexpr double kOrbitTolerance = 1e-9;

/// Lexicographic order with coordinates within kOrbitTolerance treated as equal.
bool tolerant_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol = kOrbitTolerance);

/// {k xi : k in K}, deduplicated and sorted by tolerant_less.
std::vector<Eigen::VectorXd> orbit(const PointGroup& K, const Eigen::VectorXd& xi);

/// Lexicographically minimal element of the orbit.
Eigen::VectorXd orbit_label(const PointGroup& K, const Eigen::VectorXd& xi);

/// (1/|K|) sum_k exp(2 pi i <k xi, x>).
std::complex<double> bessel_spherical(const PointGroup& K, const Eigen::VectorXd& xi, const Eigen::VectorXd& x);

struct SphericalLabel {
  enum class Branch { Bessel, Nilpotent };
  Branch branch = Branch::Bessel;
  Eigen::VectorXd xi;   // Bessel: orbit representative
  double lambda = 0.0;  // Nilpotent: central frequency, nonzero
  int m = 0;            // Nilpotent: Laguerre index

  static SphericalLabel bessel(const PointGroup& K, const Eigen::VectorXd& xi);
  static SphericalLabel nilpotent(double lambda, int m);
  std::string to_string() const;
};

/// Largest |f(kx) - f(x)| over `samples` pseudo-random x in the support, relative to max |f|.
double invariance_residual(const TestFunction& f, const PointGroup& K, int samples = 256, std::uint64_t seed = 7);

/// Orbit-averaged transform of a K-invariant f at a Bessel label; throws
/// InvariantViolationError if the invariance residual exceeds 1e-8.
std::complex<double> spherical_ft(const TestFunction& f, const PointGroup& K, const SphericalLabel& label);

}  // namespace modelset
