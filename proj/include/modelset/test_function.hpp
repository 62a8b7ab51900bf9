#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "modelset/lattice.hpp"

namespace modelset {

using cplx = std::complex<double>;

/// One-dimensional building block, centred at `shift`: the convolution of the
/// centred box indicators 1_{[-h/2, h/2)} for h in `boxes`, further convolved
/// with the unit-peak Gaussian exp(-y^2 / (2 gauss_var)) when gauss_var > 0.
struct Atom1D {
  double shift = 0.0;
  std::vector<double> boxes;
  double gauss_var = 0.0;

  int factors() const { return static_cast<int>(boxes.size()) + (gauss_var > 0.0 ? 1 : 0); }
  double value(double x) const;
  cplx ft(double xi) const;
  /// Half-width of the support around `shift`; Gaussians count as 12 sigma.
  double half_width() const;
};

/// Finite sum of tensor products of Atom1D factors with complex coefficients.
class TestFunction {
 public:
  struct Term {
    cplx coef = 1.0;
    std::vector<Atom1D> factors;
  };

  explicit TestFunction(int dim = 1) : dim_(dim) {}

  /// Indicator of [-a, a) (not normalized).
  static TestFunction box(double a);
  /// Order-k B-spline supported on [-a, a]: k equal boxes of width 2a/k, normalized to integral 1.
  /// bspline(2, 1) is the tent 1 - |x| on [-1, 1].
  static TestFunction bspline(int k, double a);
  /// exp(-x^2 / (2 sigma^2)).
  static TestFunction gaussian(double sigma);
  /// Isotropic Gaussian exp(-|x|^2 / (2 sigma^2)) on R^dim.
  static TestFunction gaussian(int dim, double sigma);
  static TestFunction zero(int dim) { return TestFunction(dim); }

  int dim() const { return dim_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// True if every atom carries a Gaussian factor (smooth, fast-decaying transform).
  bool is_gaussian_class() const;

  cplx operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Fourier transform with kernel exp(-2 pi i <xi, x>).
  cplx ft(const Eigen::Ref<const Eigen::VectorXd>& xi) const;

  /// Bounding box of the support (Gaussians truncated at 12 sigma).
  Region support() const;
  /// Smallest R with supp f contained in the closed ball of radius R about 0.
  double support_radius() const;

  TestFunction& add_term(cplx coef, std::vector<Atom1D> factors);

  TestFunction operator+(const TestFunction& o) const;
  TestFunction operator*(cplx s) const;
  TestFunction translated(const Eigen::VectorXd& shift) const;
  /// x -> f(x / s) for s > 0.
  TestFunction dilated(double s) const;
  /// f*(x) = conj(f(-x)).
  TestFunction involution() const;

  friend TestFunction convolve(const TestFunction& f, const TestFunction& g);
  friend TestFunction tensor(const TestFunction& f, const TestFunction& g);

 private:
  int dim_;
  std::vector<Term> terms_;
};

TestFunction convolve(const TestFunction& f, const TestFunction& g);
TestFunction tensor(const TestFunction& f, const TestFunction& g);

/// f* * f, whose transform is |ft f|^2.
inline TestFunction autoconvolution(const TestFunction& f) { return convolve(f.involution(), f); }

/// Value of the centred box spline (convolution of 1_{[-h_i/2, h_i/2)}) at y.
double box_spline(const std::vector<double>& widths, double y);

}  // namespace modelset
