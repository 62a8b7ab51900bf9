#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "modelset/autocorr.hpp"
#include "modelset/scheme.hpp"
#include "modelset/test_function.hpp"

namespace modelset {

/// Element (q, z) of the Heisenberg group C (+)_beta R.
struct HPoint {
  cplx q = 0.0;
  double z = 0.0;
};

/// beta(q, q') = Im(conj(q) q').
inline double h_beta(cplx a, cplx b) { return (std::conj(a) * b).imag(); }
HPoint h_mul(const HPoint& a, const HPoint& b);
HPoint h_inv(const HPoint& a);

/// Gaussian integer re + i im.
struct GaussInt {
  std::int64_t re = 0;
  std::int64_t im = 0;
  friend bool operator==(const GaussInt&, const GaussInt&) = default;
};

/// Element of Gamma_N: delta = (a + b sqrt2, a - b sqrt2), xi = (c + d sqrt2, c - d sqrt2).
struct HLatticeElement {
  GaussInt a, b;
  std::int64_t c = 0, d = 0;
  friend bool operator==(const HLatticeElement&, const HLatticeElement&) = default;
};

/// The lattice Gamma_N = Delta (+)_beta Xi in H_3 x H_3 built from Z[i] and Z[sqrt2].
struct HScheme {
  /// Integer (c, d) with beta_1(delta_1, delta'_1) = c + d sqrt2 and beta_2 = c - d sqrt2.
  static std::pair<std::int64_t, std::int64_t> cocycle(const GaussInt& a, const GaussInt& b, const GaussInt& a2,
                                                       const GaussInt& b2);
  static HLatticeElement mul(const HLatticeElement& x, const HLatticeElement& y);
  static HLatticeElement inv(const HLatticeElement& x);
  static HPoint physical(const HLatticeElement& x);
  static HPoint internal(const HLatticeElement& x);

  /// Coordinates (a.re, b.re, a.im, b.im, c, d), the order used by euclidean().
  static IntVector to_coords(const HLatticeElement& x);
  static HLatticeElement from_coords(const IntVector& k);

  /// Gamma_N as a point set in (Re q1, Im q1, z1, Re q2, Im q2, z2).
  static Scheme euclidean() { return Scheme::minkowski_sqrt2(3); }
  /// 16 sqrt2.
  static double covolume();
};

struct CocycleReport {
  std::int64_t pairs = 0;
  std::int64_t failures = 0;
  double max_float_residual = 0.0;
};

/// Checks beta(delta, delta') in Xi over all a, b, a', b' in Z[i] with modulus <= bound.
CocycleReport cocycle_closure_check(int bound = 5);

/// Model set in H_3; `window` and `region` are boxes in (Re q, Im q, z).
ModelSet h_model_set(const Window& window, const Region& region);
HPoint h_point(const ModelSet& ms, Eigen::Index i);

/// Pair differences x^{-1} y with |q|^2 + z^2 <= R^2 of x^{-1} y, averaged over x in F_t.
/// Keys are Gamma_N coordinates; z holds (Re q, Im q, z) of the difference.
EmpiricalAutocorrelation h_empirical_autocorr(const ModelSet& ms, const Region& F_t, double R);
/// Merges atoms over U(1) with labels (|q|, z).
EmpiricalAutocorrelation h_radialize(const EmpiricalAutocorrelation& ac);

/// Function on C with a bounding box for its support.
struct PlaneFn {
  std::function<cplx(cplx)> eval;
  Eigen::Vector2d lower = Eigen::Vector2d::Zero();
  Eigen::Vector2d upper = Eigen::Vector2d::Zero();
  cplx operator()(cplx x) const { return eval(x); }
};

PlaneFn plane_fn(const TestFunction& f);

/// (h1 *_lambda h2)(x) = int h1(x - y) h2(y) exp(2 pi i lambda Im(conj(y) x)) dy by adaptive quadrature,
/// or by a fixed Gauss-Legendre rule with `nodes` per axis when nodes > 0.
PlaneFn twisted_convolution(const PlaneFn& h1, const PlaneFn& h2, double lambda, double tol = 1e-10, int nodes = 0);
/// The variant int h1(w') h2(w - w') exp(2 pi i lambda Im(conj(w') w)) dw', equal to the above with swapped inputs.
PlaneFn twisted_convolution_alt(const PlaneFn& h1, const PlaneFn& h2, double lambda, double tol = 1e-10,
                                int nodes = 0);

/// r_lambda(q) = int r(q, t) exp(-2 pi i lambda t) dt for r on (Re q, Im q, z).
TestFunction partial_central_transform(const TestFunction& r, double lambda);
/// Indicator of a box window in (Re q, Im q, z) as a test function.
TestFunction window_test_function(const Window& window);

/// Group autoconvolution (f* * f)(q, z) = int conj(f(u)) f(u (q, z)) du on H_3.
double h_autoconvolution(const TestFunction& f, cplx q, double z);

struct LatticeSumOptions {
  std::int64_t samples = 10000000;
  std::uint64_t seed = 1;
  double max_rel_stderr = 0.05;  // MonteCarloToleranceError above this
  double envelope = 1e-10;        // truncation level for Gaussian factors
};

struct LatticeSumReport {
  double lattice_sum = 0.0;
  double mc_norm = 0.0;  // Monte Carlo estimate of ||P_Gamma(f ⊗ r)||^2
  double mc_stderr = 0.0;
  double rel_gap = 0.0;
  long lattice_terms = 0;
};

/// Both sides of ||P_Gamma(f ⊗ r)||^2 = sum_Gamma (f* * f)(g1) (r* * r)(g2) on Gamma_N.
/// f must be U(1)-invariant in q.
LatticeSumReport lattice_sum_identity_check(const TestFunction& f, const TestFunction& r,
                                            const LatticeSumOptions& opt = {});

/// (K, chi)-spherical function exp(-pi |lambda| |q|^2) L_m(2 pi |lambda| |q|^2).
class LaguerreSpherical {
 public:
  LaguerreSpherical(double lambda, int m);
  double lambda() const { return lambda_; }
  int m() const { return m_; }
  double operator()(cplx q) const;
  /// ||omega||^2 over C, equal to 1 / (2 |lambda|).
  double norm_squared() const { return 0.5 / std::abs(lambda_); }
  /// |(1/2pi) int omega(x + e^{it} y) chi(beta(x, e^{it} y)) dt - omega(x) omega(y)|.
  double functional_residual(cplx x, cplx y, int nodes = 512) const;
  /// Smallest r with |omega(q)| <= eps for |q| >= r (bounded scan).
  double decay_radius(double eps) const;

 private:
  double lambda_;
  int m_;
};

/// Largest functional-equation residual over random pairs with |x|, |y| <= radius.
double functional_equation_residual(const LaguerreSpherical& w, int pairs = 25, std::uint64_t seed = 3,
                                    double radius = 2.0);

struct EdcReport {
  double c = 0.0;
  std::vector<double> poly;  // L(s) = sum poly[k] s^k
  double max_ratio = 0.0;    // max |omega| / (L(|q|^2) exp(-c |q|^2))
  bool pass = false;
};

/// Envelope |omega(q)| <= L(|q|^2) exp(-c |q|^2) on |q| <= qmax.
EdcReport edc_check(const LaguerreSpherical& w, double qmax = 8.0, int samples = 4000);

/// Dual of Delta per real coordinate: (e/2 + f sqrt2/4, e/2 - f sqrt2/4).
struct HDualPoint {
  std::int64_t er = 0, fr = 0, ei = 0, fi = 0;
  cplx eta1() const;
  cplx eta2() const;
};

struct BesselCoefficient {
  double raw = 0.0;        // sum over the orbit partners of |ft (chi_W)_1 (eta2)|^2
  double intensity = 0.0;  // raw / covol^2
  std::vector<HDualPoint> partners;
};

/// Orbit of eta1 under U(1) intersected with the projection of Delta^perp (finite, enumerated exactly).
BesselCoefficient bessel_branch_coefficient(const Window& window, const HDualPoint& eta);

/// Central frequency pair (lambda1, lambda2) = (g/2 + h sqrt2/4, g/2 - h sqrt2/4) in Xi^perp.
struct CentralCharacter {
  std::int64_t g = 0, h = 0;
  double lambda1() const;
  double lambda2() const;
};

struct NilpotentOptions {
  int ansatz_dim = 12;
  double scale = 0.0;  // Hermite-Gaussian width; 0 picks 0.75 / sqrt(2 pi |lambda2|)
  int nodes = 192;     // Gauss-Legendre nodes per axis
};

struct NilpotentCoefficient {
  std::vector<double> values;  // lower bound for each ansatz dimension 1..n
  double raw = 0.0;            // values.back()
  double intensity = 0.0;      // raw / covol^2
  Eigen::MatrixXcd M;
  Eigen::VectorXcd v;
  double omega_norm_squared = 0.0;
  double hermitian_residual = 0.0;
  double min_eigenvalue = 0.0;
  int rank = 0;            // ansatz functions independent under M
  double null_leak = 0.0;  // largest |v| on a skipped direction, relative to |v|
  long delta_terms = 0;
};

/// Hermite-Gaussian phi_j on C, ordered by total degree then by the real-axis index.
cplx hermite_gaussian(int j, double scale, cplx y);

/// sup |sum_Delta omega(d1) (psi* *_chi (chi_W)_chi (d2))|^2 over the span of the first n
/// Hermite-Gaussians under sum_Delta omega(d1) (psi* *_chi psi)(d2) = 1 / ||omega||^2.
NilpotentCoefficient nilpotent_branch_coefficient(const Window& window, const CentralCharacter& chi, int m,
                                                  const NilpotentOptions& opt = {});

/// CSV rows: branch, label, intensity, lower_bound, ansatz_dim, tail.
struct HPeakRow {
  std::string branch;
  std::string label;
  double intensity = 0.0;
  bool lower_bound = false;
  int ansatz_dim = 0;
  double tail = 0.0;
};
void write_heisenberg_csv(const std::vector<HPeakRow>& rows, std::ostream& os);

}  // namespace modelset
