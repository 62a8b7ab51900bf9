#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <vector>

#include "modelset/autocorr.hpp"
#include "modelset/point_group.hpp"
#include "modelset/scheme.hpp"
#include "modelset/test_function.hpp"
#include "modelset/weighted_norm.hpp"

namespace modelset {

/// Exponent p in sum_Gamma F = covol^{-p} sum_{Gamma^perp} F^, fixed by calibration.
inline constexpr int kPoissonCovolumeExponent = 1;

using FourierFn = std::function<cplx(const Eigen::VectorXd&)>;

struct PeakAtom {
  SphericalLabel label;
  IntVector dual_coords;  // coordinates of one dual point realizing the label
  Eigen::VectorXd xi2;    // its internal part
  double intensity = 0.0;
  int multiplicity = 1;   // dual points merged into this atom
};

struct PurePointMeasure {
  std::vector<PeakAtom> atoms;  // sorted by label
  double dual_radius = 0.0;
  double tail_bound = 0.0;      // largest possible intensity of an omitted dual point

  double intensity_at(const Eigen::VectorXd& xi1, double tol = 1e-6) const;
};

struct ShadowValue {
  SphericalLabel label;
  double value = 0.0;
  std::vector<Eigen::VectorXd> partners;  // the xi2 in (K xi1)^(2)
};

/// Dual points (xi1, xi2) with |xi1| <= R and |xi2| <= R, in enumeration order.
std::vector<LatticePoint> dual_points(const Scheme& scheme, double R);

/// Atoms (xi1, |ft 1_W (xi2)|^2 / covol^2) over the truncated dual lattice.
PurePointMeasure meyer_diffraction(const Scheme& scheme, const Window& window, double dual_radius);

/// S r(K xi1) = sum over xi2 with (k xi1, xi2) in Gamma^perp for some k of |r^(xi2)|^2.
/// `internal_radius` bounds the search for partners. Throws LabelNotInSpectrumError if
/// no orbit element lies in the projection of the dual lattice.
ShadowValue shadow_transform_va(const Scheme& scheme, const PointGroup& K, const FourierFn& r_ft,
                                const Eigen::VectorXd& xi1, double internal_radius = 50.0);

/// Groups truncated dual points into K-orbits of xi1; intensity per orbit = S 1_W / covol^2.
PurePointMeasure spherical_diffraction(const Scheme& scheme, const PointGroup& K, const Window& window,
                                       double dual_radius);

struct TripleCheck {
  double lattice = 0.0;     // sum_Gamma (f* * f)(g1) (r* * r)(g2)
  double dual = 0.0;        // covol^{-p} sum_{Gamma^perp} |f^|^2 |r^|^2
  double quadrature = 0.0;  // integral of |P_Gamma (f ⊗ r)|^2 over a fundamental domain
  double max_rel_err = 0.0;
  double tail_estimate = 0.0;
  long dual_terms = 0;
};

struct TripleOptions {
  int exponent = kPoissonCovolumeExponent;
  int grid = 0;                 // trapezoid nodes per axis for smooth inputs; 0 picks a default
  double tail_tolerance = 1e-8; // relative
  bool check_tail = true;
  bool with_quadrature = true;
};

TripleCheck poisson_triple_check(const Scheme& scheme, const TestFunction& f, const TestFunction& r, double dual_radius,
                                 const TripleOptions& opt = {});

/// Integral of |P_Gamma (f ⊗ r)|^2 over a fundamental domain (unnormalized Lebesgue measure).
double periodization_norm_squared(const Scheme& scheme, const TestFunction& f, const TestFunction& r, int grid = 0);

struct CalibrationReport {
  int exponent = 0;
  double unit_lattice = 0.0, unit_dual = 0.0;
  double scaled_lattice = 0.0, scaled_dual = 0.0;
};

/// Determines p from tent ⊗ tent on Z^2 (covol 1) and 2Z x 2Z (covol 4).
CalibrationReport calibrate_poisson_exponent(double dual_radius = 400.0);

/// mass of |g^|^2 outside the Euclidean ball of radius R, as ||g||^2 minus the inner integral (dim 1 or 2).
double l2_mass_outside(const FourierFn& ft, int dim, double total_mass, double R);

struct ConsistencyReport {
  double empirical = 0.0;
  double theoretical = 0.0;
  double abs_gap = 0.0;
  double rel_gap = 0.0;
  double tail_estimate = 0.0;
};

/// Empirical eta(f* * f) against sum_omega I(omega) |spherical_ft f (omega)|^2.
ConsistencyReport consistency_harness(const EmpiricalAutocorrelation& ac, const PointGroup& K, const Window& window,
                                      const TestFunction& f, const PurePointMeasure& diffraction,
                                      const Scheme& scheme);

/// Convenience overload that estimates the autocorrelation from the model set over F_t.
ConsistencyReport consistency_harness(const ModelSet& ms, const Region& F_t, const PointGroup& K, const Window& window,
                                      const TestFunction& f, const PurePointMeasure& diffraction);

struct NormBoundCheck {
  double lhs = 0.0;  // ||P_Gamma (f ⊗ r)||_2
  double rhs = 0.0;  // C ||f||_{2,alpha} ||r||_{2,alpha}
  bool pass = false;
};

NormBoundCheck periodization_norm_bound_check(const TestFunction& f, const TestFunction& r,
                                              const WeightedNormParams& params, const Scheme& scheme, int grid = 0);

/// Peak CSV rows: branch, label components, intensity, tail_bound.
void write_peaks_csv(const PurePointMeasure& peaks, std::ostream& os);

/// Two columns (first label coordinate, intensity), stable-sorted by label.
void emit_plot_data(const PurePointMeasure& peaks, std::ostream& os);
/// Parses emit_plot_data output back into (coordinate, intensity) pairs.
std::vector<std::pair<double, double>> read_plot_data(std::istream& is);

}  // namespace modelset
