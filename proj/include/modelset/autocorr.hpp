#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <vector>

#include "modelset/point_group.hpp"
#include "modelset/scheme.hpp"
#include "modelset/test_function.hpp"

namespace modelset {

struct AutocorrAtom {
  IntVector key;       // integer lattice difference; empty after radialization
  Eigen::VectorXd z;   // physical difference, or the orbit label after radialization
  std::int64_t count = 0;
  double coefficient = 0.0;
};

/// Window-averaged pair-difference measure truncated to |z| <= cutoff.
struct EmpiricalAutocorrelation {
  double cutoff = 0.0;
  double volume = 0.0;  // m_G(F_t)
  bool radialized = false;
  std::vector<AutocorrAtom> atoms;

  /// Coefficient at a physical difference (or orbit label), 0 if absent.
  double coefficient_at(const Eigen::VectorXd& z, double tol = 1e-9) const;
};

/// (1 / m(F_t)) sum_{x in P ∩ F_t} sum_{y in P, |y - x| <= R} delta_{y - x}.
/// Requires the R-neighbourhood of F_t to lie inside the sampled region.
EmpiricalAutocorrelation empirical_autocorr(const ModelSet& ms, const Region& F_t, double R);

/// vol(W ∩ (W - z*)) / covol(Gamma), z* the internal part of gamma(k).
OverlapVolume theoretical_autocorr_coeff(const Scheme& scheme, const Window& window, const IntVector& k);

/// Sums coefficients over K-orbits of the differences; labels are lexicographic minima.
EmpiricalAutocorrelation radialize(const EmpiricalAutocorrelation& ac, const PointGroup& K);

/// sum_z c(z) f(z); throws SupportExceedsCutoffError unless supp f lies in ball(cutoff).
std::complex<double> pair_against_test_function(const EmpiricalAutocorrelation& ac, const TestFunction& f);

/// max |c_t(z) - c_2t(z)| * t over the union of atoms.
double stability_constant(const EmpiricalAutocorrelation& at_t, const EmpiricalAutocorrelation& at_2t, double t);

struct ApproxSequence {
  enum class Family { Box, Ball };
  Family family = Family::Box;
  int dim = 1;
  std::vector<double> scales;  // strictly increasing
};

struct ApproxDiagnostic {
  std::vector<double> values;  // |beta_t(xi)| per scale
  std::vector<double> bounds;  // envelope per scale
  double tail_max = 0.0;       // max over the second half of the scales
  bool pass = false;           // tail_max <= threshold
};

/// |normalized transform of 1_{F_t}| at xi != 0 for each scale t. Boxes use
/// prod sin(2 pi xi_i t) / (2 pi xi_i t) with envelope 1 / (2 pi |xi|_inf t);
/// balls use the Bessel closed form, with envelope from |J_{d/2}(x)| <= sqrt(2 / (pi x)).
ApproxDiagnostic approx_sequence_diagnostic(const ApproxSequence& seq, const Eigen::VectorXd& xi,
                                            double threshold = 1e-2);

/// CSV rows: z_0.., orbit label, coefficient.
void write_csv(const EmpiricalAutocorrelation& ac, std::ostream& os);

}  // namespace modelset
