#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include "modelset/lattice.hpp"
#include "modelset/window.hpp"

namespace modelset {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Lattice in R^n x R^m; the first n coordinates are physical, the last m internal.
struct Scheme {
  int n = 1;
  int m = 1;
  LatticeBasis gamma;

  Scheme() = default;
  Scheme(int n, int m, LatticeBasis gamma);

  int dim() const { return n + m; }
  Eigen::VectorXd physical(const Eigen::VectorXd& x) const { return x.head(n); }
  Eigen::VectorXd internal(const Eigen::VectorXd& x) const { return x.tail(m); }

  /// Z^n x Z^m, the trivial (non-dense) example.
  static Scheme integer(int n, int m);
  /// gamma(a, b) = (a + b sqrt2, a - b sqrt2).
  static Scheme sqrt2_chain();
  /// Z[sqrt2]^k embedded as (a_i + b_i sqrt2)_i in physical and (a_i - b_i sqrt2)_i in internal space;
  /// integer coordinates ordered (a_1, b_1, ..., a_k, b_k).
  static Scheme minkowski_sqrt2(int k);
};

/// Finite sample of the model set: columns are points.
struct ModelSet {
  Scheme scheme;
  Window window;
  Region region;
  IntMatrix coords;          // (n+m) x N
  Eigen::MatrixXd physical;  // n x N
  Eigen::MatrixXd internal;  // m x N

  Eigen::Index size() const { return physical.cols(); }
  bool empty() const { return size() == 0; }
};

/// { p_G(gamma) : p_H(gamma) in W, p_G(gamma) in region }.
ModelSet cut_and_project(const Scheme& scheme, const Window& window, const Region& region);

/// Point count per unit physical volume.
double density(const ModelSet& ms);

struct FlcReport {
  double min_distance = 0.0;
  int max_count_per_ball = 0;
};

/// Minimum pairwise gap, and maximum number of sample points in a closed
/// ball of radius `probe_radius` centred at a sample point.
FlcReport flc_report(const ModelSet& ms, double probe_radius);

/// Upper bound for the number of points in a box of side lengths `sides`,
/// from the lattice points of Gamma in (box + bbox(W)) inflated by one cell.
double count_bound(const Scheme& scheme, const Window& window, const Eigen::VectorXd& sides);

struct SchemeDiagnostics {
  bool injective = true;
  double min_physical_norm = 0.0;  // smallest |p_G(gamma)| over nonzero gamma with small internal part
  bool dense = true;
  double coverage_gap = 0.0;  // largest distance from a probe point to the nearest internal projection
  double epsilon = 0.0;
};

/// Finite proxies for injective projection to G and dense projection to H.
/// Warns (never throws) on failure; `epsilon <= 0` selects 0.05 * diam(W).
SchemeDiagnostics diagnose_scheme(const Scheme& scheme, const Window& window, double radius = 50.0,
                                  double epsilon = 0.0);

/// CSV rows: k_0.., x_0.., h_0..
void write_csv(const ModelSet& ms, std::ostream& os);

}  // namespace modelset
