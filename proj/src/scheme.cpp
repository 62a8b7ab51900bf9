#include "modelset/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <ostream>

#include "cell_grid.hpp"
#include "modelset/error.hpp"

namespace modelset {

Scheme::Scheme(int n_, int m_, LatticeBasis gamma_) : n(n_), m(m_), gamma(std::move(gamma_)) {
  if (n < 1 || m < 0 || gamma.dim() != n + m) throw Error("scheme dimensions do not match the lattice");
}

Scheme Scheme::integer(int n, int m) {
  QuadraticMatrix id{n + m, std::vector<QuadraticNumber>(static_cast<std::size_t>((n + m) * (n + m)))};
  for (int i = 0; i < n + m; ++i) id(i, i) = QuadraticNumber(1);
  return Scheme(n, m, LatticeBasis(id));
}

Scheme Scheme::sqrt2_chain() { return minkowski_sqrt2(1); }

Scheme Scheme::minkowski_sqrt2(int k) {
  const int d = 2 * k;
  QuadraticMatrix b{d, std::vector<QuadraticNumber>(static_cast<std::size_t>(d * d))};
  const QuadraticNumber root2(Rational(0), Rational(1), 2);
  for (int i = 0; i < k; ++i) {
    b(i, 2 * i) = QuadraticNumber(1);
    b(i, 2 * i + 1) = root2;
    b(k + i, 2 * i) = QuadraticNumber(1);
    b(k + i, 2 * i + 1) = -root2;
  }
  return Scheme(k, k, LatticeBasis(b));
}

ModelSet cut_and_project(const Scheme& scheme, const Window& window, const Region& region) {
  if (!region.is_bounded()) throw UnboundedRegionError("model-set region must be bounded");
  if (region.dim() != scheme.n) throw Error("region must live in physical space");
  if (window.dim() != scheme.m) throw Error("window must live in internal space");
  ModelSet ms{scheme, window, region, IntMatrix(scheme.dim(), 0), Eigen::MatrixXd(scheme.n, 0),
              Eigen::MatrixXd(scheme.m, 0)};
  if (window.pieces().empty() || region.is_empty()) return ms;

  const int n = scheme.n;
  const int m = scheme.m;
  Eigen::VectorXd lo(n + m), hi(n + m);
  lo << region.lower(), window.bbox_lower();
  hi << region.upper(), window.bbox_upper();
  auto pts = enumerate_points_in_box(scheme.gamma, lo, hi, [&](const Eigen::VectorXd& x) {
    return region.contains(x.head(n)) && window.contains(x.tail(m));
  });
  const auto count = static_cast<Eigen::Index>(pts.size());
  ms.coords.resize(n + m, count);
  ms.physical.resize(n, count);
  ms.internal.resize(m, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const auto& p = pts[static_cast<std::size_t>(i)];
    ms.coords.col(i) = p.coords;
    ms.physical.col(i) = p.point.head(n);
    ms.internal.col(i) = p.point.tail(m);
  }
  return ms;
}

double density(const ModelSet& ms) {
  double v = ms.region.volume();
  if (!(v > 0.0)) throw Error("density needs a region of positive volume");
  return static_cast<double>(ms.size()) / v;
}

FlcReport flc_report(const ModelSet& ms, double probe_radius) {
  FlcReport rep;
  const Eigen::Index N = ms.size();
  if (N < 2) throw Error("flc_report needs at least two points");

  // Exact minimum gap by a sweep along the first coordinate.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(N));
  for (Eigen::Index i = 0; i < N; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return ms.physical(0, a) < ms.physical(0, b); });
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      double dx = ms.physical(0, order[b]) - ms.physical(0, order[a]);
      if (dx >= best) break;
      best = std::min(best, (ms.physical.col(order[b]) - ms.physical.col(order[a])).norm());
    }
  }
  rep.min_distance = best;

  if (ms.scheme.n <= 4 && probe_radius > 0.0) {
    detail::CellGrid grid(ms.physical, probe_radius);
    for (Eigen::Index i = 0; i < N; ++i) {
      int c = 0;
      grid.for_each_near(ms.physical.col(i), probe_radius, [&](Eigen::Index) { ++c; });
      rep.max_count_per_ball = std::max(rep.max_count_per_ball, c);
    }
  } else {
    for (Eigen::Index i = 0; i < N; ++i) {
      int c = 0;
      for (Eigen::Index j = 0; j < N; ++j)
        if ((ms.physical.col(j) - ms.physical.col(i)).norm() <= probe_radius) ++c;
      rep.max_count_per_ball = std::max(rep.max_count_per_ball, c);
    }
  }
  return rep;
}

double count_bound(const Scheme& scheme, const Window& window, const Eigen::VectorXd& sides) {
  if (sides.size() != scheme.n) throw Error("count_bound sides must be physical");
  if (window.pieces().empty()) return 0.0;
  // Disjoint translates gamma + B[0,1)^d of the counted points fit in the box
  // enlarged by the extent of the fundamental parallelepiped.
  Eigen::VectorXd ext = scheme.gamma.columns().cwiseAbs().rowwise().sum();
  Eigen::VectorXd full(scheme.dim());
  full << sides, window.bbox_upper() - window.bbox_lower();
  return (full + ext).prod() / covolume(scheme.gamma);
}

SchemeDiagnostics diagnose_scheme(const Scheme& scheme, const Window& window, double radius, double epsilon) {
  SchemeDiagnostics diag;
  const int n = scheme.n;
  const int m = scheme.m;

  Eigen::VectorXd lo(n + m), hi(n + m);
  lo << Eigen::VectorXd::Constant(n, -1.0), Eigen::VectorXd::Constant(m, -radius);
  hi << Eigen::VectorXd::Constant(n, 1.0), Eigen::VectorXd::Constant(m, radius);
  diag.min_physical_norm = std::numeric_limits<double>::infinity();
  for (const auto& p : enumerate_points_in_box(scheme.gamma, lo, hi, nullptr)) {
    if (p.coords.isZero()) continue;
    double norm = p.point.head(n).norm();
    diag.min_physical_norm = std::min(diag.min_physical_norm, norm);
    if (norm <= 1e-9) diag.injective = false;
  }

  if (m == 0) return diag;
  Eigen::VectorXd ref_lo = Eigen::VectorXd::Constant(m, -1.0);
  Eigen::VectorXd ref_hi = Eigen::VectorXd::Constant(m, 1.0);
  if (!window.pieces().empty()) {
    ref_lo = window.bbox_lower();
    ref_hi = window.bbox_upper();
  }
  double diam = (ref_hi - ref_lo).norm();
  diag.epsilon = epsilon > 0.0 ? epsilon : 0.05 * diam;
  const double eps = diag.epsilon;

  lo << Eigen::VectorXd::Constant(n, -radius), ref_lo.array() - eps;
  hi << Eigen::VectorXd::Constant(n, radius), ref_hi.array() + eps;
  auto pts = enumerate_points_in_box(scheme.gamma, lo, hi, nullptr);
  Eigen::MatrixXd proj(m, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) proj.col(static_cast<Eigen::Index>(i)) = pts[i].point.tail(m);

  if (m > 4 || proj.cols() == 0) {
    diag.dense = proj.cols() > 0;
    diag.coverage_gap = proj.cols() > 0 ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    detail::CellGrid grid(proj, eps);
    Eigen::VectorXi steps(m);
    for (int i = 0; i < m; ++i) steps[i] = std::max(1, static_cast<int>(std::ceil((ref_hi[i] - ref_lo[i]) / eps)));
    Eigen::VectorXi idx = Eigen::VectorXi::Zero(m);
    Eigen::VectorXd probe(m);
    while (true) {
      for (int i = 0; i < m; ++i) probe[i] = ref_lo[i] + (ref_hi[i] - ref_lo[i]) * idx[i] / steps[i];
      double nearest = std::numeric_limits<double>::infinity();
      grid.for_each_near(probe, eps, [&](Eigen::Index j) { nearest = std::min(nearest, (proj.col(j) - probe).norm()); });
      diag.coverage_gap = std::max(diag.coverage_gap, nearest);
      int i = 0;
      while (i < m && idx[i] == steps[i]) idx[i++] = 0;
      if (i == m) break;
      ++idx[i];
    }
    diag.dense = diag.coverage_gap <= eps;
  }
  if (!diag.injective) std::cerr << "warning: lattice does not project injectively to physical space\n";
  if (!diag.dense) std::cerr << "warning: internal projection is not " << eps << "-dense at radius " << radius << "\n";
  return diag;
}

void write_csv(const ModelSet& ms, std::ostream& os) {
  const int d = ms.scheme.dim();
  for (int i = 0; i < d; ++i) os << "k" << i << ",";
  for (int i = 0; i < ms.scheme.n; ++i) os << "x" << i << ",";
  for (int i = 0; i < ms.scheme.m; ++i) os << "h" << i << (i + 1 < ms.scheme.m ? "," : "");
  os << "\n";
  char buf[40];
  for (Eigen::Index p = 0; p < ms.size(); ++p) {
    for (int i = 0; i < d; ++i) os << ms.coords(i, p) << ",";
    for (int i = 0; i < ms.scheme.n; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", ms.physical(i, p));
      os << buf << ",";
    }
    for (int i = 0; i < ms.scheme.m; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", ms.internal(i, p));
      os << buf << (i + 1 < ms.scheme.m ? "," : "");
    }
    os << "\n";
  }
}

}  // namespace modelset
